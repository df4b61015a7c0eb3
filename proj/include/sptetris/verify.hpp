#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "sptetris/construct.hpp"
#include "sptetris/readiness.hpp"
#include "sptetris/scalar.hpp"

namespace sptetris {

struct OrthogonalityMode {
    enum class Kind { Exact, Float };

    Kind kind = Kind::Exact;
    double tolerance = 0.0;                      // Float only
    std::uint64_t factor_bound = kDefaultFactorBound; // Exact only

    static OrthogonalityMode exact(std::uint64_t factor_bound = kDefaultFactorBound)
    {
        return {Kind::Exact, 0.0, factor_bound};
    }
    static OrthogonalityMode floating(double tolerance = 1e-10) { return {Kind::Float, tolerance, kDefaultFactorBound}; }

    friend bool operator==(const OrthogonalityMode &, const OrthogonalityMode &) = default;
};

struct VerificationReport {
    std::vector<Rational> row_square_sums;
    std::vector<Rational> col_square_sums;
    bool orthogonal = false;
    OrthogonalityMode mode;
    std::size_t nnz = 0;
    std::size_t max_per_column = 0;
    /// min / max of the row sums; only meaningful when orthogonal.
    std::optional<std::pair<Rational, Rational>> frame_bounds;
    std::optional<bool> matches_spec;

    friend bool operator==(const VerificationReport &, const VerificationReport &) = default;
};

/// Throws ZeroRow for a row without nonzeros and, in exact mode,
/// FactorizationIncomplete when a radical cannot be canonicalized.
VerificationReport verify_matrix(const SynthesisMatrix & f, const FrameSpec * spec, OrthogonalityMode mode);

inline VerificationReport verify_matrix(const SynthesisMatrix & f, const FrameSpec & spec,
                                        OrthogonalityMode mode = OrthogonalityMode::exact())
{
    return verify_matrix(f, &spec, mode);
}

/// Exact inner product test of two rows: equal radicands are combined first,
/// leftovers are compared after square-free canonicalization.
bool rows_orthogonal_exact(const SynthesisMatrix & f, std::size_t r1, std::size_t r2,
                           std::uint64_t factor_bound = kDefaultFactorBound);

struct Sparsity {
    std::size_t nnz = 0;
    std::size_t max_per_column = 0;

    friend bool operator==(const Sparsity &, const Sparsity &) = default;
};

Sparsity sparsity(const SynthesisMatrix & f);

/// Extreme eigenvalues of F F^*. Uses the exact row sums when the rows are
/// orthogonal and a dense symmetric eigensolver otherwise (relative accuracy
/// about 1e-9). Throws ZeroRow.
std::pair<double, double> frame_bounds_float(const SynthesisMatrix & f);

/// Row-major dense matrix of doubles, as read from CSV.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;

    [[nodiscard]] double operator()(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

DenseMatrix to_dense(const SynthesisMatrix & f);

struct FloatVerificationReport {
    std::vector<double> row_square_sums;
    std::vector<double> col_square_sums;
    bool orthogonal = false;
    double tolerance = 0.0;
    std::size_t nnz = 0;
    std::size_t max_per_column = 0;
    std::pair<double, double> frame_bounds{0.0, 0.0}; // eigenvalue extremes of F F^*
};

/// Float-only verification for imported matrices. |<r_i, r_j>| must not
/// exceed tolerance * sqrt(|r_i|^2 |r_j|^2). Throws ZeroRow.
FloatVerificationReport verify_dense(const DenseMatrix & f, double tolerance = 1e-10);

} // namespace sptetris
