#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sptetris/scalar.hpp"

namespace sptetris {

/// Target spectrum (one eigenvalue per row) and squared column norms, both
/// ordered. All values are strictly positive; the trace identity is *not*
/// enforced here because a mismatch is reported as a verdict.
class FrameSpec {
  public:
    FrameSpec(std::vector<Rational> eigenvalues, std::vector<Rational> norms_sq);

    [[nodiscard]] std::size_t dim() const { return eigenvalues_.size(); }
    [[nodiscard]] std::size_t count() const { return norms_sq_.size(); }
    [[nodiscard]] const std::vector<Rational> & eigenvalues() const { return eigenvalues_; }
    [[nodiscard]] const std::vector<Rational> & norms_sq() const { return norms_sq_; }
    [[nodiscard]] bool trace_holds() const;

    friend bool operator==(const FrameSpec &, const FrameSpec &) = default;

  private:
    std::vector<Rational> eigenvalues_;
    std::vector<Rational> norms_sq_;
};

Rational sum(std::span<const Rational> values);

/// Cut points m_1 <= ... <= m_N = M. cuts[k-1] holds m_k, i.e. the number of
/// columns whose whole mass fits into the first k rows. A cut may repeat only
/// right after a row that closed exactly; the gap rule forces a strict step
/// after every 2x2 block.
struct Partition {
    std::vector<std::size_t> cuts;

    friend bool operator==(const Partition &, const Partition &) = default;
};

enum class ReadinessCondition {
    TraceMismatch,
    UpperBoundI, // cumulative bound broken; the forced partition never does this
    GapII,       // a pending block needs two columns before the next cut
    NormBoundII, // the block's second column is lighter than the deficit
};

std::string_view to_string(ReadinessCondition c);

struct Violation {
    std::size_t k; // 1-based row index; 0 for TraceMismatch
    ReadinessCondition condition;

    friend bool operator==(const Violation &, const Violation &) = default;
};

struct ReadinessReport {
    bool ready = false;
    std::optional<Partition> partition;
    std::optional<Violation> violation;
};

/// m_k is the unique index with A(m_k) <= L(k) < A(m_k + 1), where A and L
/// are cumulative norm and eigenvalue sums. Throws TraceMismatch.
Partition forced_partition(const FrameSpec & spec);

/// Single O(M + N) scan over the forced partition.
ReadinessReport check_ready(const FrameSpec & spec);

/// Condition a^2_{M-2l} + a^2_{M-2l-1} <= lambda_{N-l} for l = 0..N-1 on
/// increasing sequences; a term whose index falls below 1 counts as zero.
/// Throws NotSorted.
bool easy_sufficient(const FrameSpec & spec);

/// a_1^2 + a_2^2 <= sum / N for a decreasing norm list. Throws NotSorted.
bool tight_sufficient(std::span<const Rational> norms_sq, std::size_t dim);

/// Readiness against N copies of lambda = sum(norms_sq) / N.
ReadinessReport tight_ready(std::span<const Rational> norms_sq, std::size_t dim);

/// Readiness of unit norms against the eigenvalues; throws TraceMismatch
/// unless the eigenvalues sum to `count`.
ReadinessReport unit_ready(std::span<const Rational> eigenvalues, std::size_t count);

/// Majorization of the norms by the eigenvalues (both sorted decreasing).
bool majorizes(std::span<const Rational> eigenvalues, std::span<const Rational> norms_sq);

} // namespace sptetris
