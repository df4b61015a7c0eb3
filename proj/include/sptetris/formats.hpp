#pragma once

#include <json.hpp>

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sptetris/construct.hpp"
#include "sptetris/readiness.hpp"
#include "sptetris/search.hpp"
#include "sptetris/verify.hpp"

namespace sptetris {

inline constexpr const char * kGeneratorName = "sptetris";
inline constexpr const char * kGeneratorVersion = "0.1.0";

// Spec files
//
//   {"dim": 2, "eigenvalues": ["2", "5"], "norms_squared": ["3", "3", "1"]}
//
// with exactly one of "norms_squared" (exact rationals), "norms" (decimal
// strings, squared and rounded to a denominator <= 10^6 with a warning) or
// "unit": true (M unit vectors, M = sum of eigenvalues).

struct LoadedSpec {
    FrameSpec spec;
    std::vector<std::string> warnings;
};

LoadedSpec spec_from_json(const nlohmann::json & j);
LoadedSpec load_spec_file(const std::filesystem::path & path);
nlohmann::json spec_to_json(const FrameSpec & spec);

/// Accepts "p/q" strings and JSON integers.
Rational rational_from_json(const nlohmann::json & j);

nlohmann::json radical_to_json(const RadicalScalar & r);
RadicalScalar radical_from_json(const nlohmann::json & j);

// Matrix files: {"dim", "count", "entries": [{row, col, sign, rad}],
// "metadata": {eigenvalues, norms_squared, blockLog, generator}}, entries
// sorted by (col, row), 0-based, zeros omitted.

struct MatrixMetadata {
    std::optional<std::vector<Rational>> eigenvalues;
    std::optional<std::vector<Rational>> norms_squared;
};

nlohmann::json matrix_to_json(const SynthesisMatrix & f, const MatrixMetadata & meta, bool reproducible);

struct LoadedMatrix {
    SynthesisMatrix matrix;
    MatrixMetadata metadata;
    /// The spec recorded in the metadata, when both sequences are present.
    [[nodiscard]] std::optional<FrameSpec> spec() const;
};

LoadedMatrix matrix_from_json(const nlohmann::json & j);

/// Row-major decimal floats with 17 significant digits, one row per line.
void write_csv(std::ostream & os, const SynthesisMatrix & f);
DenseMatrix read_csv(std::istream & is);

nlohmann::json report_to_json(const VerificationReport & r);
nlohmann::json report_to_json(const FloatVerificationReport & r);
nlohmann::json report_to_json(const ReadinessReport & r, const std::optional<Partition> & forced);
nlohmann::json result_to_json(const SearchResult & r);
nlohmann::json verdict_to_json(const UnitTightVerdict & v);

/// Pretty-printed, keys sorted, LF terminated.
std::string dump(const nlohmann::json & j);

nlohmann::json read_json_file(const std::filesystem::path & path);

} // namespace sptetris
