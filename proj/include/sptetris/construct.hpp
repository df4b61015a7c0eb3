#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "sptetris/blocks.hpp"
#include "sptetris/readiness.hpp"
#include "sptetris/scalar.hpp"

namespace sptetris {

enum class BlockKind { Singleton, Block2x2, DegenerateBlock };

std::string_view to_string(BlockKind kind);
std::optional<BlockKind> block_kind_from_string(std::string_view text);

/// One placement made by a constructor. Spans are inclusive and 0-based.
struct BlockRecord {
    BlockKind kind;
    std::size_t row_first;
    std::size_t row_last;
    std::size_t col_first;
    std::size_t col_last;

    friend bool operator==(const BlockRecord &, const BlockRecord &) = default;
};

/// Sparse N x M synthesis matrix. Column m is the m-th frame vector. Only
/// nonzero entries are stored, keyed by (col, row) so iteration follows the
/// on-disk ordering.
class SynthesisMatrix {
  public:
    using Key = std::pair<std::size_t, std::size_t>; // (col, row)

    SynthesisMatrix(std::size_t dim, std::size_t count);

    [[nodiscard]] std::size_t dim() const { return dim_; }
    [[nodiscard]] std::size_t count() const { return count_; }

    /// Stores `value` at (row, col); a zero value erases the entry.
    void set(std::size_t row, std::size_t col, const RadicalScalar & value);
    [[nodiscard]] RadicalScalar at(std::size_t row, std::size_t col) const;

    [[nodiscard]] const std::map<Key, RadicalScalar> & entries() const { return entries_; }
    /// Nonzeros of one row as (col, value), ordered by column.
    [[nodiscard]] std::vector<std::pair<std::size_t, RadicalScalar>> row(std::size_t r) const;
    /// Nonzeros of one column as (row, value), ordered by row.
    [[nodiscard]] std::vector<std::pair<std::size_t, RadicalScalar>> column(std::size_t c) const;

    [[nodiscard]] const std::vector<BlockRecord> & block_log() const { return log_; }
    void log(const BlockRecord & record) { log_.push_back(record); }

    /// Copies `sub` (entries and log) with its origin at (row_offset, col_offset).
    void embed(const SynthesisMatrix & sub, std::size_t row_offset, std::size_t col_offset);
    /// Multiplies every entry by sqrt(factor), i.e. every radicand by factor.
    void scale_squares(const Rational & factor);

    friend bool operator==(const SynthesisMatrix &, const SynthesisMatrix &) = default;

  private:
    void check_index(std::size_t row, std::size_t col) const;

    std::size_t dim_;
    std::size_t count_;
    std::map<Key, RadicalScalar> entries_;
    std::vector<BlockRecord> log_;
};

enum class StuckReason {
    BlockInfeasible,   // the 2x2 block the cursor needs fails the existence test
    NegativeRemainder, // the block's second row overshoots the next eigenvalue
    NoRowBelow,        // a block is needed in the last row
    ColumnsExhausted,  // a row still has mass but the columns ran out
    ColumnsUnused,     // all rows completed before the last column
};

std::string_view to_string(StuckReason reason);

class ConstructionStuck : public Error {
  public:
    ConstructionStuck(std::size_t row, std::size_t col, StuckReason reason, std::optional<BlockCondition> block,
                      const std::string & what)
        : Error(ErrorKind::ConstructionStuck, what), row_(row), col_(col), reason_(reason), block_(block)
    {
    }

    [[nodiscard]] std::size_t row() const { return row_; }
    [[nodiscard]] std::size_t col() const { return col_; }
    [[nodiscard]] StuckReason reason() const { return reason_; }
    [[nodiscard]] std::optional<BlockCondition> block_condition() const { return block_; }

  private:
    std::size_t row_;
    std::size_t col_;
    StuckReason reason_;
    std::optional<BlockCondition> block_;
};

/// Prescribed-norms Spectral Tetris. Works on a private copy of the spectrum
/// and re-tests block existence at every step, so it fails with
/// ConstructionStuck exactly when check_ready(spec) is not ready.
SynthesisMatrix pnstc(const FrameSpec & spec);

/// Unit-norm Spectral Tetris: pnstc with every squared norm equal to 1.
SynthesisMatrix stc(std::span<const Rational> eigenvalues, std::size_t count);

struct UnitTightVerdict {
    bool feasible = false;
    std::int64_t numerator = 0;   // M / N in lowest terms
    std::int64_t denominator = 1;
    std::optional<std::int64_t> witness_l;
    std::optional<std::int64_t> failing_k;
};

/// Whether STC builds a unit-norm tight frame of `count` vectors in R^dim.
UnitTightVerdict unit_tight_feasible(std::int64_t count, std::int64_t dim);

/// Smallest k in 1..N-1 with k*lambda non-integral and
/// floor(k*lambda) > (k+1)*lambda - 2, for lambda = M/N in (1, 2).
std::optional<std::int64_t> k_inequality_scan(std::int64_t count, std::int64_t dim);

/// Unit-norm tight frame; block diagonal over gcd(M, N) copies.
SynthesisMatrix unit_tight(std::int64_t count, std::int64_t dim);

struct EqualNormFrame {
    std::int64_t r;
    Rational norm_sq; // sum(lambda) / r^2, shared by all r^2 columns
    SynthesisMatrix matrix;
};

/// Smallest r with r^2 lambda_N / S >= 2 and r^2 (1 - lambda_1 / S) >= 3.
std::int64_t minimal_equal_norm_r(std::span<const Rational> eigenvalues);

/// Equal-norm frame with spectrum `eigenvalues` (positive, non-increasing,
/// at least two of them): STC on the rescaled spectrum, then rescaled back.
EqualNormFrame equal_norm_frame(std::span<const Rational> eigenvalues, std::optional<std::int64_t> r_override = {});

} // namespace sptetris
