#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "sptetris/scalar.hpp"

namespace sptetris {

/// Request for a 2x2 block with orthogonal rows, first-row square sum `x`
/// and column square norms `a1sq`, `a2sq`.
struct BlockSpec {
    Rational x;
    Rational a1sq;
    Rational a2sq;

    /// Second-row square sum implied by the trace: a1sq + a2sq - x.
    [[nodiscard]] Rational y() const { return a1sq + a2sq - x; }
};

enum class BlockCondition {
    NonPositiveInput, // a column norm is not strictly positive
    MassBelowTarget,  // a1sq + a2sq >= x > 0 fails
    MixedOrdering,    // column norms straddle x
};

std::string_view to_string(BlockCondition c);

/// Rows are [[alpha, beta], [c*beta, -c*alpha]]; zero entries are allowed on
/// the boundaries a1sq == x, a2sq == x and y == 0.
struct Block2x2 {
    std::array<std::array<RadicalScalar, 2>, 2> entries;

    [[nodiscard]] const RadicalScalar & at(int row, int col) const { return entries[row][col]; }
    /// True when some entry is exactly zero.
    [[nodiscard]] bool degenerate() const;
    /// The y == 0 boundary: second row vanishes (c = 0).
    [[nodiscard]] bool zero_second_row() const { return entries[1][0].is_zero() && entries[1][1].is_zero(); }
};

/// First existence condition that fails, or nullopt when the block exists.
std::optional<BlockCondition> block_violation(const BlockSpec & spec);

inline bool block_exists(const BlockSpec & spec)
{
    return !block_violation(spec).has_value();
}

/// Exact block construction; throws BlockInfeasible naming the failed condition.
Block2x2 build_block(const BlockSpec & spec);

} // namespace sptetris
