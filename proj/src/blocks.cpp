#include "sptetris/blocks.hpp"

#include <string>

namespace sptetris {

std::string_view to_string(BlockCondition c)
{
    switch (c) {
    case BlockCondition::NonPositiveInput: return "NonPositiveInput";
    case BlockCondition::MassBelowTarget: return "MassBelowTarget";
    case BlockCondition::MixedOrdering: return "MixedOrdering";
    }
    return "Unknown";
}

bool Block2x2::degenerate() const
{
    for (const auto & row : entries)
        for (const auto & e : row)
            if (e.is_zero())
                return true;
    return false;
}

std::optional<BlockCondition> block_violation(const BlockSpec & spec)
{
    if (spec.a1sq.sign() <= 0 || spec.a2sq.sign() <= 0)
        return BlockCondition::NonPositiveInput;
    if (spec.x.sign() <= 0 || spec.a1sq + spec.a2sq < spec.x)
        return BlockCondition::MassBelowTarget;
    const bool both_above = spec.a1sq >= spec.x && spec.a2sq >= spec.x;
    const bool both_below = spec.a1sq <= spec.x && spec.a2sq <= spec.x;
    if (!both_above && !both_below)
        return BlockCondition::MixedOrdering;
    return std::nullopt;
}

Block2x2 build_block(const BlockSpec & spec)
{
    if (const auto failed = block_violation(spec))
        throw Error(ErrorKind::BlockInfeasible,
                    "no 2x2 block for x=" + spec.x.to_string() + ", a1^2=" + spec.a1sq.to_string()
                        + ", a2^2=" + spec.a2sq.to_string() + ": " + std::string(to_string(*failed)));

    const Rational & x = spec.x;
    const Rational y = spec.y();
    Block2x2 block;

    if (x == y) {
        // existence forces a1sq == a2sq == x; every entry squares to x/2
        const RadicalScalar half = RadicalScalar::sqrt(x / Rational(2));
        block.entries = {{{half, half}, {half, half.negated()}}};
        return block;
    }

    const Rational gap = x - y;
    const Rational alpha_sq = x * (spec.a1sq - y) / gap;
    const Rational beta_sq = x * (x - spec.a1sq) / gap;
    const Rational c_beta_sq = y * (x - spec.a1sq) / gap;
    const Rational c_alpha_sq = y * (spec.a1sq - y) / gap;

    block.entries = {{{RadicalScalar::sqrt(alpha_sq), RadicalScalar::sqrt(beta_sq)},
                      {RadicalScalar::sqrt(c_beta_sq), RadicalScalar::sqrt(c_alpha_sq).negated()}}};
    return block;
}

} // namespace sptetris
