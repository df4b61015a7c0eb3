#include "sptetris/construct.hpp"

#include <numeric>
#include <string>

namespace sptetris {

std::string_view to_string(BlockKind kind)
{
    switch (kind) {
    case BlockKind::Singleton: return "Singleton";
    case BlockKind::Block2x2: return "Block2x2";
    case BlockKind::DegenerateBlock: return "DegenerateBlock";
    }
    return "Unknown";
}

std::optional<BlockKind> block_kind_from_string(std::string_view text)
{
    for (BlockKind k : {BlockKind::Singleton, BlockKind::Block2x2, BlockKind::DegenerateBlock})
        if (to_string(k) == text)
            return k;
    return std::nullopt;
}

std::string_view to_string(StuckReason reason)
{
    switch (reason) {
    case StuckReason::BlockInfeasible: return "BlockInfeasible";
    case StuckReason::NegativeRemainder: return "NegativeRemainder";
    case StuckReason::NoRowBelow: return "NoRowBelow";
    case StuckReason::ColumnsExhausted: return "ColumnsExhausted";
    case StuckReason::ColumnsUnused: return "ColumnsUnused";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// SynthesisMatrix

SynthesisMatrix::SynthesisMatrix(std::size_t dim, std::size_t count) : dim_(dim), count_(count)
{
    if (dim == 0 || count == 0)
        throw Error(ErrorKind::InvalidDims, "synthesis matrix needs positive dimensions");
}

void SynthesisMatrix::check_index(std::size_t row, std::size_t col) const
{
    if (row >= dim_ || col >= count_)
        throw Error(ErrorKind::OutOfRange, "entry (" + std::to_string(row) + ", " + std::to_string(col)
                                               + ") outside " + std::to_string(dim_) + "x" + std::to_string(count_));
}

void SynthesisMatrix::set(std::size_t row, std::size_t col, const RadicalScalar & value)
{
    check_index(row, col);
    if (value.is_zero())
        entries_.erase({col, row});
    else
        entries_[{col, row}] = value;
}

RadicalScalar SynthesisMatrix::at(std::size_t row, std::size_t col) const
{
    check_index(row, col);
    const auto it = entries_.find({col, row});
    return it == entries_.end() ? RadicalScalar{} : it->second;
}

std::vector<std::pair<std::size_t, RadicalScalar>> SynthesisMatrix::row(std::size_t r) const
{
    std::vector<std::pair<std::size_t, RadicalScalar>> out;
    for (const auto & [key, value] : entries_)
        if (key.second == r)
            out.emplace_back(key.first, value);
    return out;
}

std::vector<std::pair<std::size_t, RadicalScalar>> SynthesisMatrix::column(std::size_t c) const
{
    std::vector<std::pair<std::size_t, RadicalScalar>> out;
    for (auto it = entries_.lower_bound({c, 0}); it != entries_.end() && it->first.first == c; ++it)
        out.emplace_back(it->first.second, it->second);
    return out;
}

void SynthesisMatrix::embed(const SynthesisMatrix & sub, std::size_t row_offset, std::size_t col_offset)
{
    if (row_offset + sub.dim_ > dim_ || col_offset + sub.count_ > count_)
        throw Error(ErrorKind::OutOfRange, "embedded matrix does not fit");
    for (const auto & [key, value] : sub.entries_)
        entries_[{key.first + col_offset, key.second + row_offset}] = value;
    for (const auto & r : sub.log_)
        log_.push_back({r.kind, r.row_first + row_offset, r.row_last + row_offset, r.col_first + col_offset,
                        r.col_last + col_offset});
}

void SynthesisMatrix::scale_squares(const Rational & factor)
{
    if (factor.sign() <= 0)
        throw Error(ErrorKind::InvalidArgument, "scale factor must be positive");
    for (auto & [key, value] : entries_)
        value = RadicalScalar(value.sign(), value.radicand() * factor);
}

// ---------------------------------------------------------------------------
// PNSTC / STC

namespace {

[[noreturn]] void stuck(std::size_t row, std::size_t col, StuckReason reason, std::optional<BlockCondition> block,
                        const std::string & detail)
{
    throw ConstructionStuck(row, col, reason, block,
                            "construction stuck at row " + std::to_string(row + 1) + ", column "
                                + std::to_string(col + 1) + ": " + std::string(to_string(reason)) + " (" + detail
                                + ")");
}

} // namespace

SynthesisMatrix pnstc(const FrameSpec & spec)
{
    if (!spec.trace_holds())
        throw Error(ErrorKind::TraceMismatch, "eigenvalue sum " + sum(spec.eigenvalues()).to_string()
                                                  + " differs from squared-norm sum " + sum(spec.norms_sq()).to_string());

    const std::size_t n_rows = spec.dim();
    const std::size_t n_cols = spec.count();
    const auto & norms = spec.norms_sq();
    std::vector<Rational> remaining = spec.eigenvalues();
    SynthesisMatrix f(n_rows, n_cols);

    std::size_t m = 0;
    for (std::size_t n = 0; n < n_rows; ++n) {
        while (remaining[n].sign() > 0) {
            if (m >= n_cols)
                stuck(n, m, StuckReason::ColumnsExhausted, std::nullopt,
                      "row mass " + remaining[n].to_string() + " left");

            if (remaining[n] >= norms[m]) {
                f.set(n, m, RadicalScalar::sqrt(norms[m]));
                f.log({BlockKind::Singleton, n, n, m, m});
                remaining[n] -= norms[m];
                ++m;
                continue;
            }

            if (n + 1 >= n_rows)
                stuck(n, m, StuckReason::NoRowBelow, std::nullopt, "block needed in the last row");
            if (m + 1 >= n_cols)
                stuck(n, m, StuckReason::ColumnsExhausted, std::nullopt, "block needs a second column");

            const BlockSpec block_spec{remaining[n], norms[m], norms[m + 1]};
            if (const auto failed = block_violation(block_spec))
                stuck(n, m, StuckReason::BlockInfeasible, failed,
                      "x=" + block_spec.x.to_string() + ", a1^2=" + block_spec.a1sq.to_string()
                          + ", a2^2=" + block_spec.a2sq.to_string() + " violates " + std::string(to_string(*failed)));

            const Rational spill = block_spec.y();
            if (remaining[n + 1] < spill)
                stuck(n, m, StuckReason::NegativeRemainder, std::nullopt,
                      "second row needs " + spill.to_string() + " but row " + std::to_string(n + 2) + " has "
                          + remaining[n + 1].to_string() + " left");

            const Block2x2 block = build_block(block_spec);
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    f.set(n + i, m + j, block.at(i, j));
            f.log({block.degenerate() ? BlockKind::DegenerateBlock : BlockKind::Block2x2, n, n + 1, m, m + 1});

            remaining[n + 1] -= spill;
            remaining[n] = Rational(0);
            m += 2;
        }
    }
    if (m != n_cols)
        stuck(n_rows - 1, m, StuckReason::ColumnsUnused, std::nullopt,
              std::to_string(n_cols - m) + " columns left after the last row");
    return f;
}

SynthesisMatrix stc(std::span<const Rational> eigenvalues, std::size_t count)
{
    const Rational total = sum(eigenvalues);
    if (total != Rational(static_cast<long long>(count)))
        throw Error(ErrorKind::TraceMismatch,
                    "eigenvalues sum to " + total.to_string() + ", expected " + std::to_string(count));
    return pnstc(FrameSpec({eigenvalues.begin(), eigenvalues.end()}, std::vector<Rational>(count, Rational(1))));
}

// ---------------------------------------------------------------------------
// Unit-norm tight frames

std::optional<std::int64_t> k_inequality_scan(std::int64_t count, std::int64_t dim)
{
    if (dim < 1 || !(dim < count && count < 2 * dim))
        throw Error(ErrorKind::OutOfRange, "k-inequality scan needs N < M < 2N, got M=" + std::to_string(count)
                                               + ", N=" + std::to_string(dim));
    const Rational lambda(count, dim);
    for (std::int64_t k = 1; k < dim; ++k) {
        const Rational k_lambda = Rational(k) * lambda;
        if (k_lambda.is_integer())
            continue;
        const Rational floor_k_lambda(k_lambda.floor(), 1);
        if (floor_k_lambda > Rational(k + 1) * lambda - Rational(2))
            return k;
    }
    return std::nullopt;
}

UnitTightVerdict unit_tight_feasible(std::int64_t count, std::int64_t dim)
{
    if (dim < 1 || count < dim)
        throw Error(ErrorKind::InvalidDims, "unit-norm tight frames need M >= N >= 1, got M=" + std::to_string(count)
                                                + ", N=" + std::to_string(dim));
    const std::int64_t g = std::gcd(count, dim);
    UnitTightVerdict v;
    v.numerator = count / g;
    v.denominator = dim / g;
    if (count >= 2 * dim) {
        v.feasible = true;
    } else if (v.numerator == 2 * v.denominator - 1) {
        v.feasible = true;
        v.witness_l = v.denominator;
    } else {
        v.failing_k = k_inequality_scan(count, dim);
    }
    return v;
}

SynthesisMatrix unit_tight(std::int64_t count, std::int64_t dim)
{
    const UnitTightVerdict verdict = unit_tight_feasible(count, dim);
    if (!verdict.feasible)
        throw Error(ErrorKind::Infeasible, "STC cannot build a unit-norm tight frame of " + std::to_string(count)
                                               + " vectors in dimension " + std::to_string(dim));

    const std::int64_t copies = std::gcd(count, dim);
    if (copies > 1) {
        const SynthesisMatrix unit = unit_tight(count / copies, dim / copies);
        SynthesisMatrix f(static_cast<std::size_t>(dim), static_cast<std::size_t>(count));
        for (std::int64_t i = 0; i < copies; ++i)
            f.embed(unit, i * unit.dim(), i * unit.count());
        return f;
    }
    const std::vector<Rational> spectrum(static_cast<std::size_t>(dim), Rational(count, dim));
    return stc(spectrum, static_cast<std::size_t>(count));
}

// ---------------------------------------------------------------------------
// Equal-norm frames

namespace {

void check_equal_norm_input(std::span<const Rational> eigenvalues)
{
    if (eigenvalues.size() < 2)
        throw Error(ErrorKind::DegenerateSpectrum, "equal-norm construction needs at least two eigenvalues");
    for (const auto & v : eigenvalues)
        if (v.sign() <= 0)
            throw Error(ErrorKind::InvalidArgument, "eigenvalue " + v.to_string() + " is not positive");
    for (std::size_t i = 1; i < eigenvalues.size(); ++i)
        if (eigenvalues[i] > eigenvalues[i - 1])
            throw Error(ErrorKind::NotSorted, "eigenvalues must be non-increasing");
}

} // namespace

std::int64_t minimal_equal_norm_r(std::span<const Rational> eigenvalues)
{
    check_equal_norm_input(eigenvalues);
    const Rational total = sum(eigenvalues);
    const Rational epsilon = Rational(1) - eigenvalues.front() / total;
    if (epsilon.sign() <= 0)
        throw Error(ErrorKind::DegenerateSpectrum, "largest eigenvalue carries the whole trace");

    // r^2 >= 2 S / lambda_N and r^2 >= 3 / epsilon
    const Rational need = std::max(Rational(2) * total / eigenvalues.back(), Rational(3) / epsilon);
    mpz_class r;
    mpz_sqrt(r.get_mpz_t(), mpz_class(need.floor()).get_mpz_t());
    while (Rational(r * r, 1) < need)
        ++r;
    if (!r.fits_slong_p())
        throw Error(ErrorKind::IntegerOverflow, "equal-norm r does not fit in 64 bits");
    return r.get_si();
}

EqualNormFrame equal_norm_frame(std::span<const Rational> eigenvalues, std::optional<std::int64_t> r_override)
{
    const std::int64_t minimal = minimal_equal_norm_r(eigenvalues);
    const std::int64_t r = r_override.value_or(minimal);
    if (r < 1)
        throw Error(ErrorKind::InvalidArgument, "r must be positive");

    const Rational total = sum(eigenvalues);
    const Rational vectors(r * r);
    std::vector<Rational> scaled;
    scaled.reserve(eigenvalues.size());
    for (const auto & v : eigenvalues)
        scaled.push_back(vectors / total * v);

    SynthesisMatrix f = stc(scaled, static_cast<std::size_t>(r * r));
    const Rational norm_sq = total / vectors;
    f.scale_squares(norm_sq);
    return {r, norm_sq, std::move(f)};
}

} // namespace sptetris
