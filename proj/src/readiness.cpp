#include "sptetris/readiness.hpp"

#include <algorithm>
#include <functional>
#include <string>

namespace sptetris {

namespace {

std::vector<Rational> prefix_sums(std::span<const Rational> values)
{
    std::vector<Rational> out(values.size() + 1);
    for (std::size_t i = 0; i < values.size(); ++i)
        out[i + 1] = out[i] + values[i];
    return out;
}

template <typename Cmp>
void require_sorted(std::span<const Rational> values, Cmp cmp, const char * what)
{
    if (!std::is_sorted(values.begin(), values.end(), cmp))
        throw Error(ErrorKind::NotSorted, std::string(what) + " must be sorted");
}

} // namespace

FrameSpec::FrameSpec(std::vector<Rational> eigenvalues, std::vector<Rational> norms_sq)
    : eigenvalues_(std::move(eigenvalues)), norms_sq_(std::move(norms_sq))
{
    if (eigenvalues_.empty() || norms_sq_.empty())
        throw Error(ErrorKind::InvalidArgument, "frame spec needs at least one eigenvalue and one norm");
    for (const auto & v : eigenvalues_)
        if (v.sign() <= 0)
            throw Error(ErrorKind::InvalidArgument, "eigenvalue " + v.to_string() + " is not positive");
    for (const auto & v : norms_sq_)
        if (v.sign() <= 0)
            throw Error(ErrorKind::InvalidArgument, "squared norm " + v.to_string() + " is not positive");
}

bool FrameSpec::trace_holds() const
{
    return sum(eigenvalues_) == sum(norms_sq_);
}

Rational sum(std::span<const Rational> values)
{
    Rational total;
    for (const auto & v : values)
        total += v;
    return total;
}

std::string_view to_string(ReadinessCondition c)
{
    switch (c) {
    case ReadinessCondition::TraceMismatch: return "TraceMismatch";
    case ReadinessCondition::UpperBoundI: return "UpperBoundI";
    case ReadinessCondition::GapII: return "GapII";
    case ReadinessCondition::NormBoundII: return "NormBoundII";
    }
    return "Unknown";
}

Partition forced_partition(const FrameSpec & spec)
{
    if (!spec.trace_holds())
        throw Error(ErrorKind::TraceMismatch, "eigenvalue sum " + sum(spec.eigenvalues()).to_string()
                                                  + " differs from squared-norm sum " + sum(spec.norms_sq()).to_string());
    const auto norm_cum = prefix_sums(spec.norms_sq());
    const auto eig_cum = prefix_sums(spec.eigenvalues());
    const std::size_t n = spec.dim(), m = spec.count();

    Partition p;
    p.cuts.reserve(n);
    std::size_t j = 0;
    for (std::size_t k = 1; k < n; ++k) {
        while (j < m && norm_cum[j + 1] <= eig_cum[k])
            ++j;
        p.cuts.push_back(j);
    }
    p.cuts.push_back(m);
    return p;
}

ReadinessReport check_ready(const FrameSpec & spec)
{
    if (!spec.trace_holds())
        return {false, std::nullopt, Violation{0, ReadinessCondition::TraceMismatch}};

    Partition p = forced_partition(spec);
    const auto norm_cum = prefix_sums(spec.norms_sq());
    const auto eig_cum = prefix_sums(spec.eigenvalues());
    const auto & norms = spec.norms_sq();

    for (std::size_t k = 1; k < spec.dim(); ++k) {
        const std::size_t mk = p.cuts[k - 1];
        const Rational deficit = eig_cum[k] - norm_cum[mk];
        if (deficit.is_zero())
            continue;
        if (p.cuts[k] < mk + 2)
            return {false, std::nullopt, Violation{k, ReadinessCondition::GapII}};
        // a_{m_k + 2} in 1-based terms
        if (norms[mk + 1] < deficit)
            return {false, std::nullopt, Violation{k, ReadinessCondition::NormBoundII}};
    }
    return {true, std::move(p), std::nullopt};
}

bool easy_sufficient(const FrameSpec & spec)
{
    require_sorted(spec.eigenvalues(), std::less<>{}, "eigenvalues");
    require_sorted(spec.norms_sq(), std::less<>{}, "squared norms");
    if (!spec.trace_holds())
        return false;

    const auto & a = spec.norms_sq();
    const auto & lambda = spec.eigenvalues();
    const long m = static_cast<long>(spec.count());
    const long n = static_cast<long>(spec.dim());
    // a_j^2 with j < 1 counts as zero
    auto term = [&](long j) { return j >= 1 ? a[j - 1] : Rational(0); };
    for (long l = 0; l < n; ++l) {
        const long hi = m - 2 * l; // 1-based
        if (term(hi) + term(hi - 1) > lambda[n - l - 1])
            return false;
    }
    return true;
}

bool tight_sufficient(std::span<const Rational> norms_sq, std::size_t dim)
{
    if (dim == 0 || norms_sq.empty())
        throw Error(ErrorKind::InvalidArgument, "tight_sufficient needs a dimension and at least one norm");
    require_sorted(norms_sq, std::greater<>{}, "squared norms");
    const Rational lambda = sum(norms_sq) / Rational(static_cast<long long>(dim));
    Rational top = norms_sq[0];
    if (norms_sq.size() > 1)
        top += norms_sq[1];
    return top <= lambda;
}

ReadinessReport tight_ready(std::span<const Rational> norms_sq, std::size_t dim)
{
    if (dim == 0)
        throw Error(ErrorKind::InvalidArgument, "dimension must be positive");
    const Rational lambda = sum(norms_sq) / Rational(static_cast<long long>(dim));
    return check_ready(FrameSpec(std::vector<Rational>(dim, lambda), {norms_sq.begin(), norms_sq.end()}));
}

ReadinessReport unit_ready(std::span<const Rational> eigenvalues, std::size_t count)
{
    const Rational total = sum(eigenvalues);
    if (total != Rational(static_cast<long long>(count)))
        throw Error(ErrorKind::TraceMismatch,
                    "eigenvalues sum to " + total.to_string() + ", expected " + std::to_string(count));
    return check_ready(FrameSpec({eigenvalues.begin(), eigenvalues.end()}, std::vector<Rational>(count, Rational(1))));
}

bool majorizes(std::span<const Rational> eigenvalues, std::span<const Rational> norms_sq)
{
    std::vector<Rational> lambda(eigenvalues.begin(), eigenvalues.end());
    std::vector<Rational> a(norms_sq.begin(), norms_sq.end());
    std::sort(lambda.begin(), lambda.end(), std::greater<>{});
    std::sort(a.begin(), a.end(), std::greater<>{});
    if (sum(lambda) != sum(a))
        return false;

    Rational lambda_partial, a_partial;
    for (std::size_t n = 0; n < lambda.size(); ++n) {
        lambda_partial += lambda[n];
        if (n < a.size())
            a_partial += a[n];
        if (a_partial > lambda_partial)
            return false;
    }
    return true;
}

} // namespace sptetris
