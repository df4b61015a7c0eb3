#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

namespace {

i128 gcd128(i128 a, i128 b)
{
    if (a < 0)
        a = -a;
    if (b < 0)
        b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

i128 floor_div(i128 a, i128 b)
{
    i128 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

std::vector<Frac> prefix_sums(const std::vector<Frac> & v)
{
    std::vector<Frac> out{Frac(0)};
    for (const auto & x : v)
        out.push_back(out.back() + x);
    return out;
}

} // namespace

Frac::Frac(i128 num, i128 den)
{
    if (den == 0)
        throw std::domain_error("oracle fraction with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = gcd128(num, den);
    n = g ? num / g : 0;
    d = g ? den / g : 1;
}

Frac from_rational(const sptetris::Rational & r)
{
    if (!r.num().fits_slong_p() || !r.den().fits_slong_p())
        throw std::overflow_error("rational too large for the oracle");
    return Frac(i128(r.num().get_si()), i128(r.den().get_si()));
}

sptetris::Rational to_rational(const Frac & f)
{
    return sptetris::Rational(static_cast<long long>(f.n), static_cast<long long>(f.d));
}

std::vector<Frac> from_rationals(const std::vector<sptetris::Rational> & v)
{
    std::vector<Frac> out;
    for (const auto & r : v)
        out.push_back(from_rational(r));
    return out;
}

std::vector<sptetris::Rational> to_rationals(const std::vector<Frac> & v)
{
    std::vector<sptetris::Rational> out;
    for (const auto & f : v)
        out.push_back(to_rational(f));
    return out;
}

bool brute_ready(const std::vector<Frac> & eigenvalues, const std::vector<Frac> & norms_sq)
{
    const std::size_t n = eigenvalues.size();
    const std::size_t m = norms_sq.size();
    const auto a = prefix_sums(norms_sq);
    const auto l = prefix_sums(eigenvalues);
    if (!(a[m] == l[n]))
        return false;

    std::vector<std::size_t> cuts(n + 1, 0); // cuts[k] = m_k, 1-based k, cuts[n] = M
    cuts[n] = m;

    auto conditions_hold = [&] {
        for (std::size_t k = 1; k < n; ++k) {
            const std::size_t mk = cuts[k];
            if (!(a[mk] <= l[k] && l[k] < a[mk + 1]))
                return false;
            if (a[mk] < l[k]) {
                if (cuts[k + 1] < mk + 2)
                    return false;
                if (norms_sq[mk + 1] < l[k] - a[mk])
                    return false;
            }
        }
        return true;
    };

    // choose m_1 <= ... <= m_{N-1} < M
    std::function<bool(std::size_t, std::size_t)> choose = [&](std::size_t k, std::size_t lo) {
        if (k == n)
            return conditions_hold();
        for (std::size_t v = lo; v < m; ++v) {
            cuts[k] = v;
            if (choose(k + 1, v))
                return true;
        }
        return false;
    };
    return choose(1, 0);
}

std::optional<DenseSquares> table_stc(std::vector<Frac> lambda, std::size_t count)
{
    const std::size_t n_rows = lambda.size();
    DenseSquares f(n_rows, std::vector<SignedSquare>(count));
    std::size_t m = 0;
    const Frac one(1);
    const Frac two(2);
    for (std::size_t n = 0; n < n_rows; ++n) {
        while (lambda[n] > Frac(0)) {
            if (lambda[n] < one) {
                if (n + 1 >= n_rows || m + 2 > count)
                    return std::nullopt;
                const Frac top = lambda[n] / two;
                const Frac bottom = one - top;
                f[n][m] = {1, top};
                f[n + 1][m] = {1, bottom};
                f[n][m + 1] = {1, top};
                f[n + 1][m + 1] = {-1, bottom};
                m += 2;
                lambda[n + 1] = lambda[n + 1] - (two - lambda[n]);
                if (lambda[n + 1] < Frac(0))
                    return std::nullopt;
                lambda[n] = Frac(0);
            } else {
                if (m >= count)
                    return std::nullopt;
                f[n][m] = {1, one};
                m += 1;
                lambda[n] = lambda[n] - one;
            }
        }
    }
    if (m != count)
        return std::nullopt;
    return f;
}

std::optional<long long> integer_k_scan(long long count, long long dim)
{
    for (long long k = 1; k < dim; ++k) {
        if ((k * count) % dim == 0)
            continue;
        if (dim * ((k * count) / dim) > (k + 1) * count - 2 * dim)
            return k;
    }
    return std::nullopt;
}

std::set<std::pair<std::vector<sptetris::Rational>, std::vector<sptetris::Rational>>>
brute_orderings(std::vector<Frac> eigenvalues, std::vector<Frac> norms_sq)
{
    std::set<std::pair<std::vector<sptetris::Rational>, std::vector<sptetris::Rational>>> out;
    std::sort(eigenvalues.begin(), eigenvalues.end());
    std::sort(norms_sq.begin(), norms_sq.end());
    do {
        std::vector<Frac> norms = norms_sq;
        do {
            if (brute_ready(eigenvalues, norms))
                out.insert({to_rationals(eigenvalues), to_rationals(norms)});
        } while (std::next_permutation(norms.begin(), norms.end()));
    } while (std::next_permutation(eigenvalues.begin(), eigenvalues.end()));
    return out;
}

double frame_operator_error(const sptetris::SynthesisMatrix & f, const std::vector<double> & eigenvalues)
{
    const std::size_t n = f.dim();
    std::vector<std::vector<double>> dense(n, std::vector<double>(f.count(), 0.0));
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < f.count(); ++c) {
            const auto v = f.at(r, c);
            dense[r][c] = v.sign() * std::sqrt(v.radicand().to_double());
        }
    double worst = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double s = 0.0;
            for (std::size_t c = 0; c < f.count(); ++c)
                s += dense[i][c] * dense[j][c];
            const double target = i == j ? eigenvalues[i] : 0.0;
            worst = std::max(worst, std::abs(s - target));
        }
    return worst;
}

long long brute_min_r(const std::vector<Frac> & eigenvalues)
{
    Frac total(0);
    for (const auto & v : eigenvalues)
        total = total + v;
    const Frac eps = Frac(1) - eigenvalues.front() / total;
    for (long long r = 1;; ++r) {
        const Frac r2(r * r);
        if (r2 * eigenvalues.back() / total >= Frac(2) && r2 * eps >= Frac(3))
            return r;
    }
}

DenseSquares to_squares(const sptetris::SynthesisMatrix & f)
{
    DenseSquares out(f.dim(), std::vector<SignedSquare>(f.count()));
    for (std::size_t r = 0; r < f.dim(); ++r)
        for (std::size_t c = 0; c < f.count(); ++c) {
            const auto v = f.at(r, c);
            out[r][c] = {v.sign(), v.is_zero() ? Frac(0) : from_rational(v.radicand())};
        }
    return out;
}

sptetris::FrameSpec random_spec(std::mt19937_64 & rng, std::size_t max_dim, std::size_t max_count)
{
    auto pick = [&](long long lo, long long hi) { return std::uniform_int_distribution<long long>(lo, hi)(rng); };
    for (;;) {
        const auto n = static_cast<std::size_t>(pick(1, static_cast<long long>(max_dim)));
        const auto m = static_cast<std::size_t>(pick(static_cast<long long>(n), static_cast<long long>(max_count)));
        const long long den = pick(1, 20);

        std::vector<long long> eig(n);
        long long total = 0;
        for (auto & e : eig) {
            e = pick(1, 20);
            total += e;
        }
        if (total < static_cast<long long>(m))
            continue;

        std::vector<long long> norms(m, 1);
        long long extra = total - static_cast<long long>(m);
        while (extra > 0) {
            auto & slot = norms[static_cast<std::size_t>(pick(0, static_cast<long long>(m) - 1))];
            if (slot < 20) {
                const long long add = pick(1, std::min(extra, 20 - slot));
                slot += add;
                extra -= add;
            }
        }

        std::vector<sptetris::Rational> eig_r;
        std::vector<sptetris::Rational> norm_r;
        for (long long e : eig)
            eig_r.emplace_back(e, den);
        for (long long a : norms)
            norm_r.emplace_back(a, den);
        return sptetris::FrameSpec(std::move(eig_r), std::move(norm_r));
    }
}

sptetris::FrameSpec random_ready_spec(std::mt19937_64 & rng, std::size_t max_dim, std::size_t max_count)
{
    for (;;) {
        sptetris::FrameSpec spec = random_spec(rng, max_dim, max_count);
        if (sptetris::check_ready(spec).ready)
            return spec;
    }
}

std::string to_string(const std::vector<sptetris::Rational> & v)
{
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i)
        out += (i ? "," : "") + v[i].to_string();
    return out + ")";
}

} // namespace oracle
