#include <doctest.h>

#include <random>
#include <sstream>

#include "oracles.hpp"
#include "sptetris/construct.hpp"
#include "sptetris/formats.hpp"
#include "sptetris/verify.hpp"

using namespace sptetris;

namespace {

Rational q(long long n, long long d = 1)
{
    return {n, d};
}

std::vector<Rational> qs(std::initializer_list<long long> v)
{
    std::vector<Rational> out;
    for (long long x : v)
        out.emplace_back(x);
    return out;
}

FrameSpec example_six()
{
    return {qs({15, 4, 1, 4}), qs({9, 4, 3, 3, 1, 4})};
}

SynthesisMatrix identity(std::size_t n)
{
    SynthesisMatrix f(n, n);
    for (std::size_t i = 0; i < n; ++i)
        f.set(i, i, RadicalScalar(1, q(1)));
    return f;
}

} // namespace

TEST_CASE("report for the six-vector example")
{
    const SynthesisMatrix f = pnstc(example_six());
    const VerificationReport r = verify_matrix(f, example_six());
    CHECK(r.row_square_sums == qs({15, 4, 1, 4}));
    CHECK(r.col_square_sums == qs({9, 4, 3, 3, 1, 4}));
    CHECK(r.orthogonal);
    CHECK(r.nnz == 8);
    CHECK(r.matches_spec == true);
    CHECK(r.frame_bounds == std::pair{q(1), q(15)});
    CHECK(sparsity(f) == Sparsity{8, 2});

    const auto [lo, hi] = frame_bounds_float(f);
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(15.0));
}

TEST_CASE("tight frame bounds")
{
    const SynthesisMatrix f = unit_tight(3, 2);
    const VerificationReport r = verify_matrix(f, nullptr, OrthogonalityMode::exact());
    CHECK(r.frame_bounds == std::pair{q(3, 2), q(3, 2)});
    CHECK_FALSE(r.matches_spec);
    const auto [lo, hi] = frame_bounds_float(f);
    CHECK(lo == doctest::Approx(1.5));
    CHECK(hi == doctest::Approx(1.5));

    const auto [one_lo, one_hi] = frame_bounds_float(identity(3));
    CHECK(one_lo == 1.0);
    CHECK(one_hi == 1.0);
}

TEST_CASE("sparsity")
{
    CHECK(sparsity(unit_tight(4, 2)) == Sparsity{4, 1});
    CHECK(sparsity(identity(2)) == Sparsity{2, 1});
}

TEST_CASE("zero row is not a frame")
{
    SynthesisMatrix f(2, 2);
    f.set(0, 0, RadicalScalar(1, q(1)));
    try {
        (void)verify_matrix(f, nullptr, OrthogonalityMode::exact());
        FAIL("no throw");
    } catch (const Error & e) {
        CHECK(e.kind() == ErrorKind::ZeroRow);
    }
    CHECK_THROWS_AS(verify_dense(to_dense(f)), Error);
}

TEST_CASE("non-orthogonal rows are detected")
{
    SynthesisMatrix f(2, 2);
    f.set(0, 0, RadicalScalar(1, q(1)));
    f.set(0, 1, RadicalScalar(1, q(2)));
    f.set(1, 0, RadicalScalar(1, q(8)));
    f.set(1, 1, RadicalScalar(-1, q(1)));
    // sqrt(8) - sqrt(2) = sqrt(2) != 0 only after canonicalization
    CHECK_FALSE(verify_matrix(f, nullptr, OrthogonalityMode::exact()).orthogonal);
    CHECK_FALSE(verify_matrix(f, nullptr, OrthogonalityMode::floating()).orthogonal);
    CHECK_FALSE(rows_orthogonal_exact(f, 0, 1));

    // sqrt(8) - 2 sqrt(2) = 0 needs grouping of canonical radicals
    SynthesisMatrix g(2, 3);
    g.set(0, 0, RadicalScalar(1, q(1)));
    g.set(0, 1, RadicalScalar(1, q(1)));
    g.set(0, 2, RadicalScalar(1, q(1)));
    g.set(1, 0, RadicalScalar(1, q(8)));
    g.set(1, 1, RadicalScalar(-1, q(2)));
    g.set(1, 2, RadicalScalar(-1, q(2)));
    CHECK(rows_orthogonal_exact(g, 0, 1));
    CHECK(verify_matrix(g, nullptr, OrthogonalityMode::exact()).orthogonal);

    const auto [lo, hi] = frame_bounds_float(f);
    CHECK(lo < hi);
    CHECK(lo + hi == doctest::Approx(1 + 2 + 8 + 1)); // trace of F F^*
}

TEST_CASE("factorization limit surfaces in exact mode")
{
    const mpz_class p1(1'000'003), p2(1'000'033);
    SynthesisMatrix f(2, 2);
    f.set(0, 0, RadicalScalar(1, q(1)));
    f.set(0, 1, RadicalScalar(1, Rational(p1 * p2, mpz_class(1))));
    f.set(1, 0, RadicalScalar(1, q(1)));
    f.set(1, 1, RadicalScalar(1, q(3)));
    try {
        (void)verify_matrix(f, nullptr, OrthogonalityMode::exact(100));
        FAIL("no throw");
    } catch (const Error & e) {
        CHECK(e.kind() == ErrorKind::FactorizationIncomplete);
    }
    CHECK_FALSE(verify_matrix(f, nullptr, OrthogonalityMode::floating()).orthogonal);
}

TEST_CASE("dense verification")
{
    const FloatVerificationReport r = verify_dense(to_dense(pnstc(example_six())));
    CHECK(r.orthogonal);
    CHECK(r.nnz == 8);
    CHECK(r.max_per_column == 2);
    CHECK(r.frame_bounds.first == doctest::Approx(1.0));
    CHECK(r.frame_bounds.second == doctest::Approx(15.0));

    DenseMatrix skew{2, 2, {1.0, 1.0, 1.0, -0.999}};
    CHECK_FALSE(verify_dense(skew).orthogonal);
    CHECK(verify_dense(skew, 1e-2).orthogonal);
    CHECK_THROWS_AS(verify_dense(DenseMatrix{2, 2, {1.0}}), Error);
}

TEST_CASE("property: constructed matrices verify, in both modes")
{
    std::mt19937_64 rng(61);
    for (int i = 0; i < 2'000; ++i) {
        const FrameSpec spec = oracle::random_ready_spec(rng, 6, 12);
        const SynthesisMatrix f = pnstc(spec);
        const VerificationReport exact = verify_matrix(f, spec);
        REQUIRE(exact.matches_spec == true);
        const VerificationReport fl = verify_matrix(f, &spec, OrthogonalityMode::floating());
        REQUIRE(fl.orthogonal == exact.orthogonal);
        REQUIRE(oracle::frame_operator_error(f, [&] {
                    std::vector<double> d;
                    for (const auto & v : spec.eigenvalues())
                        d.push_back(v.to_double());
                    return d;
                }()) < 1e-9);
    }
}

TEST_CASE("property: JSON round trip preserves the report")
{
    std::mt19937_64 rng(67);
    for (int i = 0; i < 500; ++i) {
        const FrameSpec spec = oracle::random_ready_spec(rng, 6, 12);
        const SynthesisMatrix f = pnstc(spec);
        const std::string text = dump(matrix_to_json(f, {spec.eigenvalues(), spec.norms_sq()}, true));
        const LoadedMatrix back = matrix_from_json(nlohmann::json::parse(text));
        REQUIRE(back.matrix == f);
        REQUIRE(back.spec() == spec);
        REQUIRE(verify_matrix(back.matrix, *back.spec()) == verify_matrix(f, spec));
        REQUIRE(dump(matrix_to_json(back.matrix, back.metadata, true)) == text);
    }
}
