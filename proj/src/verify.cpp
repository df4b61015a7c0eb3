#include "sptetris/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>

namespace sptetris {

namespace {

[[noreturn]] void zero_row(std::size_t r)
{
    throw Error(ErrorKind::ZeroRow, "row " + std::to_string(r + 1) + " is zero, so this is not a frame");
}

std::vector<std::vector<std::pair<std::size_t, RadicalScalar>>> rows_of(const SynthesisMatrix & f)
{
    std::vector<std::vector<std::pair<std::size_t, RadicalScalar>>> rows(f.dim());
    for (const auto & [key, value] : f.entries())
        rows[key.second].emplace_back(key.first, value);
    for (auto & r : rows)
        std::sort(r.begin(), r.end(), [](const auto & a, const auto & b) { return a.first < b.first; });
    return rows;
}

bool orthogonal_exact(const std::vector<std::pair<std::size_t, RadicalScalar>> & a,
                      const std::vector<std::pair<std::size_t, RadicalScalar>> & b, std::uint64_t factor_bound)
{
    // signed multiplicity per raw radicand of the products a_c * b_c
    std::map<Rational, long> by_radicand;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            const RadicalScalar term = ia->second * ib->second;
            by_radicand[term.radicand()] += term.sign();
            ++ia;
            ++ib;
        }
    }

    std::map<mpz_class, Rational> by_squarefree;
    for (const auto & [radicand, multiplicity] : by_radicand) {
        if (multiplicity == 0)
            continue;
        const CanonicalRadical c = canonicalize(RadicalScalar::sqrt(radicand), factor_bound);
        by_squarefree[c.squarefree] += c.coefficient * Rational(multiplicity);
    }
    return std::all_of(by_squarefree.begin(), by_squarefree.end(),
                       [](const auto & kv) { return kv.second.is_zero(); });
}

bool orthogonal_float(const std::vector<std::pair<std::size_t, RadicalScalar>> & a,
                      const std::vector<std::pair<std::size_t, RadicalScalar>> & b, double norm_a_sq,
                      double norm_b_sq, double tolerance)
{
    double dot = 0.0;
    auto ia = a.begin();
    auto ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (ia->first < ib->first) {
            ++ia;
        } else if (ib->first < ia->first) {
            ++ib;
        } else {
            dot += ia->second.to_double() * ib->second.to_double();
            ++ia;
            ++ib;
        }
    }
    return std::abs(dot) <= tolerance * std::sqrt(norm_a_sq * norm_b_sq);
}

std::pair<double, double> eigen_extremes(const DenseMatrix & f)
{
    Eigen::MatrixXd m(f.rows, f.cols);
    for (std::size_t r = 0; r < f.rows; ++r)
        for (std::size_t c = 0; c < f.cols; ++c)
            m(r, c) = f(r, c);
    const Eigen::MatrixXd s = m * m.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s, Eigen::EigenvaluesOnly);
    const auto & ev = solver.eigenvalues();
    return {ev.minCoeff(), ev.maxCoeff()};
}

} // namespace

bool rows_orthogonal_exact(const SynthesisMatrix & f, std::size_t r1, std::size_t r2, std::uint64_t factor_bound)
{
    return orthogonal_exact(f.row(r1), f.row(r2), factor_bound);
}

Sparsity sparsity(const SynthesisMatrix & f)
{
    Sparsity s;
    s.nnz = f.entries().size();
    std::vector<std::size_t> per_column(f.count(), 0);
    for (const auto & [key, value] : f.entries())
        s.max_per_column = std::max(s.max_per_column, ++per_column[key.first]);
    return s;
}

VerificationReport verify_matrix(const SynthesisMatrix & f, const FrameSpec * spec, OrthogonalityMode mode)
{
    VerificationReport report;
    report.mode = mode;
    report.row_square_sums.assign(f.dim(), Rational(0));
    report.col_square_sums.assign(f.count(), Rational(0));
    for (const auto & [key, value] : f.entries()) {
        report.col_square_sums[key.first] += value.square();
        report.row_square_sums[key.second] += value.square();
    }
    for (std::size_t r = 0; r < f.dim(); ++r)
        if (report.row_square_sums[r].is_zero())
            zero_row(r);

    const Sparsity s = sparsity(f);
    report.nnz = s.nnz;
    report.max_per_column = s.max_per_column;

    const auto rows = rows_of(f);
    std::vector<double> row_norms(f.dim());
    for (std::size_t r = 0; r < f.dim(); ++r)
        row_norms[r] = report.row_square_sums[r].to_double();

    report.orthogonal = true;
    for (std::size_t i = 0; i < f.dim() && report.orthogonal; ++i) {
        for (std::size_t j = i + 1; j < f.dim(); ++j) {
            const bool ok = mode.kind == OrthogonalityMode::Kind::Exact
                                ? orthogonal_exact(rows[i], rows[j], mode.factor_bound)
                                : orthogonal_float(rows[i], rows[j], row_norms[i], row_norms[j], mode.tolerance);
            if (!ok) {
                report.orthogonal = false;
                break;
            }
        }
    }

    if (report.orthogonal) {
        const auto [lo, hi] = std::minmax_element(report.row_square_sums.begin(), report.row_square_sums.end());
        report.frame_bounds = std::pair{*lo, *hi};
    }
    if (spec)
        report.matches_spec = report.orthogonal && report.row_square_sums == spec->eigenvalues()
                              && report.col_square_sums == spec->norms_sq();
    return report;
}

DenseMatrix to_dense(const SynthesisMatrix & f)
{
    DenseMatrix d{f.dim(), f.count(), std::vector<double>(f.dim() * f.count(), 0.0)};
    for (const auto & [key, value] : f.entries())
        d.values[key.second * d.cols + key.first] = value.to_double();
    return d;
}

std::pair<double, double> frame_bounds_float(const SynthesisMatrix & f)
{
    bool orthogonal = false;
    VerificationReport report;
    try {
        report = verify_matrix(f, nullptr, OrthogonalityMode::exact());
        orthogonal = report.orthogonal;
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::FactorizationIncomplete)
            throw;
        report = verify_matrix(f, nullptr, OrthogonalityMode::floating());
        orthogonal = false; // float agreement is not enough to skip the solver
    }
    if (orthogonal)
        return {report.frame_bounds->first.to_double(), report.frame_bounds->second.to_double()};
    return eigen_extremes(to_dense(f));
}

FloatVerificationReport verify_dense(const DenseMatrix & f, double tolerance)
{
    if (f.rows == 0 || f.cols == 0 || f.values.size() != f.rows * f.cols)
        throw Error(ErrorKind::InvalidDims, "dense matrix is empty or ragged");

    FloatVerificationReport report;
    report.tolerance = tolerance;
    report.row_square_sums.assign(f.rows, 0.0);
    report.col_square_sums.assign(f.cols, 0.0);
    std::vector<std::size_t> per_column(f.cols, 0);
    for (std::size_t r = 0; r < f.rows; ++r) {
        for (std::size_t c = 0; c < f.cols; ++c) {
            const double v = f(r, c);
            if (v == 0.0)
                continue;
            report.row_square_sums[r] += v * v;
            report.col_square_sums[c] += v * v;
            ++report.nnz;
            report.max_per_column = std::max(report.max_per_column, ++per_column[c]);
        }
    }
    for (std::size_t r = 0; r < f.rows; ++r)
        if (report.row_square_sums[r] == 0.0)
            zero_row(r);

    report.orthogonal = true;
    for (std::size_t i = 0; i < f.rows && report.orthogonal; ++i) {
        for (std::size_t j = i + 1; j < f.rows; ++j) {
            double dot = 0.0;
            for (std::size_t c = 0; c < f.cols; ++c)
                dot += f(i, c) * f(j, c);
            if (std::abs(dot) > tolerance * std::sqrt(report.row_square_sums[i] * report.row_square_sums[j])) {
                report.orthogonal = false;
                break;
            }
        }
    }
    report.frame_bounds = eigen_extremes(f);
    return report;
}

} // namespace sptetris
