#include "sptetris/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <string>
#include <vector>

#include "sptetris/construct.hpp"
#include "sptetris/formats.hpp"
#include "sptetris/readiness.hpp"
#include "sptetris/search.hpp"
#include "sptetris/verify.hpp"

namespace sptetris {

namespace {

int exit_code_for(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::BlockInfeasible:
    case ErrorKind::ConstructionStuck:
    case ErrorKind::Infeasible:
    case ErrorKind::DegenerateSpectrum:
    case ErrorKind::ZeroRow:
        return kExitInfeasible;
    default:
        return kExitUsage;
    }
}

std::string describe(ReadinessCondition c)
{
    switch (c) {
    case ReadinessCondition::TraceMismatch:
        return "squared norms and eigenvalues have different sums";
    case ReadinessCondition::UpperBoundI:
        return "condition (i): cumulative norms exceed cumulative eigenvalues";
    case ReadinessCondition::GapII:
        return "condition (ii): the row's leftover needs two more columns before the next cut";
    case ReadinessCondition::NormBoundII:
        return "condition (ii): the second column of the row's 2x2 block is lighter than the leftover";
    }
    return "unknown condition";
}

std::string join(const std::vector<std::size_t> & values)
{
    std::string out;
    for (std::size_t v : values)
        out += (out.empty() ? "" : " ") + std::to_string(v);
    return out;
}

std::uint64_t factor_bound_from_env()
{
    const char * raw = std::getenv("ST_FACTOR_BOUND");
    if (!raw || !*raw)
        return kDefaultFactorBound;
    char * end = nullptr;
    const unsigned long long v = std::strtoull(raw, &end, 10);
    if (*end != '\0' || v < 2)
        throw Error(ErrorKind::InvalidArgument, std::string("ST_FACTOR_BOUND must be an integer >= 2, got '") + raw + "'");
    return v;
}

void write_text(const std::string & path, const std::string & text, std::ostream & out)
{
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file)
        throw Error(ErrorKind::Io, "cannot write " + path);
    file << text;
    if (!file)
        throw Error(ErrorKind::Io, "failed writing " + path);
}

LoadedSpec load_spec(const std::string & path, std::ostream & err)
{
    LoadedSpec loaded = load_spec_file(path);
    for (const auto & w : loaded.warnings)
        err << "warning: " << w << '\n';
    return loaded;
}

struct ConstructOptions {
    std::string spec;
    std::string out;
    std::string csv;
    bool skip_check = false;
    bool reproducible = false;
};

int cmd_construct(const ConstructOptions & o, std::ostream & out, std::ostream & err)
{
    const FrameSpec spec = load_spec(o.spec, err).spec;
    if (!spec.trace_holds()) {
        err << "TraceMismatch: squared norms sum to " << sum(spec.norms_sq()) << " but eigenvalues sum to "
            << sum(spec.eigenvalues()) << '\n';
        return kExitUsage;
    }
    if (!o.skip_check) {
        const ReadinessReport r = check_ready(spec);
        if (!r.ready) {
            err << "not ready: violation at k=" << r.violation->k << " (" << to_string(r.violation->condition)
                << "): " << describe(r.violation->condition) << '\n';
            return kExitInfeasible;
        }
    }
    SynthesisMatrix f(1, 1);
    try {
        f = pnstc(spec);
    } catch (const ConstructionStuck & e) {
        err << "construction stuck at row " << e.row() + 1 << ", column " << e.col() + 1 << " ("
            << to_string(e.reason()) << "): " << e.what() << '\n';
        return kExitInfeasible;
    }
    write_text(o.out, dump(matrix_to_json(f, {spec.eigenvalues(), spec.norms_sq()}, o.reproducible)), out);
    if (!o.csv.empty()) {
        std::ofstream csv(o.csv, std::ios::binary);
        if (!csv)
            throw Error(ErrorKind::Io, "cannot write " + o.csv);
        write_csv(csv, f);
    }
    return kExitOk;
}

int cmd_check(const std::string & path, bool as_json, std::ostream & out, std::ostream & err)
{
    const FrameSpec spec = load_spec(path, err).spec;
    const ReadinessReport r = check_ready(spec);
    std::optional<Partition> forced;
    if (spec.trace_holds())
        forced = forced_partition(spec);

    if (as_json) {
        out << dump(report_to_json(r, forced));
    } else {
        out << (r.ready ? "ready" : "not ready") << '\n';
        if (forced)
            out << "forced partition: " << join(forced->cuts) << '\n';
        if (r.violation)
            out << "violation at k=" << r.violation->k << " (" << to_string(r.violation->condition)
                << "): " << describe(r.violation->condition) << '\n';
    }
    if (!spec.trace_holds()) {
        err << "TraceMismatch: squared norms sum to " << sum(spec.norms_sq()) << " but eigenvalues sum to "
            << sum(spec.eigenvalues()) << '\n';
        return kExitUsage;
    }
    return r.ready ? kExitOk : kExitInfeasible;
}

struct SearchOptions {
    std::string spec;
    std::size_t max_results = 1;
    std::uint64_t budget = 10'000'000;
    unsigned threads = 1;
    bool fix_norms = false;
    bool fix_eigenvalues = false;
};

int cmd_search(const SearchOptions & o, std::ostream & out, std::ostream & err)
{
    const FrameSpec spec = load_spec(o.spec, err).spec;
    if (!spec.trace_holds()) {
        err << "TraceMismatch: squared norms sum to " << sum(spec.norms_sq()) << " but eigenvalues sum to "
            << sum(spec.eigenvalues()) << '\n';
        return kExitUsage;
    }
    SearchRequest req;
    req.norms_sq = spec.norms_sq();
    req.eigenvalues = spec.eigenvalues();
    req.max_results = o.max_results;
    req.budget = o.budget;
    req.threads = o.threads;
    req.fix_norm_order = o.fix_norms;
    req.fix_eigenvalue_order = o.fix_eigenvalues;
    const SearchResult r = find_ready_orderings(req);
    out << dump(result_to_json(r));
    if (r.budget_exhausted) {
        err << "BudgetExhausted: stopped after " << r.nodes << " nodes\n";
        return kExitBudget;
    }
    if (r.orderings.empty() && r.exhausted)
        return kExitInfeasible;
    return kExitOk;
}

struct VerifyOptions {
    std::string matrix;
    std::string spec;
    std::string mode = "exact";
    double tol = 1e-10;
    bool csv = false;
};

bool close_to(double value, const Rational & target, double tol)
{
    const double t = target.to_double();
    return std::abs(value - t) <= tol * std::max(1.0, std::abs(t));
}

int verify_csv(const VerifyOptions & o, const std::optional<FrameSpec> & spec, bool mode_given, std::ostream & out,
               std::ostream & err)
{
    if (mode_given && o.mode == "exact")
        err << "warning: CSV input holds floats, verifying in float mode\n";
    std::ifstream in(o.matrix);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read " + o.matrix);
    const FloatVerificationReport r = verify_dense(read_csv(in), o.tol);
    nlohmann::json j = report_to_json(r);
    bool matches = true;
    if (spec) {
        matches = r.orthogonal && spec->dim() == r.row_square_sums.size()
                  && spec->count() == r.col_square_sums.size();
        for (std::size_t i = 0; matches && i < spec->dim(); ++i)
            matches = close_to(r.row_square_sums[i], spec->eigenvalues()[i], o.tol);
        for (std::size_t i = 0; matches && i < spec->count(); ++i)
            matches = close_to(r.col_square_sums[i], spec->norms_sq()[i], o.tol);
        j["matchesSpec"] = matches;
    } else {
        j["matchesSpec"] = nullptr;
    }
    out << dump(j);
    return r.orthogonal && matches ? kExitOk : kExitInfeasible;
}

int cmd_verify(const VerifyOptions & o, bool mode_given, std::ostream & out, std::ostream & err)
{
    std::optional<FrameSpec> spec;
    if (!o.spec.empty())
        spec = load_spec(o.spec, err).spec;

    const bool is_csv = o.csv || (o.matrix.size() >= 4 && o.matrix.substr(o.matrix.size() - 4) == ".csv");
    if (is_csv)
        return verify_csv(o, spec, mode_given, out, err);

    const LoadedMatrix loaded = matrix_from_json(read_json_file(o.matrix));
    if (!spec)
        spec = loaded.spec();
    if (spec && (spec->dim() != loaded.matrix.dim() || spec->count() != loaded.matrix.count()))
        throw Error(ErrorKind::InvalidDims, "spec is " + std::to_string(spec->dim()) + "x"
                                                + std::to_string(spec->count()) + " but the matrix is "
                                                + std::to_string(loaded.matrix.dim()) + "x"
                                                + std::to_string(loaded.matrix.count()));

    OrthogonalityMode mode = o.mode == "float" ? OrthogonalityMode::floating(o.tol)
                                               : OrthogonalityMode::exact(factor_bound_from_env());
    VerificationReport r;
    try {
        r = verify_matrix(loaded.matrix, spec ? &*spec : nullptr, mode);
    } catch (const Error & e) {
        if (e.kind() != ErrorKind::FactorizationIncomplete)
            throw;
        err << "warning: " << e.what() << "; retrying in float mode\n";
        r = verify_matrix(loaded.matrix, spec ? &*spec : nullptr, OrthogonalityMode::floating(o.tol));
    }
    out << dump(report_to_json(r));
    return r.orthogonal && r.matches_spec.value_or(true) ? kExitOk : kExitInfeasible;
}

int cmd_feasible(std::int64_t vectors, std::int64_t dim, bool as_json, std::ostream & out)
{
    const UnitTightVerdict v = unit_tight_feasible(vectors, dim);
    if (as_json) {
        out << dump(verdict_to_json(v));
    } else {
        const std::string ratio = v.denominator == 1 ? std::to_string(v.numerator)
                                                     : std::to_string(v.numerator) + "/" + std::to_string(v.denominator);
        if (!v.feasible)
            out << "infeasible: M/N = " << ratio << ", inequality fails at k = " << v.failing_k.value_or(0) << '\n';
        else if (v.witness_l)
            out << "feasible: M/N = " << ratio << " = (2L-1)/L with L = " << *v.witness_l << '\n';
        else
            out << "feasible: M/N = " << ratio << " >= 2\n";
    }
    return v.feasible ? kExitOk : kExitInfeasible;
}

struct EqualNormOptions {
    std::vector<std::string> eigenvalues;
    std::optional<std::int64_t> r;
    std::string out;
    bool reproducible = false;
};

int cmd_equal_norm(const EqualNormOptions & o, std::ostream & out, std::ostream & err)
{
    std::vector<Rational> eigs;
    for (const auto & text : o.eigenvalues)
        eigs.push_back(Rational::parse(text));
    const EqualNormFrame frame = equal_norm_frame(eigs, o.r);
    const std::size_t columns = frame.matrix.count();
    const std::vector<Rational> norms(columns, frame.norm_sq);
    write_text(o.out, dump(matrix_to_json(frame.matrix, {eigs, norms}, o.reproducible)), out);
    (o.out.empty() || o.out == "-" ? err : out)
        << "r = " << frame.r << ", " << columns << " vectors of squared norm " << frame.norm_sq << '\n';
    return kExitOk;
}

} // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Sparse frames with prescribed spectrum and norms by Spectral Tetris", "sptetris"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kGeneratorVersion);

    int code = kExitOk;
    std::function<int()> action;

    ConstructOptions construct_opts;
    auto * construct = app.add_subcommand("construct", "Build the synthesis matrix of a ready spec");
    construct->add_option("spec", construct_opts.spec, "Spec file (JSON)")->required();
    construct->add_option("-o,--out", construct_opts.out, "Matrix file to write (default stdout)");
    construct->add_option("--float-csv", construct_opts.csv, "Also write the matrix as CSV of doubles");
    construct->add_flag("--skip-check", construct_opts.skip_check, "Skip the readiness check and let construction fail");
    construct->add_flag("--reproducible", construct_opts.reproducible, "Omit generator metadata");
    construct->callback([&] { action = [&] { return cmd_construct(construct_opts, out, err); }; });

    std::string check_path;
    bool check_json = false;
    auto * check = app.add_subcommand("check", "Decide readiness and print the forced partition");
    check->add_option("spec", check_path, "Spec file (JSON)")->required();
    check->add_flag("--json", check_json, "Print the report as JSON");
    check->callback([&] { action = [&] { return cmd_check(check_path, check_json, out, err); }; });

    SearchOptions search_opts;
    auto * search = app.add_subcommand("search", "Search orderings of norms and eigenvalues that are ready");
    search->add_option("spec", search_opts.spec, "Spec file (JSON)")->required();
    search->add_option("--max-results", search_opts.max_results, "Stop after this many orderings")
        ->capture_default_str();
    search->add_option("--budget", search_opts.budget, "Node budget")->capture_default_str();
    search->add_option("--threads", search_opts.threads, "Worker threads")->capture_default_str()->check(
        CLI::PositiveNumber);
    search->add_flag("--fix-norms", search_opts.fix_norms, "Keep the given norm order");
    search->add_flag("--fix-eigenvalues", search_opts.fix_eigenvalues, "Keep the given eigenvalue order");
    search->callback([&] { action = [&] { return cmd_search(search_opts, out, err); }; });

    VerifyOptions verify_opts;
    auto * verify = app.add_subcommand("verify", "Verify a matrix file (JSON or CSV)");
    verify->add_option("matrix", verify_opts.matrix, "Matrix file")->required();
    verify->add_option("--spec", verify_opts.spec, "Spec to compare against (default: the matrix metadata)");
    auto * mode_opt = verify->add_option("--mode", verify_opts.mode, "Orthogonality test")
                          ->check(CLI::IsMember({"exact", "float"}))
                          ->capture_default_str();
    verify->add_option("--tol", verify_opts.tol, "Float-mode tolerance")->capture_default_str();
    verify->add_flag("--csv", verify_opts.csv, "Read the matrix as CSV regardless of extension");
    verify->callback([&] { action = [&] { return cmd_verify(verify_opts, mode_opt->count() > 0, out, err); }; });

    std::int64_t vectors = 0;
    std::int64_t dim = 0;
    bool feasible_json = false;
    auto * feasible = app.add_subcommand("feasible", "Can Spectral Tetris build a unit-norm tight frame?");
    feasible->add_option("--vectors,-M", vectors, "Number of vectors")->required();
    feasible->add_option("--dim,-N", dim, "Dimension")->required();
    feasible->add_flag("--json", feasible_json, "Print the verdict as JSON");
    feasible->callback([&] { action = [&] { return cmd_feasible(vectors, dim, feasible_json, out); }; });

    EqualNormOptions equal_opts;
    auto * equal = app.add_subcommand("equal-norm", "Equal-norm frame with a prescribed spectrum");
    equal->add_option("--eigenvalues", equal_opts.eigenvalues, "Comma separated, non-increasing")
        ->required()
        ->delimiter(',');
    equal->add_option("--r", equal_opts.r, "Use r^2 vectors instead of the minimal r");
    equal->add_option("-o,--out", equal_opts.out, "Matrix file to write (default stdout)");
    equal->add_flag("--reproducible", equal_opts.reproducible, "Omit generator metadata");
    equal->callback([&] { action = [&] { return cmd_equal_norm(equal_opts, out, err); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
        const int rc = app.exit(e, out, err);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        code = action ? action() : kExitUsage;
    } catch (const Error & e) {
        err << to_string(e.kind()) << ": " << e.what() << '\n';
        code = exit_code_for(e.kind());
    } catch (const std::exception & e) {
        err << "error: " << e.what() << '\n';
        code = kExitUsage;
    }
    return code;
}

} // namespace sptetris
