#include "sptetris/formats.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

namespace sptetris {

using nlohmann::json;

namespace {

[[noreturn]] void parse_error(const std::string & what)
{
    throw Error(ErrorKind::Parse, what);
}

json integer_to_json(const mpz_class & v)
{
    if (v.fits_slong_p())
        return static_cast<std::int64_t>(v.get_si());
    return v.get_str();
}

mpz_class integer_from_json(const json & j, const char * field)
{
    if (j.is_number_integer())
        return mpz_class(std::to_string(j.get<std::int64_t>()));
    if (j.is_number_unsigned())
        return mpz_class(std::to_string(j.get<std::uint64_t>()));
    if (j.is_string()) {
        mpz_class v;
        if (v.set_str(j.get<std::string>(), 10) != 0)
            parse_error(std::string("field '") + field + "' is not an integer");
        return v;
    }
    parse_error(std::string("field '") + field + "' must be an integer or a decimal string");
}

std::vector<Rational> rationals_from_json(const json & j, const char * field)
{
    if (!j.is_array())
        parse_error(std::string("field '") + field + "' must be a list");
    std::vector<Rational> out;
    out.reserve(j.size());
    for (const auto & v : j)
        out.push_back(rational_from_json(v));
    return out;
}

json rationals_to_json(const std::vector<Rational> & values)
{
    json out = json::array();
    for (const auto & v : values)
        out.push_back(v.to_string());
    return out;
}

std::size_t size_from_json(const json & j, const char * field)
{
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        parse_error(std::string("field '") + field + "' must be a non-negative integer");
    return j.get<std::size_t>();
}

const json & require(const json & j, const char * field)
{
    if (!j.is_object() || !j.contains(field))
        parse_error(std::string("missing field '") + field + "'");
    return j.at(field);
}

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

json partition_to_json(const Partition & p)
{
    return p.cuts;
}

} // namespace

Rational rational_from_json(const json & j)
{
    try {
        if (j.is_string())
            return Rational::parse(j.get<std::string>());
        if (j.is_number_integer())
            return Rational(static_cast<long long>(j.get<std::int64_t>()));
    } catch (const Error & e) {
        parse_error(e.what());
    }
    parse_error("expected a rational like \"3/2\", got " + j.dump());
}

LoadedSpec spec_from_json(const json & j)
{
    if (!j.is_object())
        parse_error("spec file must hold a JSON object");
    const std::size_t dim = size_from_json(require(j, "dim"), "dim");
    std::vector<Rational> eigenvalues = rationals_from_json(require(j, "eigenvalues"), "eigenvalues");
    if (eigenvalues.size() != dim)
        parse_error("dim is " + std::to_string(dim) + " but " + std::to_string(eigenvalues.size())
                    + " eigenvalues are listed");

    const bool has_sq = j.contains("norms_squared");
    const bool has_dec = j.contains("norms");
    const bool has_unit = j.contains("unit");
    if (int(has_sq) + int(has_dec) + int(has_unit) != 1)
        parse_error("give exactly one of 'norms_squared', 'norms' or 'unit'");

    LoadedSpec out{FrameSpec({Rational(1)}, {Rational(1)}), {}};
    std::vector<Rational> norms_sq;
    if (has_sq) {
        norms_sq = rationals_from_json(j.at("norms_squared"), "norms_squared");
    } else if (has_dec) {
        const json & norms = j.at("norms");
        if (!norms.is_array())
            parse_error("field 'norms' must be a list");
        const mpz_class max_den(1'000'000);
        for (const auto & n : norms) {
            std::string text;
            if (n.is_string())
                text = n.get<std::string>();
            else if (n.is_number())
                text = n.dump();
            else
                parse_error("norm entries must be decimal strings");
            Rational value;
            try {
                value = Rational::parse_decimal(text);
            } catch (const Error & e) {
                parse_error(e.what());
            }
            const Rational exact_sq = value * value;
            const Rational sq = nearest_rational(exact_sq, max_den);
            out.warnings.push_back("norm " + text + " squared to " + sq.to_string()
                                   + (sq == exact_sq ? "" : " (rounded)") + "; exact results need 'norms_squared'");
            norms_sq.push_back(sq);
        }
    } else {
        if (!j.at("unit").is_boolean() || !j.at("unit").get<bool>())
            parse_error("field 'unit' must be true when present");
        const Rational total = sum(eigenvalues);
        if (!total.is_integer())
            throw Error(ErrorKind::TraceMismatch,
                        "unit norms need an integral eigenvalue sum, got " + total.to_string());
        if (total.sign() <= 0)
            parse_error("eigenvalues must be positive");
        norms_sq.assign(total.num().get_ui(), Rational(1));
    }

    try {
        out.spec = FrameSpec(std::move(eigenvalues), std::move(norms_sq));
    } catch (const Error & e) {
        parse_error(e.what());
    }
    return out;
}

json read_json_file(const std::filesystem::path & path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Io, "cannot read " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception & e) {
        parse_error(path.string() + ": " + e.what());
    }
}

LoadedSpec load_spec_file(const std::filesystem::path & path)
{
    return spec_from_json(read_json_file(path));
}

json spec_to_json(const FrameSpec & spec)
{
    return json{{"dim", spec.dim()},
                {"eigenvalues", rationals_to_json(spec.eigenvalues())},
                {"norms_squared", rationals_to_json(spec.norms_sq())}};
}

json radical_to_json(const RadicalScalar & r)
{
    return json{{"sign", r.sign()},
                {"rad", {{"num", integer_to_json(r.radicand().num())}, {"den", integer_to_json(r.radicand().den())}}}};
}

RadicalScalar radical_from_json(const json & j)
{
    const json & sign = require(j, "sign");
    const json & rad = require(j, "rad");
    if (!sign.is_number_integer())
        parse_error("field 'sign' must be -1, 0 or 1");
    const mpz_class num = integer_from_json(require(rad, "num"), "num");
    const mpz_class den = integer_from_json(require(rad, "den"), "den");
    try {
        return RadicalScalar(sign.get<int>(), Rational(num, den));
    } catch (const Error & e) {
        parse_error(e.what());
    }
}

json matrix_to_json(const SynthesisMatrix & f, const MatrixMetadata & meta, bool reproducible)
{
    json entries = json::array();
    for (const auto & [key, value] : f.entries()) {
        json e = radical_to_json(value);
        e["col"] = key.first;
        e["row"] = key.second;
        entries.push_back(std::move(e));
    }
    json log = json::array();
    for (const auto & b : f.block_log())
        log.push_back(json{{"kind", to_string(b.kind)},
                           {"rowFirst", b.row_first},
                           {"rowLast", b.row_last},
                           {"colFirst", b.col_first},
                           {"colLast", b.col_last}});

    json metadata{{"blockLog", std::move(log)}};
    if (meta.eigenvalues)
        metadata["eigenvalues"] = rationals_to_json(*meta.eigenvalues);
    if (meta.norms_squared)
        metadata["norms_squared"] = rationals_to_json(*meta.norms_squared);
    if (!reproducible)
        metadata["generator"] = json{{"name", kGeneratorName}, {"version", kGeneratorVersion}};

    return json{{"dim", f.dim()}, {"count", f.count()}, {"entries", std::move(entries)}, {"metadata", metadata}};
}

std::optional<FrameSpec> LoadedMatrix::spec() const
{
    if (!metadata.eigenvalues || !metadata.norms_squared)
        return std::nullopt;
    return FrameSpec(*metadata.eigenvalues, *metadata.norms_squared);
}

LoadedMatrix matrix_from_json(const json & j)
{
    if (!j.is_object())
        parse_error("matrix file must hold a JSON object");
    const std::size_t dim = size_from_json(require(j, "dim"), "dim");
    const std::size_t count = size_from_json(require(j, "count"), "count");
    if (dim == 0 || count == 0)
        parse_error("dim and count must be positive");

    LoadedMatrix out{SynthesisMatrix(dim, count), {}};
    const json & entries = require(j, "entries");
    if (!entries.is_array())
        parse_error("field 'entries' must be a list");
    std::optional<SynthesisMatrix::Key> previous;
    for (const auto & e : entries) {
        const std::size_t row = size_from_json(require(e, "row"), "row");
        const std::size_t col = size_from_json(require(e, "col"), "col");
        if (row >= dim || col >= count)
            parse_error("entry (" + std::to_string(row) + ", " + std::to_string(col) + ") is outside the matrix");
        const SynthesisMatrix::Key key{col, row};
        if (previous && !(*previous < key))
            parse_error("entries must be sorted by (col, row) without duplicates");
        previous = key;
        const RadicalScalar value = radical_from_json(e);
        if (value.is_zero())
            parse_error("explicit zero entry at (" + std::to_string(row) + ", " + std::to_string(col) + ")");
        out.matrix.set(row, col, value);
    }

    if (j.contains("metadata")) {
        const json & meta = j.at("metadata");
        if (meta.contains("eigenvalues"))
            out.metadata.eigenvalues = rationals_from_json(meta.at("eigenvalues"), "eigenvalues");
        if (meta.contains("norms_squared"))
            out.metadata.norms_squared = rationals_from_json(meta.at("norms_squared"), "norms_squared");
        if (meta.contains("blockLog")) {
            for (const auto & b : meta.at("blockLog")) {
                const auto kind = block_kind_from_string(require(b, "kind").get<std::string>());
                if (!kind)
                    parse_error("unknown block kind " + b.at("kind").dump());
                out.matrix.log({*kind, size_from_json(require(b, "rowFirst"), "rowFirst"),
                                size_from_json(require(b, "rowLast"), "rowLast"),
                                size_from_json(require(b, "colFirst"), "colFirst"),
                                size_from_json(require(b, "colLast"), "colLast")});
            }
        }
    }
    return out;
}

void write_csv(std::ostream & os, const SynthesisMatrix & f)
{
    const DenseMatrix d = to_dense(f);
    for (std::size_t r = 0; r < d.rows; ++r) {
        for (std::size_t c = 0; c < d.cols; ++c) {
            if (c)
                os << ',';
            os << format_double(d(r, c));
        }
        os << '\n';
    }
}

DenseMatrix read_csv(std::istream & is)
{
    DenseMatrix d;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos)
            continue;
        std::vector<double> row;
        std::stringstream cells(line);
        std::string cell;
        while (std::getline(cells, cell, ',')) {
            std::size_t used = 0;
            double v = 0.0;
            try {
                v = std::stod(cell, &used);
            } catch (const std::exception &) {
                parse_error("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
            }
            if (cell.find_first_not_of(" \t", used) != std::string::npos)
                parse_error("line " + std::to_string(line_no) + ": '" + cell + "' is not a number");
            row.push_back(v);
        }
        if (d.rows == 0)
            d.cols = row.size();
        else if (row.size() != d.cols)
            parse_error("line " + std::to_string(line_no) + " has " + std::to_string(row.size()) + " cells, expected "
                        + std::to_string(d.cols));
        d.values.insert(d.values.end(), row.begin(), row.end());
        ++d.rows;
    }
    if (d.rows == 0)
        parse_error("CSV holds no rows");
    return d;
}

json report_to_json(const VerificationReport & r)
{
    json out{{"rowSquareSums", rationals_to_json(r.row_square_sums)},
             {"colSquareSums", rationals_to_json(r.col_square_sums)},
             {"orthogonal", r.orthogonal},
             {"mode", r.mode.kind == OrthogonalityMode::Kind::Exact ? "exact" : "float"},
             {"nnz", r.nnz},
             {"maxPerColumn", r.max_per_column},
             {"frameBounds", nullptr},
             {"matchesSpec", nullptr}};
    if (r.mode.kind == OrthogonalityMode::Kind::Float)
        out["tolerance"] = r.mode.tolerance;
    if (r.frame_bounds)
        out["frameBounds"] = {r.frame_bounds->first.to_string(), r.frame_bounds->second.to_string()};
    if (r.matches_spec)
        out["matchesSpec"] = *r.matches_spec;
    return out;
}

json report_to_json(const FloatVerificationReport & r)
{
    json rows = json::array();
    json cols = json::array();
    for (double v : r.row_square_sums)
        rows.push_back(v);
    for (double v : r.col_square_sums)
        cols.push_back(v);
    return json{{"rowSquareSums", rows},
                {"colSquareSums", cols},
                {"orthogonal", r.orthogonal},
                {"mode", "float"},
                {"tolerance", r.tolerance},
                {"nnz", r.nnz},
                {"maxPerColumn", r.max_per_column},
                {"frameBounds", {r.frame_bounds.first, r.frame_bounds.second}}};
}

json report_to_json(const ReadinessReport & r, const std::optional<Partition> & forced)
{
    json out{{"ready", r.ready}, {"partition", nullptr}, {"forcedPartition", nullptr}, {"violation", nullptr}};
    if (r.partition)
        out["partition"] = partition_to_json(*r.partition);
    if (forced)
        out["forcedPartition"] = partition_to_json(*forced);
    if (r.violation)
        out["violation"] = json{{"k", r.violation->k}, {"condition", to_string(r.violation->condition)}};
    return out;
}

json result_to_json(const SearchResult & r)
{
    json orderings = json::array();
    for (const auto & o : r.orderings)
        orderings.push_back(
            json{{"eigenvalues", rationals_to_json(o.eigenvalues)}, {"norms_squared", rationals_to_json(o.norms_sq)}});
    return json{{"orderings", orderings},
                {"exhausted", r.exhausted},
                {"budgetExhausted", r.budget_exhausted},
                {"nodes", r.nodes}};
}

json verdict_to_json(const UnitTightVerdict & v)
{
    json out{{"feasible", v.feasible},
             {"ratio", std::to_string(v.numerator) + "/" + std::to_string(v.denominator)},
             {"witnessL", nullptr},
             {"failingK", nullptr}};
    if (v.witness_l)
        out["witnessL"] = *v.witness_l;
    if (v.failing_k)
        out["failingK"] = *v.failing_k;
    return out;
}

std::string dump(const json & j)
{
    return j.dump(2) + "\n";
}

} // namespace sptetris
