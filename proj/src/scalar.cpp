#include "sptetris/scalar.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>
#include <sstream>

namespace sptetris {

std::string_view to_string(ErrorKind kind)
{
    switch (kind) {
    case ErrorKind::DivisionByZero: return "DivisionByZero";
    case ErrorKind::IntegerOverflow: return "IntegerOverflow";
    case ErrorKind::FactorizationIncomplete: return "FactorizationIncomplete";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::BlockInfeasible: return "BlockInfeasible";
    case ErrorKind::TraceMismatch: return "TraceMismatch";
    case ErrorKind::NotSorted: return "NotSorted";
    case ErrorKind::ConstructionStuck: return "ConstructionStuck";
    case ErrorKind::InvalidDims: return "InvalidDims";
    case ErrorKind::OutOfRange: return "OutOfRange";
    case ErrorKind::Infeasible: return "Infeasible";
    case ErrorKind::DegenerateSpectrum: return "DegenerateSpectrum";
    case ErrorKind::ZeroRow: return "ZeroRow";
    case ErrorKind::Parse: return "Parse";
    case ErrorKind::Io: return "Io";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// Rational

Rational::Rational(long long num, long long den)
    : Rational(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)))
{
}

Rational::Rational(const mpz_class & num, const mpz_class & den)
{
    if (den == 0)
        throw Error(ErrorKind::DivisionByZero, "rational with zero denominator");
    q_ = mpq_class(num, den);
    q_.canonicalize();
}

Rational::Rational(const mpq_class & q) : q_(q)
{
    q_.canonicalize();
}

namespace {

bool all_digits(std::string_view s)
{
    if (s.empty())
        return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c)))
            return false;
    return true;
}

} // namespace

Rational Rational::parse(std::string_view text)
{
    std::string_view body = text;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front())))
        body.remove_prefix(1);
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back())))
        body.remove_suffix(1);
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num_text = body.substr(0, slash);
    const std::string_view den_text = slash == std::string_view::npos ? std::string_view("1") : body.substr(slash + 1);
    if (!all_digits(num_text) || !all_digits(den_text))
        throw Error(ErrorKind::Parse, "malformed rational '" + std::string(text) + "'");

    mpz_class num(std::string(num_text), 10);
    const mpz_class den(std::string(den_text), 10);
    if (negative)
        num = -num;
    return Rational(num, den);
}

Rational Rational::parse_decimal(std::string_view text)
{
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
        negative = body.front() == '-';
        body.remove_prefix(1);
    }

    long exponent = 0;
    if (const auto e = body.find_first_of("eE"); e != std::string_view::npos) {
        std::string_view exp_text = body.substr(e + 1);
        bool exp_negative = false;
        if (!exp_text.empty() && (exp_text.front() == '-' || exp_text.front() == '+')) {
            exp_negative = exp_text.front() == '-';
            exp_text.remove_prefix(1);
        }
        if (!all_digits(exp_text) || exp_text.size() > 6)
            throw Error(ErrorKind::Parse, "malformed decimal '" + std::string(text) + "'");
        exponent = std::stol(std::string(exp_text));
        if (exp_negative)
            exponent = -exponent;
        body = body.substr(0, e);
    }

    std::string digits;
    const auto dot = body.find('.');
    const std::string_view int_part = body.substr(0, dot);
    const std::string_view frac_part = dot == std::string_view::npos ? std::string_view() : body.substr(dot + 1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !all_digits(int_part))
        || (!frac_part.empty() && !all_digits(frac_part)))
        throw Error(ErrorKind::Parse, "malformed decimal '" + std::string(text) + "'");
    digits.append(int_part);
    digits.append(frac_part);
    exponent -= static_cast<long>(frac_part.size());

    mpz_class num(digits, 10);
    mpz_class den = 1;
    mpz_class scale;
    mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(exponent < 0 ? -exponent : exponent));
    if (exponent < 0)
        den = scale;
    else
        num *= scale;
    if (negative)
        num = -num;
    return Rational(num, den);
}

mpz_class Rational::floor() const
{
    mpz_class result;
    mpz_fdiv_q(result.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
    return result;
}

std::string Rational::to_string() const
{
    if (q_.get_den() == 1)
        return q_.get_num().get_str();
    return q_.get_num().get_str() + "/" + q_.get_den().get_str();
}

Rational & Rational::operator+=(const Rational & rhs)
{
    q_ += rhs.q_;
    return *this;
}

Rational & Rational::operator-=(const Rational & rhs)
{
    q_ -= rhs.q_;
    return *this;
}

Rational & Rational::operator*=(const Rational & rhs)
{
    q_ *= rhs.q_;
    return *this;
}

Rational & Rational::operator/=(const Rational & rhs)
{
    if (rhs.is_zero())
        throw Error(ErrorKind::DivisionByZero, "division of " + to_string() + " by zero");
    q_ /= rhs.q_;
    return *this;
}

std::ostream & operator<<(std::ostream & os, const Rational & r)
{
    return os << r.to_string();
}

Rational nearest_rational(const Rational & value, const mpz_class & max_den)
{
    if (max_den < 1)
        throw Error(ErrorKind::InvalidArgument, "max_den must be positive");
    if (value.den() <= max_den)
        return value;
    if (value.sign() < 0)
        return -nearest_rational(-value, max_den);

    // Continued-fraction convergents, then the best semiconvergent.
    mpz_class p0 = 0, q0 = 1, p1 = 1, q1 = 0;
    mpz_class n = value.num(), d = value.den();
    for (;;) {
        mpz_class a;
        mpz_fdiv_q(a.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        const mpz_class q2 = q0 + a * q1;
        if (q2 > max_den)
            break;
        const mpz_class p2 = p0 + a * p1;
        p0 = p1;
        q0 = q1;
        p1 = p2;
        q1 = q2;
        const mpz_class r = n - a * d;
        n = d;
        d = r;
        if (d == 0)
            break;
    }
    mpz_class k;
    mpz_fdiv_q(k.get_mpz_t(), mpz_class(max_den - q0).get_mpz_t(), q1.get_mpz_t());
    const Rational semi(p0 + k * p1, q0 + k * q1);
    const Rational conv(p1, q1);
    return (conv - value).abs() <= (semi - value).abs() ? conv : semi;
}

// ---------------------------------------------------------------------------
// RadicalScalar

RadicalScalar::RadicalScalar(int sign, Rational radicand) : sign_(sign), radicand_(std::move(radicand))
{
    if (sign < -1 || sign > 1)
        throw Error(ErrorKind::InvalidArgument, "radical sign must be -1, 0 or 1");
    if (radicand_.sign() < 0)
        throw Error(ErrorKind::InvalidArgument, "negative radicand " + radicand_.to_string());
    if ((sign == 0) != radicand_.is_zero())
        throw Error(ErrorKind::InvalidArgument, "radical sign is zero iff radicand is zero");
}

RadicalScalar RadicalScalar::sqrt(const Rational & r)
{
    return {r.is_zero() ? 0 : 1, r};
}

double RadicalScalar::to_double() const
{
    if (sign_ == 0)
        return 0.0;
    return sign_ * std::sqrt(radicand_.to_double());
}

RadicalScalar operator*(const RadicalScalar & a, const RadicalScalar & b)
{
    const int sign = a.sign() * b.sign();
    if (sign == 0)
        return {};
    return {sign, a.radicand() * b.radicand()};
}

std::ostream & operator<<(std::ostream & os, const RadicalScalar & r)
{
    if (r.is_zero())
        return os << "0";
    if (r.sign() < 0)
        os << "-";
    return os << "sqrt(" << r.radicand() << ")";
}

// ---------------------------------------------------------------------------
// Canonical radicals

namespace {

struct SquareSplit {
    mpz_class root;       // largest s with s^2 dividing n
    mpz_class squarefree; // n / s^2
};

SquareSplit split_square(const mpz_class & n, std::uint64_t bound)
{
    SquareSplit out{1, 1};
    mpz_class rest = n;

    auto take = [&](unsigned long d) {
        unsigned exponent = 0;
        while (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
            mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), d);
            ++exponent;
        }
        for (unsigned i = 0; i < exponent / 2; ++i)
            out.root *= d;
        if (exponent % 2)
            out.squarefree *= d;
    };

    const unsigned long ubound = static_cast<unsigned long>(bound);
    auto root_limit = [&] {
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
        return s.fits_ulong_p() ? std::min(ubound, s.get_ui()) : ubound;
    };

    take(2);
    unsigned long limit = root_limit();
    for (unsigned long d = 3; d <= limit && rest != 1; d += 2) {
        if (mpz_divisible_ui_p(rest.get_mpz_t(), d)) {
            take(d);
            limit = root_limit();
        }
    }

    if (rest == 1)
        return out;
    const mpz_class bound_sq = mpz_class(ubound) * ubound;
    if (rest <= bound_sq) {
        // no factor <= bound and rest <= bound^2 means rest is prime
        out.squarefree *= rest;
        return out;
    }
    if (mpz_perfect_square_p(rest.get_mpz_t())) {
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), rest.get_mpz_t());
        out.root *= s;
        return out;
    }
    throw Error(ErrorKind::FactorizationIncomplete,
                "cofactor " + rest.get_str() + " exceeds factor bound " + std::to_string(bound) + " squared");
}

} // namespace

RadicalScalar CanonicalRadical::to_radical() const
{
    const int sign = coefficient.sign();
    return {sign, coefficient * coefficient * Rational(squarefree, 1)};
}

CanonicalRadical canonicalize(const RadicalScalar & value, std::uint64_t factor_bound)
{
    if (factor_bound < 2)
        throw Error(ErrorKind::InvalidArgument, "factor bound must be at least 2");
    if (value.is_zero())
        return {Rational(0), 1};

    // sqrt(p/q) = (sp / (sq * fq)) * sqrt(fp * fq) with p = sp^2 fp, q = sq^2 fq
    const SquareSplit p = split_square(value.radicand().num(), factor_bound);
    const SquareSplit q = split_square(value.radicand().den(), factor_bound);
    Rational coefficient(p.root, q.root * q.squarefree);
    if (value.sign() < 0)
        coefficient = -coefficient;
    return {coefficient, p.squarefree * q.squarefree};
}

} // namespace sptetris
