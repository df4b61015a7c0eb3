#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>

#include "sptetris/error.hpp"

namespace sptetris {

inline constexpr std::uint64_t kDefaultFactorBound = 1'000'000;

/// Exact signed fraction, always kept in lowest terms with a positive
/// denominator. Backed by GMP, so arithmetic never overflows.
class Rational {
  public:
    Rational() = default;
    Rational(long long value) : q_(static_cast<long>(value)) {}
    Rational(long long num, long long den);
    Rational(const mpz_class & num, const mpz_class & den);
    explicit Rational(const mpq_class & q);

    /// Accepts "p", "p/q", "-p/q". Whitespace is not allowed.
    static Rational parse(std::string_view text);
    /// Exact value of a finite decimal literal such as "1.732" or "-2.5e-3".
    static Rational parse_decimal(std::string_view text);

    [[nodiscard]] const mpz_class & num() const { return q_.get_num(); }
    [[nodiscard]] const mpz_class & den() const { return q_.get_den(); }
    [[nodiscard]] const mpq_class & raw() const { return q_; }

    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
    [[nodiscard]] bool is_integer() const { return q_.get_den() == 1; }

    /// Greatest integer not exceeding the value.
    [[nodiscard]] mpz_class floor() const;
    [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(q_))); }
    [[nodiscard]] double to_double() const { return q_.get_d(); }
    [[nodiscard]] std::string to_string() const;

    Rational & operator+=(const Rational & rhs);
    Rational & operator-=(const Rational & rhs);
    Rational & operator*=(const Rational & rhs);
    Rational & operator/=(const Rational & rhs);

    friend Rational operator+(Rational lhs, const Rational & rhs) { return lhs += rhs; }
    friend Rational operator-(Rational lhs, const Rational & rhs) { return lhs -= rhs; }
    friend Rational operator*(Rational lhs, const Rational & rhs) { return lhs *= rhs; }
    friend Rational operator/(Rational lhs, const Rational & rhs) { return lhs /= rhs; }
    friend Rational operator-(const Rational & v) { return Rational(mpq_class(-v.q_)); }

    friend bool operator==(const Rational & a, const Rational & b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational & a, const Rational & b)
    {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

  private:
    mpq_class q_;
};

std::ostream & operator<<(std::ostream & os, const Rational & r);

/// Closest fraction to `value` whose denominator does not exceed `max_den`.
Rational nearest_rational(const Rational & value, const mpz_class & max_den);

/// The real number sign * sqrt(radicand). Every synthesis-matrix entry has
/// this shape because each one squares to a rational.
class RadicalScalar {
  public:
    RadicalScalar() = default;
    /// Throws InvalidArgument unless sign is in {-1,0,1}, radicand >= 0 and
    /// sign == 0 exactly when radicand == 0.
    RadicalScalar(int sign, Rational radicand);

    /// +sqrt(r) for r >= 0 (zero when r == 0).
    static RadicalScalar sqrt(const Rational & r);

    [[nodiscard]] int sign() const { return sign_; }
    [[nodiscard]] const Rational & radicand() const { return radicand_; }
    [[nodiscard]] bool is_zero() const { return sign_ == 0; }

    /// Exact square of the represented value.
    [[nodiscard]] const Rational & square() const { return radicand_; }
    [[nodiscard]] RadicalScalar negated() const { return {-sign_, radicand_}; }
    /// Nearest double; relative error at most 4 ulp.
    [[nodiscard]] double to_double() const;

    friend bool operator==(const RadicalScalar &, const RadicalScalar &) = default;

  private:
    int sign_ = 0;
    Rational radicand_;
};

RadicalScalar operator*(const RadicalScalar & a, const RadicalScalar & b);
std::ostream & operator<<(std::ostream & os, const RadicalScalar & r);

/// coefficient * sqrt(squarefree), with squarefree >= 1 having no square
/// divisor > 1. Two values are equal as reals iff they are fieldwise equal.
struct CanonicalRadical {
    Rational coefficient;
    mpz_class squarefree{1};

    [[nodiscard]] RadicalScalar to_radical() const;

    friend bool operator==(const CanonicalRadical & a, const CanonicalRadical & b)
    {
        return a.coefficient == b.coefficient && a.squarefree == b.squarefree;
    }
};

/// Extracts square factors by trial division up to `factor_bound`. Throws
/// FactorizationIncomplete when a cofactor above factor_bound^2 survives that
/// is not itself a perfect square.
CanonicalRadical canonicalize(const RadicalScalar & value, std::uint64_t factor_bound = kDefaultFactorBound);

} // namespace sptetris
