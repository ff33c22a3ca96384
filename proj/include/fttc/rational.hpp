#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace fttc {

/// Exact rational number in canonical form (reduced, positive denominator).
///
/// Thin value wrapper over GMP's mpq_class. Every arithmetic result is
/// canonicalized, so equality is structural.
class Rational {
public:
    Rational() = default;
    Rational(long value) : v_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(long num, long den);

    /// Parses "n" or "n/d" in canonical form. Rejects "2/4", "1/1", "-0",
    /// leading zeros, signs on the denominator and surrounding whitespace.
    static Rational parse(std::string_view text);

    /// "n" when the value is an integer, "n/d" otherwise.
    [[nodiscard]] std::string str() const;

    [[nodiscard]] bool is_zero() const { return sgn(v_) == 0; }
    [[nodiscard]] bool is_positive() const { return sgn(v_) > 0; }
    [[nodiscard]] bool is_negative() const { return sgn(v_) < 0; }
    [[nodiscard]] bool is_integer() const;
    [[nodiscard]] int sign() const { return sgn(v_); }

    [[nodiscard]] std::string numerator_str() const { return v_.get_num().get_str(); }
    [[nodiscard]] std::string denominator_str() const { return v_.get_den().get_str(); }

    /// Lossy conversion, for display and benchmarks only.
    [[nodiscard]] double to_double() const { return v_.get_d(); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { Rational r; r.v_ = -a.v_; return r; }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.v_, b.v_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.v_, b.v_);
        return c < 0 ? std::strong_ordering::less
             : c > 0 ? std::strong_ordering::greater
                     : std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r);

    [[nodiscard]] const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

[[nodiscard]] inline Rational abs(const Rational& r) { return r.is_negative() ? -r : r; }
[[nodiscard]] inline const Rational& min(const Rational& a, const Rational& b) { return b < a ? b : a; }
[[nodiscard]] inline const Rational& max(const Rational& a, const Rational& b) { return a < b ? b : a; }

}  // namespace fttc
