#include "fttc/rational.hpp"

#include <cctype>
#include <ostream>

namespace fttc {

namespace {

bool canonical_digits(std::string_view s, bool allow_zero) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    if (s.size() > 1 && s.front() == '0') return false;
    if (!allow_zero && s == "0") return false;
    return true;
}

}  // namespace

Rational::Rational(long num, long den) {
    if (den == 0) throw std::domain_error("rational with zero denominator");
    v_ = mpq_class(num, 1) / mpq_class(den, 1);
    v_.canonicalize();
}

Rational& Rational::operator/=(const Rational& o) {
    if (o.is_zero()) throw std::domain_error("division by zero");
    v_ /= o.v_;
    return *this;
}

bool Rational::is_integer() const { return v_.get_den() == 1; }

Rational Rational::parse(std::string_view text) {
    const auto bad = [&](const char* why) {
        return std::invalid_argument("invalid rational \"" + std::string(text) + "\": " + why);
    };
    std::string_view body = text;
    bool negative = false;
    if (!body.empty() && body.front() == '-') {
        negative = true;
        body.remove_prefix(1);
    }
    const auto slash = body.find('/');
    const std::string_view num = body.substr(0, slash);
    if (!canonical_digits(num, true)) throw bad("malformed numerator");
    if (negative && num == "0") throw bad("negative zero");

    Rational r;
    if (slash == std::string_view::npos) {
        r.v_ = mpq_class(mpz_class(std::string(num)), 1);
    } else {
        const std::string_view den = body.substr(slash + 1);
        if (!canonical_digits(den, false)) throw bad("malformed denominator");
        if (den == "1") throw bad("integer written with denominator 1");
        if (num == "0") throw bad("zero written as a fraction");
        const mpz_class n(std::string{num});
        const mpz_class d(std::string{den});
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
        if (g != 1) throw bad("not in lowest terms");
        r.v_ = mpq_class(n, d);
    }
    if (negative) r.v_ = -r.v_;
    return r;
}

std::string Rational::str() const {
    if (is_integer()) return v_.get_num().get_str();
    return v_.get_num().get_str() + "/" + v_.get_den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

}  // namespace fttc
