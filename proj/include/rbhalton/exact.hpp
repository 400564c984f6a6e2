#pragma once

// Exact arithmetic vocabulary shared by every rbhalton header: GMP-backed
// integers and rationals, the library error type, and p/q text conversion.

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rbhalton {

using Integer = mpz_class;
using Rational = mpq_class;

enum class ErrorKind {
    precondition,  ///< caller violated an operation's precondition
    bad_config,    ///< generator/witness configuration is inconsistent
    guardrail,     ///< requested work exceeds a configured enumeration limit
    io,            ///< file or parse failure
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline Integer ipow(const Integer& base, unsigned long exponent) {
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline Integer ipow(long base, unsigned long exponent) { return ipow(Integer(base), exponent); }

/// Representative of a in [0, modulus).
inline Integer mod_floor(const Integer& a, const Integer& modulus) {
    Integer r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

inline Integer powmod(const Integer& base, const Integer& exponent, const Integer& modulus) {
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), modulus.get_mpz_t());
    return r;
}

inline Integer gcd(const Integer& a, const Integer& b) {
    Integer r;
    mpz_gcd(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

inline Integer lcm(const Integer& a, const Integer& b) {
    Integer r;
    mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

/// p/q in lowest terms; gmpxx arithmetic and comparison assume canonical operands.
inline Rational make_rational(const Integer& p, const Integer& q) {
    Rational r(p, q);
    r.canonicalize();
    return r;
}

/// Fractional part in [0, 1).
inline Rational frac(const Rational& x) {
    Integer fl;
    mpz_fdiv_q(fl.get_mpz_t(), x.get_num_mpz_t(), x.get_den_mpz_t());
    Rational r = x - Rational(fl);
    r.canonicalize();
    return r;
}

inline Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

inline bool fits_int64(const Integer& x) { return mpz_fits_slong_p(x.get_mpz_t()) != 0; }

inline std::int64_t to_int64(const Integer& x) {
    if (!fits_int64(x)) throw Error(ErrorKind::precondition, "integer does not fit in 64 bits: " + x.get_str());
    return x.get_si();
}

/// Natural logarithm of a positive integer of any size.
inline double log_integer(const Integer& x) {
    if (x <= 0) throw Error(ErrorKind::precondition, "log of non-positive integer");
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

/// "p/q" (or "p" for integers) in lowest terms.
inline std::string to_string(const Rational& x) {
    Rational c = x;
    c.canonicalize();
    if (c.get_den() == 1) return c.get_num().get_str();
    return c.get_num().get_str() + "/" + c.get_den().get_str();
}

inline double to_double(const Rational& x) { return x.get_d(); }

/// Parses "p/q", an integer, or a plain decimal such as "0.625" (exactly).
inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.pop_back();
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
    auto fail = [&] { return Error(ErrorKind::io, "cannot parse rational '" + std::string(text) + "'"); };
    if (s.empty()) throw fail();
    Rational out;
    try {
        if (auto slash = s.find('/'); slash != std::string::npos) {
            Integer p(s.substr(0, slash), 10);
            Integer q(s.substr(slash + 1), 10);
            if (q == 0) throw fail();
            out = make_rational(p, q);
        } else if (auto dot = s.find('.'); dot != std::string::npos) {
            bool neg = s.front() == '-';
            std::string whole = s.substr(neg ? 1 : 0, dot - (neg ? 1 : 0));
            std::string fracpart = s.substr(dot + 1);
            if (whole.empty()) whole = "0";
            if (fracpart.empty()) fracpart = "0";
            if (fracpart.find_first_not_of("0123456789") != std::string::npos) throw fail();
            Integer p(whole + fracpart, 10);
            out = make_rational(p, ipow(10, fracpart.size()));
            if (neg) out = -out;
        } else {
            out = Rational(Integer(s, 10));
        }
    } catch (const std::invalid_argument&) {
        throw fail();
    }
    out.canonicalize();
    return out;
}

}  // namespace rbhalton
