#pragma once

// Formal u/v-adic expansion of integers.
//
// Starting from z_0 = z, each step picks the unique digit a_r in {0,...,u-1}
// with u | (v*z_{r-1} - a_r) and continues with z_r = (v*z_{r-1} - a_r)/u.
// Digits are stored lowest order first. The recurrence is defined for every
// integer, so negative inputs and bases with u <= v yield legitimate infinite
// expansions; the state object extends lazily.

#include "rbhalton/exact.hpp"

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace rbhalton {

/// Reduced fraction u/v with u >= 2, v >= 1.
struct RationalBase {
    std::int64_t u = 2;
    std::int64_t v = 1;

    RationalBase() = default;
    RationalBase(std::int64_t u_, std::int64_t v_ = 1) : u(u_), v(v_) {
        if (u < 2) throw Error(ErrorKind::bad_config, "rational base needs u >= 2, got u=" + std::to_string(u));
        if (v < 1) throw Error(ErrorKind::bad_config, "rational base needs v >= 1, got v=" + std::to_string(v));
        if (std::gcd(u, v) != 1)
            throw Error(ErrorKind::bad_config,
                        "rational base " + std::to_string(u) + "/" + std::to_string(v) + " is not reduced");
    }

    /// Accepts "u/v" or "u".
    static RationalBase parse(const std::string& text) {
        try {
            auto slash = text.find('/');
            if (slash == std::string::npos) return RationalBase(std::stoll(text), 1);
            return RationalBase(std::stoll(text.substr(0, slash)), std::stoll(text.substr(slash + 1)));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::bad_config, "cannot parse base '" + text + "'");
        }
    }

    [[nodiscard]] Rational value() const { return Rational(Integer(u), Integer(v)); }
    [[nodiscard]] std::string str() const { return std::to_string(u) + "/" + std::to_string(v); }

    friend bool operator==(const RationalBase&, const RationalBase&) = default;
};

namespace detail {

/// One step of the recurrence on a machine integer. Returns false (leaving
/// the inputs untouched) if v*z could overflow.
inline bool digit_step_fast(std::int64_t& z, int& digit, const RationalBase& b) {
    constexpr std::int64_t lim = std::numeric_limits<std::int64_t>::max() / 4;
    if (z > lim / b.v || z < -lim / b.v) return false;
    std::int64_t vz = b.v * z;
    std::int64_t a = vz % b.u;
    if (a < 0) a += b.u;
    digit = static_cast<int>(a);
    z = (vz - a) / b.u;
    return true;
}

inline void digit_step(Integer& z, int& digit, const RationalBase& b) {
    Integer vz = z * b.v;
    Integer a = mod_floor(vz, Integer(b.u));
    digit = static_cast<int>(a.get_si());
    vz -= a;
    mpz_divexact_ui(z.get_mpz_t(), vz.get_mpz_t(), static_cast<unsigned long>(b.u));
}

}  // namespace detail

/// First `count` digits a_1..a_count of the formal expansion of z.
inline std::vector<int> leading_digits(const Integer& z, const RationalBase& base, std::size_t count) {
    std::vector<int> out(count, 0);
    std::size_t r = 0;
    if (fits_int64(z)) {
        std::int64_t zs = z.get_si();
        for (; r < count; ++r) {
            if (zs == 0) return out;
            if (!detail::digit_step_fast(zs, out[r], base)) break;
        }
        if (r == count) return out;
        Integer zb(static_cast<long>(zs));
        for (; r < count; ++r) {
            if (zb == 0) return out;
            detail::digit_step(zb, out[r], base);
        }
        return out;
    }
    Integer zb = z;
    for (; r < count; ++r) {
        if (zb == 0) return out;
        detail::digit_step(zb, out[r], base);
    }
    return out;
}

/// Digits and remainders of a formal expansion, extended on demand.
class ExpansionState {
public:
    ExpansionState(Integer z, RationalBase base) : z0_(std::move(z)), base_(base), current_(z0_) {
        if (z0_ == 0) terminated_at_ = 0;
    }

    [[nodiscard]] const Integer& value() const { return z0_; }
    [[nodiscard]] const RationalBase& base() const { return base_; }
    [[nodiscard]] std::size_t size() const { return digits_.size(); }

    /// a_1..a_r, index 0 holds a_1.
    [[nodiscard]] const std::vector<int>& digits() const { return digits_; }
    /// z_1..z_r, index 0 holds z_1.
    [[nodiscard]] const std::vector<Integer>& remainders() const { return remainders_; }

    /// z_j for 0 <= j <= size().
    [[nodiscard]] const Integer& remainder(std::size_t j) const {
        if (j > remainders_.size()) throw Error(ErrorKind::precondition, "remainder index beyond computed prefix");
        return j == 0 ? z0_ : remainders_[j - 1];
    }

    /// True once some computed z_r (including z_0) is zero.
    [[nodiscard]] bool terminated() const { return terminated_at_.has_value(); }
    /// Smallest r with z_r = 0, if one has been seen.
    [[nodiscard]] std::optional<std::size_t> terminated_at() const { return terminated_at_; }

    /// Extends the computed prefix to at least r digits; existing entries are kept.
    void extend(std::size_t r) {
        digits_.reserve(r);
        remainders_.reserve(r);
        while (digits_.size() < r) {
            int a = 0;
            detail::digit_step(current_, a, base_);
            digits_.push_back(a);
            remainders_.push_back(current_);
            if (!terminated_at_ && current_ == 0) terminated_at_ = digits_.size();
        }
    }

private:
    Integer z0_;
    RationalBase base_;
    Integer current_;
    std::vector<int> digits_;
    std::vector<Integer> remainders_;
    std::optional<std::size_t> terminated_at_;
};

inline ExpansionState expand_digits(const Integer& z, const RationalBase& base, std::size_t r) {
    ExpansionState st(z, base);
    st.extend(r);
    return st;
}

/// Evaluates sum_{r<=j} (a_r/v)(u/v)^{r-1} + z_j (u/v)^j exactly; throws if the
/// result is not an integer or a digit is out of range.
inline Integer reconstruct(const std::vector<int>& digits, const Integer& remainder, const RationalBase& base) {
    Rational ratio = base.value();
    Rational power = 1;
    Rational sum = 0;
    for (int a : digits) {
        if (a < 0 || a >= base.u)
            throw Error(ErrorKind::precondition, "digit " + std::to_string(a) + " outside {0,...,u-1}");
        sum += Rational(a) / Rational(base.v) * power;
        power *= ratio;
    }
    sum += Rational(remainder) * power;
    sum.canonicalize();
    if (sum.get_den() != 1)
        throw Error(ErrorKind::precondition, "corrupted expansion prefix: reconstruction gives " + to_string(sum));
    return sum.get_num();
}

/// Largest k with a_k != 0 if the expansion terminates within `cap` steps.
inline std::optional<std::size_t> expansion_length(const Integer& z, const RationalBase& base, std::size_t cap) {
    if (z == 0) return 0;
    Integer cur = z;
    std::size_t last_nonzero = 0;
    for (std::size_t r = 1; r <= cap; ++r) {
        int a = 0;
        detail::digit_step(cur, a, base);
        if (a != 0) last_nonzero = r;
        if (cur == 0) return last_nonzero;
    }
    return std::nullopt;
}

}  // namespace rbhalton
