#pragma once

// Exact star discrepancy of finite point sets and anchored-box counting.
//
// D*_N = sup_{y in (0,1]^s} | #{n : x_n < y componentwise}/N - prod y_i |.
// The sup of (volume - count) is attained at corners whose coordinates are
// point coordinates or 1, counting strictly below; the sup of
// (count - volume) is approached just above corners built from point
// coordinates below 1, counting points <= the corner. Coordinates are
// rescaled to integers over a per-dimension common denominator, so every
// corner is evaluated with exact integer arithmetic (int64, int128 or GMP,
// whichever is wide enough).

#include "rbhalton/sequence.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

namespace rbhalton {

/// Enumeration limits; RB_QMC_GUARDRAIL="cells[,enumeration]" overrides the defaults.
struct Limits {
    double discrepancy_cells = 1e8;   ///< max N^s * s corner tests per discrepancy evaluation
    double enumeration = 1e5;         ///< max indices scanned by brute-force witness checks

    /// "cells[,enumeration]"
    static Limits parse(const std::string& text) {
        Limits l;
        try {
            auto comma = text.find(',');
            l.discrepancy_cells = std::stod(text.substr(0, comma));
            if (comma != std::string::npos) l.enumeration = std::stod(text.substr(comma + 1));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::bad_config, "guardrail must look like 'cells[,enumeration]', got '" + text + "'");
        }
        if (!(l.discrepancy_cells > 0) || !(l.enumeration > 0)) throw Error(ErrorKind::bad_config, "guardrail limits must be positive");
        return l;
    }

    static Limits from_env() {
        if (const char* env = std::getenv("RB_QMC_GUARDRAIL"); env != nullptr && *env != '\0') return parse(env);
        return {};
    }

    [[nodiscard]] bool within(std::size_t s, double N) const { return static_cast<double>(s) * std::pow(N, static_cast<double>(s)) <= discrepancy_cells; }
};

/// Closed-form 1-d star discrepancy: max_i max(i/N - x_(i), x_(i) - (i-1)/N).
inline Rational star_discrepancy_1d(std::vector<Rational> xs) {
    if (xs.empty()) throw Error(ErrorKind::precondition, "star discrepancy of an empty point set");
    std::sort(xs.begin(), xs.end());
    const Rational N(static_cast<long>(xs.size()));
    Rational best = 0;
    for (std::size_t i = 1; i <= xs.size(); ++i) {
        Rational a = Rational(static_cast<long>(i)) / N - xs[i - 1];
        Rational b = xs[i - 1] - Rational(static_cast<long>(i - 1)) / N;
        best = std::max({best, a, b});
    }
    best.canonicalize();
    return best;
}

namespace detail {

using int128 = __int128;

inline int128 to_int128(const Integer& x) {
    // |x| < 2^126 is guaranteed by the caller.
    Integer hi, lo;
    Integer ax = x < 0 ? Integer(-x) : x;
    mpz_fdiv_q_2exp(hi.get_mpz_t(), ax.get_mpz_t(), 64);
    mpz_fdiv_r_2exp(lo.get_mpz_t(), ax.get_mpz_t(), 64);
    unsigned long hl = mpz_get_ui(hi.get_mpz_t());
    unsigned long ll = mpz_get_ui(lo.get_mpz_t());
    int128 v = (static_cast<int128>(hl) << 64) | static_cast<int128>(ll);
    return x < 0 ? -v : v;
}

inline Integer from_int128(int128 v) {
    bool neg = v < 0;
    unsigned __int128 a = neg ? static_cast<unsigned __int128>(-v) : static_cast<unsigned __int128>(v);
    Integer hi(static_cast<unsigned long>(a >> 64));
    Integer lo(static_cast<unsigned long>(a & 0xFFFFFFFFFFFFFFFFULL));
    Integer r = (hi << 64) + lo;
    return neg ? Integer(-r) : r;
}

template <class I>
Integer to_integer(const I& v) {
    if constexpr (std::is_same_v<I, Integer>) return v;
    else if constexpr (std::is_same_v<I, int128>) return from_int128(v);
    else return Integer(static_cast<long>(v));
}

/// Grid sweep over the first N rows of a row-major N x s table of scaled
/// coordinates. Returns max over corners of the local discrepancy times
/// N * prod(D), never below 0.
template <class I>
class CornerSweep {
public:
    CornerSweep(const std::vector<I>& coords, const std::vector<I>& denominators, std::size_t s, std::size_t N)
        : a_(coords), D_(denominators), s_(s), N_(N) {
        Dt_ = I(1);
        for (const auto& d : D_) Dt_ = Dt_ * d;
        NI_ = I(static_cast<long>(N));
        order_.resize(N);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        const std::size_t L = s_ - 1;
        std::sort(order_.begin(), order_.end(), [&](std::size_t x, std::size_t y) { return at(x, L) < at(y, L); });
        candidates_.resize(L);
        for (std::size_t d = 0; d < L; ++d) {
            auto& c = candidates_[d];
            c.reserve(N + 1);
            for (std::size_t n = 0; n < N; ++n) c.push_back(at(n, d));
            c.push_back(D_[d]);
            std::sort(c.begin(), c.end());
            c.erase(std::unique(c.begin(), c.end()), c.end());
        }
    }

    I run() {
        best_ = I(0);
        std::vector<char> open(N_, 1), closed(N_, 1);
        recurse(0, I(1), open, closed, true);
        return best_;
    }

private:
    const I& at(std::size_t n, std::size_t d) const { return a_[n * s_ + d]; }

    void recurse(std::size_t d, const I& P, const std::vector<char>& open, const std::vector<char>& closed,
                 bool closed_valid) {
        if (d + 1 == s_) {
            sweep(P, open, closed, closed_valid);
            return;
        }
        std::vector<char> o(N_), c(N_);
        for (const I& corner : candidates_[d]) {
            for (std::size_t n = 0; n < N_; ++n) {
                const I& x = at(n, d);
                o[n] = static_cast<char>(open[n] && x < corner);
                c[n] = static_cast<char>(closed[n] && !(corner < x));
            }
            recurse(d + 1, P * corner, o, c, closed_valid && corner < D_[d]);
        }
    }

    void sweep(const I& P, const std::vector<char>& open, const std::vector<char>& closed, bool closed_valid) {
        const std::size_t L = s_ - 1;
        const I PN = P * NI_;
        std::size_t open_count = 0, closed_count = 0;
        std::size_t idx = 0;
        bool hit_top = false;
        while (idx < N_) {
            const I& c = at(order_[idx], L);
            if (!(c < D_[L])) hit_top = true;
            // strictly below c
            consider(PN * c - I(static_cast<long>(open_count)) * Dt_);
            std::size_t end = idx;
            while (end < N_ && !(c < at(order_[end], L))) {
                open_count += static_cast<std::size_t>(open[order_[end]]);
                closed_count += static_cast<std::size_t>(closed[order_[end]]);
                ++end;
            }
            if (closed_valid && c < D_[L]) consider(I(static_cast<long>(closed_count)) * Dt_ - PN * c);
            idx = end;
        }
        if (!hit_top) consider(PN * D_[L] - I(static_cast<long>(open_count)) * Dt_);
    }

    void consider(const I& v) {
        if (best_ < v) best_ = v;
    }

    const std::vector<I>& a_;
    const std::vector<I>& D_;
    std::size_t s_;
    std::size_t N_;
    I Dt_;
    I NI_;
    I best_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<I>> candidates_;
};

}  // namespace detail

/// Holds a point set rescaled to integers so that prefix discrepancies can be
/// evaluated repeatedly without re-converting rationals.
class DiscrepancyEvaluator {
public:
    explicit DiscrepancyEvaluator(const PointSet& ps, Limits limits = Limits::from_env())
        : s_(ps.s), N_(ps.size()), limits_(limits) {
        if (N_ == 0) throw Error(ErrorKind::precondition, "star discrepancy of an empty point set");
        if (s_ == 0) throw Error(ErrorKind::precondition, "point set has dimension 0");
        denominators_.assign(s_, Integer(1));
        for (const auto& p : ps.points) {
            if (p.size() != s_) throw Error(ErrorKind::precondition, "point of wrong dimension in point set");
            for (std::size_t d = 0; d < s_; ++d) {
                if (p[d] < 0 || p[d] > 1) throw Error(ErrorKind::precondition, "point coordinate outside [0,1]");
                denominators_[d] = lcm(denominators_[d], p[d].get_den());
            }
        }
        total_denominator_ = 1;
        for (const auto& d : denominators_) total_denominator_ *= d;
        big_.reserve(N_ * s_);
        for (const auto& p : ps.points)
            for (std::size_t d = 0; d < s_; ++d) big_.push_back(p[d].get_num() * (denominators_[d] / p[d].get_den()));
        const Integer bound = total_denominator_ * Integer(static_cast<unsigned long>(N_));
        if (mpz_sizeinbase(bound.get_mpz_t(), 2) <= 61) {
            narrow_.reserve(big_.size());
            for (const auto& x : big_) narrow_.push_back(x.get_si());
            for (const auto& x : denominators_) narrow_den_.push_back(x.get_si());
        } else if (mpz_sizeinbase(bound.get_mpz_t(), 2) <= 125) {
            wide_.reserve(big_.size());
            for (const auto& x : big_) wide_.push_back(detail::to_int128(x));
            for (const auto& x : denominators_) wide_den_.push_back(detail::to_int128(x));
        }
    }

    [[nodiscard]] std::size_t size() const { return N_; }
    [[nodiscard]] std::size_t dimension() const { return s_; }

    /// M * D*_M for the first M points.
    [[nodiscard]] Rational scaled(std::size_t M) const {
        if (M < 1 || M > N_) throw Error(ErrorKind::precondition, "prefix length outside [1, N]");
        check_guardrail(M);
        Integer num;
        if (!narrow_.empty()) num = detail::to_integer(detail::CornerSweep<std::int64_t>(narrow_, narrow_den_, s_, M).run());
        else if (!wide_.empty()) num = detail::to_integer(detail::CornerSweep<detail::int128>(wide_, wide_den_, s_, M).run());
        else num = detail::CornerSweep<Integer>(big_, denominators_, s_, M).run();
        Rational r(num, total_denominator_);
        r.canonicalize();
        return r;
    }

    /// D*_M for the first M points.
    [[nodiscard]] Rational discrepancy(std::size_t M) const {
        Rational r = scaled(M) / Rational(static_cast<long>(M));
        r.canonicalize();
        return r;
    }

    void check_guardrail(std::size_t M) const {
        double cells = static_cast<double>(s_);
        for (std::size_t d = 0; d < s_; ++d) cells *= static_cast<double>(M);
        if (cells > limits_.discrepancy_cells)
            throw Error(ErrorKind::guardrail,
                        "exact discrepancy of " + std::to_string(M) + " points in dimension " + std::to_string(s_) +
                            " needs ~" + std::to_string(static_cast<long double>(cells)) +
                            " corner tests, above the guardrail; use the 1-d formula or raise RB_QMC_GUARDRAIL");
    }

private:
    std::size_t s_;
    std::size_t N_;
    Limits limits_;
    std::vector<Integer> denominators_;
    Integer total_denominator_;
    std::vector<Integer> big_;
    std::vector<std::int64_t> narrow_;
    std::vector<std::int64_t> narrow_den_;
    std::vector<detail::int128> wide_;
    std::vector<detail::int128> wide_den_;
};

inline Rational star_discrepancy(const PointSet& ps, Limits limits = Limits::from_env()) {
    DiscrepancyEvaluator ev(ps, limits);
    return ev.discrepancy(ps.size());
}

/// sup over prefixes 1 <= M <= L of M * D*_M.
inline Rational max_scaled_discrepancy(const PointSet& ps, Limits limits = Limits::from_env()) {
    DiscrepancyEvaluator ev(ps, limits);
    Rational best = 0;
    for (std::size_t M = 1; M <= ps.size(); ++M) best = std::max(best, ev.scaled(M));
    return best;
}

/// Half-open box prod_i [lower_i, upper_i).
struct BoxSpec {
    std::vector<Rational> lower;
    std::vector<Rational> upper;

    BoxSpec() = default;
    BoxSpec(std::vector<Rational> lo, std::vector<Rational> hi) : lower(std::move(lo)), upper(std::move(hi)) {
        if (lower.size() != upper.size()) throw Error(ErrorKind::precondition, "box bounds of different dimension");
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (!(0 <= lower[i] && lower[i] < upper[i] && upper[i] <= 1))
                throw Error(ErrorKind::precondition, "box side must satisfy 0 <= l < r <= 1");
    }

    [[nodiscard]] std::size_t dimension() const { return lower.size(); }

    [[nodiscard]] Rational volume() const {
        Rational v = 1;
        for (std::size_t i = 0; i < lower.size(); ++i) v *= upper[i] - lower[i];
        v.canonicalize();
        return v;
    }

    [[nodiscard]] bool contains(const std::vector<Rational>& x) const {
        for (std::size_t i = 0; i < lower.size(); ++i)
            if (x[i] < lower[i] || !(x[i] < upper[i])) return false;
        return true;
    }
};

struct LocalDiscrepancySum {
    Integer window_begin;
    std::size_t length = 0;  ///< M
    Rational value;          ///< sum over the window of (indicator - volume)
};

struct BoxCount {
    std::size_t count = 0;
    LocalDiscrepancySum sum;
};

/// Counts points with absolute indices in [n_a, n_b) that fall in `box`.
inline BoxCount box_count(const PointSet& ps, const BoxSpec& box, const Integer& n_a, const Integer& n_b) {
    if (box.dimension() != ps.s) throw Error(ErrorKind::precondition, "box dimension does not match point set");
    const Integer end = ps.start_index + Integer(static_cast<unsigned long>(ps.size()));
    if (n_a > n_b || n_a < ps.start_index || n_b > end)
        throw Error(ErrorKind::precondition, "window [" + n_a.get_str() + ", " + n_b.get_str() +
                                                 ") not inside the point set's index range");
    const std::size_t first = Integer(n_a - ps.start_index).get_ui();
    const std::size_t last = Integer(n_b - ps.start_index).get_ui();
    BoxCount out;
    for (std::size_t k = first; k < last; ++k)
        if (box.contains(ps.points[k])) ++out.count;
    out.sum.window_begin = n_a;
    out.sum.length = last - first;
    out.sum.value = Rational(static_cast<long>(out.count)) - Rational(static_cast<long>(out.sum.length)) * box.volume();
    out.sum.value.canonicalize();
    return out;
}

}  // namespace rbhalton
