#pragma once

// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the closed forms under test.

#include "rbhalton/rbhalton.hpp"

#include <algorithm>
#include <random>
#include <set>
#include <vector>

namespace oracle {

using rbhalton::Integer;
using rbhalton::Rational;

/// Classic base-u radical inverse by repeated division.
inline Rational van_der_corput(long n, long u) {
    Rational x = 0;
    Rational scale(1, u);
    while (n > 0) {
        x += Rational(n % u) * scale;
        n /= u;
        scale /= u;
    }
    x.canonicalize();
    return x;
}

/// One step of the u/v recurrence done by trial: the unique a in [0,u) with u | v z - a.
inline std::vector<int> digits_by_trial(long z, long u, long v, std::size_t count) {
    std::vector<int> out;
    for (std::size_t r = 0; r < count; ++r) {
        for (int a = 0; a < u; ++a) {
            const long num = v * z - a;
            if (((num % u) + u) % u == 0) {
                out.push_back(a);
                z = num / u;
                break;
            }
        }
    }
    return out;
}

/// Local discrepancy |A([0,y))/N - vol([0,y))| with exact rationals.
inline Rational local_discrepancy(const std::vector<std::vector<Rational>>& pts, const std::vector<Rational>& y) {
    std::size_t inside = 0;
    for (const auto& p : pts) {
        bool in = true;
        for (std::size_t d = 0; d < y.size() && in; ++d) in = p[d] < y[d];
        if (in) ++inside;
    }
    Rational vol = 1;
    for (const auto& c : y) vol *= c;
    Rational diff = rbhalton::make_rational(static_cast<long>(inside), static_cast<long>(pts.size())) - vol;
    return diff < 0 ? Rational(-diff) : diff;
}

/// Sup of the local discrepancy over y in {c, c + eps}^s with c ranging over the
/// point coordinates and 1, clamped to (0, 1]. As eps -> 0 this tends to D*_N.
inline Rational grid_epsilon_discrepancy(const std::vector<std::vector<Rational>>& pts, std::size_t s, const Rational& eps) {
    std::vector<std::vector<Rational>> cand(s);
    for (std::size_t d = 0; d < s; ++d) {
        std::set<Rational> vals{Rational(1)};
        for (const auto& p : pts) {
            if (p[d] > 0) vals.insert(p[d]);
            Rational up = p[d] + eps;
            vals.insert(up < 1 ? up : Rational(1));
        }
        cand[d].assign(vals.begin(), vals.end());
    }
    Rational best = 0;
    std::vector<std::size_t> idx(s, 0);
    while (true) {
        std::vector<Rational> y(s);
        for (std::size_t d = 0; d < s; ++d) y[d] = cand[d][idx[d]];
        best = std::max(best, local_discrepancy(pts, y));
        std::size_t d = 0;
        while (d < s && ++idx[d] == cand[d].size()) idx[d++] = 0;
        if (d == s) break;
    }
    return best;
}

/// Largest local discrepancy over the regular grid {1/G, ..., G/G}^s; a lower bound on D*_N.
inline Rational dense_grid_discrepancy(const std::vector<std::vector<Rational>>& pts, std::size_t s, long G) {
    Rational best = 0;
    std::vector<long> idx(s, 1);
    while (true) {
        std::vector<Rational> y(s);
        for (std::size_t d = 0; d < s; ++d) y[d] = Rational(idx[d], G);
        best = std::max(best, local_discrepancy(pts, y));
        std::size_t d = 0;
        while (d < s && ++idx[d] > G) idx[d++] = 1;
        if (d == s) break;
    }
    return best;
}

/// Random point with coordinates p/q, q in [1, max_den], p in [0, q].
inline std::vector<Rational> random_point(std::mt19937_64& rng, std::size_t s, long max_den, bool allow_one = false) {
    std::vector<Rational> x(s);
    for (auto& c : x) {
        long q = std::uniform_int_distribution<long>(1, max_den)(rng);
        long p = std::uniform_int_distribution<long>(0, allow_one ? q : q - 1)(rng);
        c = Rational(p, q);
        c.canonicalize();
    }
    return x;
}

inline rbhalton::PointSet make_point_set(std::vector<std::vector<Rational>> pts) {
    rbhalton::PointSet ps;
    ps.t = 0;
    ps.s = pts.empty() ? 0 : pts.front().size();
    ps.points = std::move(pts);
    return ps;
}

/// Indices n in [0, count) whose truncated coordinate i lies in [lo, lo + width).
inline std::vector<long> scan_interval(const rbhalton::GeneratorConfig& cfg, std::size_t i, std::size_t t, const Rational& lo,
                                       const Rational& width, long count) {
    std::vector<long> hits;
    for (long n = 0; n < count; ++n) {
        const Rational x = rbhalton::radical_inverse_truncated(Integer(n), cfg.bases[i], cfg.specs[i], t);
        if (lo <= x && x < lo + width) hits.push_back(n);
    }
    return hits;
}

/// Random valid config: pairwise coprime u, v coprime to u, random periodic permutations.
inline rbhalton::GeneratorConfig random_config(std::mt19937_64& rng, std::size_t s) {
    static const std::vector<long> us = {2, 3, 5, 7};
    std::vector<long> pool = us;
    std::shuffle(pool.begin(), pool.end(), rng);
    rbhalton::GeneratorConfig cfg;
    for (std::size_t i = 0; i < s; ++i) {
        const long u = pool[i];
        long v;
        do v = std::uniform_int_distribution<long>(1, 6)(rng);
        while (std::gcd(u, v) != 1);
        cfg.bases.emplace_back(u, v);
        std::vector<rbhalton::Permutation> period;
        const int len = std::uniform_int_distribution<int>(1, 3)(rng);
        for (int q = 0; q < len; ++q) {
            std::vector<int> tab(static_cast<std::size_t>(u));
            for (int d = 0; d < u; ++d) tab[static_cast<std::size_t>(d)] = d;
            std::shuffle(tab.begin(), tab.end(), rng);
            period.emplace_back(tab);
        }
        cfg.specs.emplace_back(static_cast<int>(u), std::vector<rbhalton::Permutation>{}, period);
    }
    return cfg;
}

}  // namespace oracle
