#pragma once

// Lower-bound witness for generalized Halton sequences in rational bases.
//
// Given pairwise coprime u_i, the construction picks levels k_{i,1} < ... <
// k_{i,m} (multiples of tau_i carrying a common neighbour offset b_i), builds
// the anchored box [0, y) with y_i = sum_j u_i^{-k_{i,j}}, splits it into the
// m^s boxes B(j), and averages the signed local discrepancy over windows of
// length M = 1..Ubar_m starting at w_m. That average alpha_m has the closed
// form sum_j (1/2 - A_j/Ubar_j - 1/(2 Ubar_j)), where A_j is a CRT residue;
// everything here is exact.

#include "rbhalton/congruence.hpp"
#include "rbhalton/discrepancy.hpp"

#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace rbhalton {

/// How the levels k_{i,j} are chosen.
struct WitnessMode {
    enum class Kind { automatic, level, manual };

    Kind kind = Kind::manual;
    std::optional<Integer> N;                                   ///< automatic (required) or manual (optional)
    std::optional<std::size_t> T;                               ///< level mode
    std::optional<std::size_t> m;                               ///< manual mode
    std::optional<std::vector<std::vector<std::size_t>>> ksets; ///< manual mode, explicit levels
    std::optional<std::vector<int>> b_override;                 ///< replaces the max-count choice of b_i
    bool override_tau = false;  ///< accept k-sets violating tau | k or constant e
    std::size_t slack = 2;      ///< t = max k + slack in manual/level mode
    double max_terms = 1e6;     ///< automatic mode falls back to manual when m^s exceeds this

    static WitnessMode automatic(Integer N) {
        WitnessMode w;
        w.kind = Kind::automatic;
        w.N = std::move(N);
        return w;
    }
    static WitnessMode from_level(std::size_t T) {
        WitnessMode w;
        w.kind = Kind::level;
        w.T = T;
        return w;
    }
    static WitnessMode manual(std::size_t m) {
        WitnessMode w;
        w.kind = Kind::manual;
        w.m = m;
        return w;
    }
    static WitnessMode manual(std::vector<std::vector<std::size_t>> ksets) {
        WitnessMode w;
        w.kind = Kind::manual;
        w.m = ksets.empty() ? 0 : ksets.front().size();
        w.ksets = std::move(ksets);
        return w;
    }
};

/// The admissibility bound N > u0^E with E = 4 s u0^{s+1} prod u_i.
struct ThresholdInfo {
    Integer exponent;
    double log10_value = 0;
    std::optional<bool> n_exceeds;  ///< set when N is known
};

struct WitnessParams {
    GeneratorConfig config;
    WitnessMode::Kind mode = WitnessMode::Kind::manual;
    bool fell_back_to_manual = false;
    std::optional<Integer> N;
    std::optional<std::size_t> T;

    std::vector<Integer> u_tilde;      ///< prod_{j != i} u_j
    std::vector<std::size_t> alpha;    ///< order of v_i mod u_i
    std::vector<std::size_t> beta;     ///< order of u_i mod u_tilde_i
    std::vector<std::size_t> tau;      ///< lcm(alpha_i, beta_i)
    std::size_t tau0 = 0;
    std::int64_t u0 = 0;

    std::vector<std::vector<int>> e_table;                  ///< e[i][r-1], r = 1..depth
    std::vector<std::vector<std::vector<std::size_t>>> L;   ///< L[i][b] for b in 0..u_i-1 (b = 0 empty)
    std::vector<int> b;                                     ///< chosen b_i
    std::size_t m = 0;
    std::vector<std::vector<std::size_t>> ksets;            ///< k_{i,1} < ... < k_{i,m}
    std::size_t t = 1;
    bool tau_conditions_hold = true;

    ThresholdInfo threshold;

    [[nodiscard]] std::size_t dimension() const { return config.dimension(); }
    [[nodiscard]] std::size_t k(std::size_t i, std::size_t j) const { return ksets[i][j]; }  ///< j 0-based
};

namespace detail {

inline std::size_t multiplicative_order(const Integer& a, const Integer& modulus, const Integer& search_limit) {
    if (modulus == 1) return 1;
    Integer p = mod_floor(a, modulus);
    for (std::size_t k = 1; Integer(static_cast<unsigned long>(k)) <= search_limit; ++k) {
        if (p == 1) return k;
        p = mod_floor(p * a, modulus);
    }
    throw Error(ErrorKind::bad_config, "no k <= " + search_limit.get_str() + " with " + a.get_str() + "^k = 1 mod " +
                                           modulus.get_str());
}

inline int neighbour_offset(const Permutation& sigma, std::int64_t u) {
    std::int64_t e = (sigma.inverse(0) - sigma.inverse(1)) % u;
    if (e < 0) e += u;
    return static_cast<int>(e);
}

inline void fill_e_table(WitnessParams& p, std::size_t depth) {
    const auto s = p.dimension();
    p.e_table.assign(s, {});
    for (std::size_t i = 0; i < s; ++i) {
        p.e_table[i].reserve(depth);
        for (std::size_t r = 1; r <= depth; ++r)
            p.e_table[i].push_back(neighbour_offset(p.config.specs[i].at(r), p.config.bases[i].u));
    }
}

inline void fill_L_sets(WitnessParams& p, std::size_t T) {
    const auto s = p.dimension();
    p.L.assign(s, {});
    for (std::size_t i = 0; i < s; ++i) {
        p.L[i].assign(static_cast<std::size_t>(p.config.bases[i].u), {});
        for (std::size_t r = p.tau[i]; r <= T; r += p.tau[i]) p.L[i][p.e_table[i][r - 1]].push_back(r);
    }
}

/// b_i^(T): the offset with the largest L-set, smallest on ties (or the override).
inline void choose_b(WitnessParams& p, const std::optional<std::vector<int>>& b_override) {
    const auto s = p.dimension();
    p.b.assign(s, 0);
    for (std::size_t i = 0; i < s; ++i) {
        if (b_override) {
            p.b[i] = (*b_override)[i];
            continue;
        }
        std::size_t best = 0;
        for (int b = 1; b < p.config.bases[i].u; ++b)
            if (p.L[i][b].size() > best) {
                best = p.L[i][b].size();
                p.b[i] = b;
            }
        if (p.b[i] == 0) p.b[i] = 1;
    }
}

inline std::size_t min_L_size(const WitnessParams& p) {
    std::size_t m = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < p.dimension(); ++i) m = std::min(m, p.L[i][p.b[i]].size());
    return m;
}

inline void take_smallest(WitnessParams& p) {
    p.ksets.assign(p.dimension(), {});
    for (std::size_t i = 0; i < p.dimension(); ++i)
        p.ksets[i].assign(p.L[i][p.b[i]].begin(), p.L[i][p.b[i]].begin() + static_cast<std::ptrdiff_t>(p.m));
}

/// Largest T with u0^{(T+1)s} <= N, i.e. floor(log_{u0}(N)/s - 1); negative values clamp to 0.
inline std::size_t level_from_N(const Integer& N, std::int64_t u0, std::size_t s) {
    if (N < 1) return 0;
    double guess = std::floor(log_integer(N) / std::log(static_cast<double>(u0)) / static_cast<double>(s) - 1.0);
    long T = std::max(0L, static_cast<long>(guess) - 1);
    auto fits = [&](long cand) { return ipow(u0, static_cast<unsigned long>((cand + 1) * static_cast<long>(s))) <= N; };
    while (T > 0 && !fits(T)) --T;
    if (!fits(T)) return 0;
    while (fits(T + 1)) ++T;
    return static_cast<std::size_t>(T);
}

inline ThresholdInfo threshold_info(const GeneratorConfig& config, std::int64_t u0, const std::optional<Integer>& N) {
    const auto s = config.dimension();
    ThresholdInfo th;
    th.exponent = Integer(4 * static_cast<long>(s)) * ipow(u0, s + 1) * config.product_u();
    th.log10_value = th.exponent.get_d() * std::log10(static_cast<double>(u0));
    if (N) {
        if (*N <= 0) {
            th.n_exceeds = false;
        } else {
            const double logN = log_integer(*N) / std::log(10.0);
            if (logN < th.log10_value - 1) th.n_exceeds = false;
            else if (logN > th.log10_value + 1) th.n_exceeds = true;
            else th.n_exceeds = *N > ipow(u0, th.exponent.get_ui());
        }
    }
    return th;
}

}  // namespace detail

/// Derives tau_i, the e-table, the L-sets, b_i, m, the k-sets and t.
inline WitnessParams derive_params(const GeneratorConfig& config, const WitnessMode& mode) {
    require_valid(config);
    const auto s = config.dimension();
    if (s < 2) throw Error(ErrorKind::precondition, "the witness construction needs s >= 2");
    if (mode.b_override) {
        if (mode.b_override->size() != s) throw Error(ErrorKind::bad_config, "b override needs one entry per coordinate");
        for (std::size_t i = 0; i < s; ++i)
            if ((*mode.b_override)[i] < 1 || (*mode.b_override)[i] >= config.bases[i].u)
                throw Error(ErrorKind::bad_config, "b override entries must lie in {1,...,u_i-1}");
    }

    WitnessParams p;
    p.config = config;
    p.mode = mode.kind;
    p.N = mode.N;
    const Integer U = config.product_u();
    p.u0 = 0;
    for (std::size_t i = 0; i < s; ++i) {
        const auto& b = config.bases[i];
        p.u0 = std::max(p.u0, b.u);
        p.u_tilde.push_back(U / b.u);
        p.alpha.push_back(detail::multiplicative_order(Integer(b.v), Integer(b.u), Integer(b.u)));
        p.beta.push_back(detail::multiplicative_order(Integer(b.u), p.u_tilde.back(), p.u_tilde.back()));
        p.tau.push_back(std::lcm(p.alpha.back(), p.beta.back()));
        p.tau0 = std::max(p.tau0, p.tau.back());
    }
    p.threshold = detail::threshold_info(config, p.u0, p.N);

    auto derive_from_level = [&](std::size_t T) {
        p.T = T;
        detail::fill_e_table(p, T);
        detail::fill_L_sets(p, T);
        detail::choose_b(p, mode.b_override);
        p.m = detail::min_L_size(p);
        if (p.m == 0)
            throw Error(ErrorKind::bad_config, "m = 0 at level T=" + std::to_string(T) + ": T too small for tau=" +
                                                   std::to_string(p.tau0));
        detail::take_smallest(p);
    };

    // Smallest T at which every coordinate has an L-set of size >= m.
    auto derive_for_m = [&](std::size_t m) {
        if (m == 0) throw Error(ErrorKind::bad_config, "manual mode needs m >= 1");
        std::size_t period = 1;
        for (const auto& sp : config.specs) period = std::max(period, sp.preperiod().size() + sp.period().size());
        const std::size_t cap = (m + 1) * p.tau0 * static_cast<std::size_t>(p.u0) * (period + 1) * 4;
        std::size_t T = m * p.tau0;
        detail::fill_e_table(p, cap);
        for (; T <= cap; ++T) {
            detail::fill_L_sets(p, T);
            detail::choose_b(p, mode.b_override);
            if (detail::min_L_size(p) >= m) break;
        }
        if (T > cap) throw Error(ErrorKind::bad_config, "no level T <= " + std::to_string(cap) + " yields m=" + std::to_string(m));
        p.T = T;
        p.e_table.clear();
        detail::fill_e_table(p, T);
        p.m = m;
        detail::take_smallest(p);
    };

    switch (mode.kind) {
        case WitnessMode::Kind::automatic: {
            if (!mode.N) throw Error(ErrorKind::precondition, "automatic mode needs N");
            const std::size_t T = detail::level_from_N(*mode.N, p.u0, s);
            derive_from_level(T);
            if (std::pow(static_cast<double>(p.m), static_cast<double>(s)) > mode.max_terms) {
                // Too many boxes for the closed form: fall back to the smallest m where the bound applies.
                p.fell_back_to_manual = true;
                derive_for_m(static_cast<std::size_t>(2 * U.get_ui()));
            }
            p.t = default_truncation(config, *mode.N);
            break;
        }
        case WitnessMode::Kind::level:
            if (!mode.T) throw Error(ErrorKind::precondition, "level mode needs T");
            derive_from_level(*mode.T);
            p.t = 0;
            break;
        case WitnessMode::Kind::manual: {
            if (mode.ksets) {
                const auto& ks = *mode.ksets;
                if (ks.size() != s) throw Error(ErrorKind::bad_config, "need one k-set per coordinate");
                p.m = ks.front().size();
                if (mode.m && *mode.m != p.m) throw Error(ErrorKind::bad_config, "m does not match the k-set sizes");
                if (p.m == 0) throw Error(ErrorKind::bad_config, "k-sets must be nonempty");
                std::size_t depth = 0;
                for (std::size_t i = 0; i < s; ++i) {
                    if (ks[i].size() != p.m) throw Error(ErrorKind::bad_config, "all k-sets need the same size m");
                    for (std::size_t j = 0; j < p.m; ++j) {
                        if (ks[i][j] < 1 || (j > 0 && ks[i][j] <= ks[i][j - 1]))
                            throw Error(ErrorKind::bad_config, "k-set " + std::to_string(i + 1) +
                                                                   " must be strictly increasing positive levels");
                    }
                    depth = std::max(depth, ks[i].back());
                }
                p.ksets = ks;
                p.T = depth;
                detail::fill_e_table(p, depth);
                detail::fill_L_sets(p, depth);
                p.b.assign(s, 0);
                std::vector<std::string> violations;
                for (std::size_t i = 0; i < s; ++i) {
                    p.b[i] = mode.b_override ? (*mode.b_override)[i] : p.e_table[i][ks[i].front() - 1];
                    for (auto kk : ks[i]) {
                        if (kk % p.tau[i] != 0)
                            violations.push_back("tau_" + std::to_string(i + 1) + "=" + std::to_string(p.tau[i]) +
                                                 " does not divide k=" + std::to_string(kk));
                        if (p.e_table[i][kk - 1] != p.b[i])
                            violations.push_back("e_{" + std::to_string(i + 1) + "," + std::to_string(kk) +
                                                 "} != b_" + std::to_string(i + 1));
                    }
                }
                if (!violations.empty()) {
                    if (!mode.override_tau) {
                        std::string msg;
                        for (const auto& v : violations) msg += (msg.empty() ? "" : "; ") + v;
                        throw Error(ErrorKind::bad_config, "k-sets violate the level conditions: " + msg);
                    }
                    p.tau_conditions_hold = false;
                }
            } else {
                if (!mode.m) throw Error(ErrorKind::precondition, "manual mode needs m or explicit k-sets");
                derive_for_m(*mode.m);
            }
            p.t = 0;
            break;
        }
    }
    std::size_t max_k = 0;
    for (const auto& ks : p.ksets) max_k = std::max(max_k, ks.back());
    if (p.t == 0) {
        p.t = max_k + mode.slack;
        if (p.N) p.t = std::max(p.t, default_truncation(config, *p.N));
    }
    if (p.t < max_k) p.t = max_k;
    if (mode.kind != WitnessMode::Kind::automatic && mode.N) p.N = mode.N;
    return p;
}

/// The anchored box [0, y) and its partition into the boxes B(j).
class BoxSystem {
public:
    explicit BoxSystem(const WitnessParams& p) : s_(p.dimension()), m_(p.m) {
        cuts_.assign(s_, {});
        for (std::size_t i = 0; i < s_; ++i) {
            Rational acc = 0;
            cuts_[i].push_back(acc);
            for (std::size_t j = 0; j < m_; ++j) {
                acc += Rational(Integer(1), ipow(p.config.bases[i].u, p.k(i, j)));
                acc.canonicalize();
                cuts_[i].push_back(acc);
            }
            y_.push_back(acc);
        }
    }

    [[nodiscard]] const std::vector<Rational>& y() const { return y_; }
    [[nodiscard]] std::size_t m() const { return m_; }
    /// Partial sums 0 = c_0 < c_1 < ... < c_m = y_i.
    [[nodiscard]] const std::vector<Rational>& cuts(std::size_t i) const { return cuts_[i]; }

    /// B(j) for a 0-based multi-index.
    [[nodiscard]] BoxSpec box(const std::vector<std::size_t>& j) const {
        std::vector<Rational> lo, hi;
        for (std::size_t i = 0; i < s_; ++i) {
            lo.push_back(cuts_[i][j[i]]);
            hi.push_back(cuts_[i][j[i] + 1]);
        }
        return BoxSpec(std::move(lo), std::move(hi));
    }

    [[nodiscard]] BoxSpec anchored_box() const { return BoxSpec(std::vector<Rational>(s_, Rational(0)), y_); }

    /// Multi-index of the B(j) containing x, if any.
    [[nodiscard]] std::optional<std::vector<std::size_t>> locate(const std::vector<Rational>& x) const {
        std::vector<std::size_t> j(s_);
        for (std::size_t i = 0; i < s_; ++i) {
            if (!(x[i] < y_[i])) return std::nullopt;
            auto it = std::upper_bound(cuts_[i].begin(), cuts_[i].end(), x[i]);
            j[i] = static_cast<std::size_t>(it - cuts_[i].begin()) - 1;
        }
        return j;
    }

    [[nodiscard]] std::size_t flat(const std::vector<std::size_t>& j) const {
        std::size_t f = 0;
        for (auto x : j) f = f * m_ + x;
        return f;
    }

    /// Sum of the B(j) volumes equals prod y_i.
    [[nodiscard]] bool partitions_anchored_box() const {
        Rational total = 0;
        std::vector<std::size_t> j(s_, 0);
        do {
            total += box(j).volume();
        } while (advance(j));
        Rational vol = 1;
        for (const auto& y : y_) vol *= y;
        return total == vol;
    }

    /// Lexicographic successor in [0, m)^s; false after the last index.
    [[nodiscard]] bool advance(std::vector<std::size_t>& j) const {
        for (std::size_t i = s_; i-- > 0;) {
            if (++j[i] < m_) return true;
            j[i] = 0;
        }
        return false;
    }

private:
    std::size_t s_;
    std::size_t m_;
    std::vector<Rational> y_;
    std::vector<std::vector<Rational>> cuts_;
};

inline BoxSystem build_box_system(const WitnessParams& p) { return BoxSystem(p); }

/// Ubar_j = prod_i u_i^{k_{i,j_i}} for a 0-based multi-index.
inline Integer ubar(const WitnessParams& p, const std::vector<std::size_t>& j) {
    Integer U = 1;
    for (std::size_t i = 0; i < p.dimension(); ++i) U *= ipow(p.config.bases[i].u, p.k(i, j[i]));
    return U;
}

inline Integer ubar_m(const WitnessParams& p) { return ubar(p, std::vector<std::size_t>(p.dimension(), p.m - 1)); }

/// Digit prefix of y_i up to level k_{i,m}: ones exactly at the chosen levels.
inline BoxDigits y_prefix_digits(const WitnessParams& p) {
    std::vector<std::vector<int>> digits(p.dimension());
    for (std::size_t i = 0; i < p.dimension(); ++i) {
        digits[i].assign(p.ksets[i].back(), 0);
        for (auto k : p.ksets[i]) digits[i][k - 1] = 1;
    }
    return BoxDigits(std::move(digits));
}

/// w_m: the index in [0, Ubar_m) whose truncated point lies in prod [y_i, y_i + u_i^{-k_{i,m}}).
inline Integer find_w_m(const WitnessParams& p) { return ddot_y(y_prefix_digits(p), p.config); }

/// Linear-scan counterpart of find_w_m.
inline std::optional<Integer> find_w_m_scan(const WitnessParams& p, double limit) {
    const Integer U = ubar_m(p);
    if (U.get_d() > limit) return std::nullopt;
    HaltonGenerator gen(p.config, p.t);
    const BoxSystem boxes(p);
    std::vector<Rational> hi;
    for (std::size_t i = 0; i < p.dimension(); ++i)
        hi.push_back(boxes.y()[i] + Rational(Integer(1), ipow(p.config.bases[i].u, p.ksets[i].back())));
    for (Integer n = 0; n < U; ++n) {
        auto x = gen.point(n);
        bool inside = true;
        for (std::size_t i = 0; i < p.dimension() && inside; ++i) inside = boxes.y()[i] <= x[i] && x[i] < hi[i];
        if (inside) return n;
    }
    return std::nullopt;
}

/// Cached per-coordinate inverses for repeated A_j evaluation.
class ResidueTable {
public:
    explicit ResidueTable(const WitnessParams& p) : p_(p) {
        for (std::size_t i = 0; i < p.dimension(); ++i) {
            const auto& base = p.config.bases[i];
            vbar_m_.push_back(mod_inverse(Integer(base.v), ipow(base.u, p.ksets[i].back())));
        }
    }

    /// vbar_{i,m}: inverse of v_i mod u_i^{k_{i,m}}.
    [[nodiscard]] const Integer& vbar_m(std::size_t i) const { return vbar_m_[i]; }

    /// Mbar_{i,j} = M_{i,(k_{1,j_1},...,k_{s,j_s})}.
    [[nodiscard]] Integer mbar(std::size_t i, const std::vector<std::size_t>& j) const {
        std::vector<std::size_t> kv(p_.dimension());
        for (std::size_t l = 0; l < p_.dimension(); ++l) kv[l] = p_.k(l, j[l]);
        return crt_multiplier(p_.config, kv, i);
    }

    /// A_j = sum_i Mbar_{i,j} (Ubar_j/u_i) b_i vbar_{i,m}^{k_{i,j_i}} mod Ubar_j, with b_i = e_{i,k_{i,j_i}}.
    [[nodiscard]] Integer A(const std::vector<std::size_t>& j) const {
        const Integer U = ubar(p_, j);
        Integer acc = 0;
        for (std::size_t i = 0; i < p_.dimension(); ++i) {
            const auto& base = p_.config.bases[i];
            const std::size_t k = p_.k(i, j[i]);
            const int b = p_.e_table[i][k - 1];
            const Integer vpow = powmod(vbar_m_[i], Integer(static_cast<unsigned long>(k)), ipow(base.u, p_.ksets[i].back()));
            acc += mbar(i, j) * (U / base.u) * b * vpow;
        }
        return mod_floor(acc, U);
    }

private:
    const WitnessParams& p_;
    std::vector<Integer> vbar_m_;
};

inline Integer compute_A(const WitnessParams& p, const std::vector<std::size_t>& j) { return ResidueTable(p).A(j); }

/// sum_j (1/2 - A_j/Ubar_j - 1/(2 Ubar_j)) over all m^s multi-indices.
inline Rational alpha_m_closed(const WitnessParams& p) {
    const ResidueTable table(p);
    const BoxSystem boxes(p);
    Rational alpha = 0;
    std::vector<std::size_t> j(p.dimension(), 0);
    do {
        const Integer U = ubar(p, j);
        alpha += Rational(1, 2) - make_rational(table.A(j), U) - Rational(Integer(1), 2 * U);
    } while (boxes.advance(j));
    alpha.canonicalize();
    return alpha;
}

struct BruteForceAlpha {
    Rational alpha;
    std::vector<Rational> per_box_average;             ///< (1/Ubar_m) sum_M Sigma_{j,M}, flat index
    std::vector<std::vector<std::size_t>> offsets;     ///< window offsets landing in each B(j)
    bool aligned_windows_vanish = true;                ///< Sigma_{j, M1*Ubar_j} = 0 for every j, M1
};

/// Averages Sigma_M over M = 1..Ubar_m by counting the actual truncated points
/// x_{w_m}, ..., x_{w_m + Ubar_m - 1} in each B(j).
inline BruteForceAlpha alpha_m_bruteforce(const WitnessParams& p, const Integer& w_m, Limits limits = Limits::from_env()) {
    const Integer Um = ubar_m(p);
    if (Um.get_d() > limits.enumeration)
        throw Error(ErrorKind::guardrail, "Ubar_m=" + Um.get_str() + " exceeds the enumeration threshold");
    const std::size_t U = Um.get_ui();
    const BoxSystem boxes(p);
    const HaltonGenerator gen(p.config, p.t);
    std::size_t nboxes = 1;
    for (std::size_t i = 0; i < p.dimension(); ++i) nboxes *= p.m;

    BruteForceAlpha out;
    out.offsets.assign(nboxes, {});
    std::vector<Rational> inv_ubar(nboxes);
    Rational inv_sum = 0;
    {
        std::vector<std::size_t> j(p.dimension(), 0);
        do {
            inv_ubar[boxes.flat(j)] = Rational(Integer(1), ubar(p, j));
            inv_sum += inv_ubar[boxes.flat(j)];
        } while (boxes.advance(j));
    }

    // Sigma_M = (#window points in [0,y) among the first M) - M * sum_j 1/Ubar_j.
    Integer count_sum = 0;
    std::size_t inside = 0;
    Integer n = w_m;
    for (std::size_t q = 0; q < U; ++q, ++n) {
        if (auto j = boxes.locate(gen.point(n))) {
            out.offsets[boxes.flat(*j)].push_back(q);
            ++inside;
        }
        count_sum += static_cast<unsigned long>(inside);
    }
    const Integer tri = Um * (Um + 1) / 2;
    out.alpha = (Rational(count_sum) - Rational(tri) * inv_sum) / Rational(Um);
    out.alpha.canonicalize();

    out.per_box_average.assign(nboxes, 0);
    for (std::size_t f = 0; f < nboxes; ++f) {
        Integer S = 0;  // sum_M count_j(M) = sum over offsets q of (U - q)
        for (auto q : out.offsets[f]) S += static_cast<unsigned long>(U - q);
        out.per_box_average[f] = (Rational(S) - Rational(tri) * inv_ubar[f]) / Rational(Um);
        out.per_box_average[f].canonicalize();

        const Integer Uj = inv_ubar[f].get_den();
        const std::size_t blocks = Integer(Um / Uj).get_ui();
        const std::size_t uj = Uj.get_ui();
        if (out.offsets[f].size() != blocks) out.aligned_windows_vanish = false;
        for (std::size_t c = 0; c < out.offsets[f].size() && out.aligned_windows_vanish; ++c)
            if (out.offsets[f][c] / uj != c) out.aligned_windows_vanish = false;
    }
    return out;
}

inline BruteForceAlpha alpha_m_bruteforce(const WitnessParams& p, Limits limits = Limits::from_env()) {
    return alpha_m_bruteforce(p, find_w_m(p), limits);
}

enum class Status { pass, fail, not_applicable };

inline const char* to_string(Status s) {
    switch (s) {
        case Status::pass: return "pass";
        case Status::fail: return "fail";
        default: return "not_applicable";
    }
}

struct Verdict {
    std::string name;
    std::string inequality;
    Status status = Status::not_applicable;
    std::string detail;
};

struct ATableEntry {
    std::vector<std::size_t> j;  ///< 1-based
    Integer ubar;
    Integer A;
};

struct WitnessReport {
    WitnessParams params;
    std::vector<Rational> y;
    Integer ubar_m;
    Integer w_m;
    std::optional<Integer> w_m_scan;
    std::vector<Integer> vbar_m;
    std::vector<ATableEntry> a_table;  ///< omitted beyond report_table_limit entries
    bool a_table_truncated = false;
    std::optional<Integer> c;          ///< A_j/Ubar_j = c/(u_1...u_s) mod 1 when constant
    Rational alpha_m;
    std::optional<Rational> alpha_m_bruteforce;
    Rational bound_rhs;                ///< m^s / (4 u_1...u_s)
    double C = 0;
    std::optional<double> C_log_s_N;
    std::optional<Rational> sup_window_discrepancy;  ///< sup_{M<=Ubar_m} M D*_M of the window at w_m
    std::optional<Rational> sup_prefix_discrepancy;  ///< sup_{M<=2 Ubar_m} M D*_M from n=0
    std::vector<Verdict> verdicts;

    [[nodiscard]] bool all_passed() const {
        return std::none_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.status == Status::fail; });
    }
};

struct VerifyOptions {
    Limits limits = Limits::from_env();
    bool check_discrepancy = false;  ///< compute the exact-discrepancy end of the chain (tiny configs only)
    std::size_t report_table_limit = 4096;
};

/// C = 1 / (2^{s+2} s^s u_1...u_s u0^{s^2+s} log^s u0)
inline double bound_constant(const WitnessParams& p) {
    const double s = static_cast<double>(p.dimension());
    const double logu0 = std::log(static_cast<double>(p.u0));
    double denom = std::pow(2.0, s + 2) * std::pow(s, s) * p.config.product_u().get_d() *
                   std::pow(static_cast<double>(p.u0), s * s + s) * std::pow(logu0, s);
    return 1.0 / denom;
}

inline WitnessReport verify_bound(const WitnessParams& p, const VerifyOptions& opt = {}) {
    const auto s = p.dimension();
    WitnessReport r;
    r.params = p;
    const BoxSystem boxes(p);
    const ResidueTable table(p);
    const Integer Uprod = p.config.product_u();
    r.y = boxes.y();
    r.ubar_m = ubar_m(p);
    r.w_m = find_w_m(p);
    for (std::size_t i = 0; i < s; ++i) r.vbar_m.push_back(table.vbar_m(i));
    const bool enumerable = r.ubar_m.get_d() <= opt.limits.enumeration;
    auto add = [&](std::string name, std::string ineq, Status st, std::string detail = {}) {
        r.verdicts.push_back({std::move(name), std::move(ineq), st, std::move(detail)});
    };
    auto pf = [](bool ok) { return ok ? Status::pass : Status::fail; };

    // A table, alpha_m and the constant-c structure in one pass.
    std::size_t nboxes = 1;
    for (std::size_t i = 0; i < s; ++i) nboxes *= p.m;
    std::vector<Integer> A_flat(nboxes);
    r.alpha_m = 0;
    bool c_constant = true;
    bool tau_consequences = true;
    std::optional<Integer> c;
    std::vector<std::size_t> j(s, 0);
    do {
        const Integer U = ubar(p, j);
        const Integer A = table.A(j);
        A_flat[boxes.flat(j)] = A;
        r.alpha_m += Rational(1, 2) - make_rational(A, U) - Rational(Integer(1), 2 * U);
        if (r.a_table.size() < opt.report_table_limit) {
            ATableEntry e;
            for (auto x : j) e.j.push_back(x + 1);
            e.ubar = U;
            e.A = A;
            r.a_table.push_back(std::move(e));
        } else {
            r.a_table_truncated = true;
        }
        Rational scaled(A * Uprod, U);
        scaled.canonicalize();
        if (scaled.get_den() != 1) c_constant = false;
        else if (!c) c = scaled.get_num();
        else if (*c != scaled.get_num()) c_constant = false;
        for (std::size_t i = 0; i < s; ++i) {
            const Integer u(p.config.bases[i].u);
            const auto k = p.k(i, j[i]);
            if (powmod(table.vbar_m(i), Integer(static_cast<unsigned long>(k)), u) != mod_floor(Integer(1), u))
                tau_consequences = false;
            if (mod_floor(table.mbar(i, j), u) != mod_floor(Integer(1), u)) tau_consequences = false;
        }
    } while (boxes.advance(j));
    r.alpha_m.canonicalize();
    if (c_constant) r.c = c;

    const Rational ms = Rational(ipow(static_cast<long>(p.m), s));
    r.bound_rhs = ms / Rational(4 * Uprod);
    r.bound_rhs.canonicalize();
    r.C = bound_constant(p);

    add("box_partition", "sum_j vol B(j) = prod y_i", pf(boxes.partitions_anchored_box()));

    if (p.mode == WitnessMode::Kind::automatic && p.T && !p.fell_back_to_manual) {
        const Rational rhs = make_rational(Integer(static_cast<unsigned long>(*p.T)), Integer(static_cast<unsigned long>(p.tau0 * p.u0)));
        add("(a) m_lower_bound", "m >= T/(tau0*u0)", pf(Rational(static_cast<long>(p.m)) >= rhs),
            "m=" + std::to_string(p.m) + ", T/(tau0 u0)=" + to_string(rhs));
    } else {
        add("(a) m_lower_bound", "m >= T/(tau0*u0)", Status::not_applicable, "automatic mode only");
    }

    if (p.N) add("(b) window_fits", "2*Ubar_m <= N", pf(2 * r.ubar_m <= *p.N), "2*Ubar_m=" + Integer(2 * r.ubar_m).get_str());
    else add("(b) window_fits", "2*Ubar_m <= N", Status::not_applicable, "N not given");

    {
        Rational sum = lemma3_sum(p.config.bases, p.tau, p.b);
        add("(c) fractional_sum", "sum_i b_i vbar_i^tau_i / u_i != 1/2 (mod 1)", pf(sum != Rational(1, 2)),
            "sum=" + to_string(sum));
    }

    const bool bound_applies = p.tau_conditions_hold && Rational(static_cast<long>(p.m)) >= Rational(2 * Uprod);
    if (bound_applies) {
        add("(d) alpha_lower_bound", "|alpha_m| >= m^s/(4 u_1...u_s)", pf(abs(r.alpha_m) >= r.bound_rhs),
            "|alpha_m|=" + to_string(abs(r.alpha_m)) + ", rhs=" + to_string(r.bound_rhs));
    } else {
        add("(d) alpha_lower_bound", "|alpha_m| >= m^s/(4 u_1...u_s)", Status::not_applicable,
            p.tau_conditions_hold ? "needs m >= 2 u_1...u_s" : "k-sets override the level conditions");
    }

    if (p.N) {
        const double logN = log_integer(*p.N);
        r.C_log_s_N = r.C * std::pow(logN, static_cast<double>(s));
        const double rhs = r.bound_rhs.get_d();
        add("(e) constant_chain", "C log^s N <= m^s/(4 u_1...u_s)",
            pf(*r.C_log_s_N <= rhs * (1 + 1e-12)), "C log^s N=" + std::to_string(*r.C_log_s_N));
    } else {
        add("(e) constant_chain", "C log^s N <= m^s/(4 u_1...u_s)", Status::not_applicable, "N not given");
    }

    if (p.tau_conditions_hold) {
        add("tau_consequences", "vbar_{i,m}^{k_{i,j}} = 1 and Mbar_{i,j} = 1 (mod u_i)", pf(tau_consequences));
        add("constant_c", "A_j/Ubar_j = c/(u_1...u_s) (mod 1), same c for all j, c/(u_1...u_s) != 1/2",
            pf(c_constant && make_rational(*c, Uprod) != Rational(1, 2)),
            c_constant ? "c=" + c->get_str() : "A_j/Ubar_j not constant");
    } else {
        add("tau_consequences", "vbar_{i,m}^{k_{i,j}} = 1 and Mbar_{i,j} = 1 (mod u_i)", Status::not_applicable,
            "k-sets override the level conditions");
        add("constant_c", "A_j/Ubar_j constant mod 1", Status::not_applicable, "k-sets override the level conditions");
    }

    if (enumerable) {
        r.w_m_scan = find_w_m_scan(p, opt.limits.enumeration);
        add("w_m_scan", "closed-form w_m equals the first scanned index", pf(r.w_m_scan && *r.w_m_scan == r.w_m));

        const auto bf = alpha_m_bruteforce(p, r.w_m, opt.limits);
        r.alpha_m_bruteforce = bf.alpha;
        add("alpha_identity", "alpha_m (closed form) = alpha_m (enumeration)", pf(bf.alpha == r.alpha_m),
            "enumerated=" + to_string(bf.alpha));
        add("aligned_windows", "Sigma_{j, M1*Ubar_j} = 0 for all j, M1", pf(bf.aligned_windows_vanish));
        bool per_j = true, scan_A = true;
        std::vector<std::size_t> jj(s, 0);
        do {
            const auto f = boxes.flat(jj);
            const Integer U = ubar(p, jj);
            const Rational expect = Rational(1) - make_rational(A_flat[f], U) - make_rational(U + 1, 2 * U);
            if (bf.per_box_average[f] != expect) per_j = false;
            if (bf.offsets[f].empty() || Integer(static_cast<unsigned long>(bf.offsets[f].front())) != A_flat[f])
                scan_A = false;
        } while (boxes.advance(jj));
        add("per_box_average", "(1/Ubar_m) sum_M Sigma_{j,M} = 1 - A_j/Ubar_j - (Ubar_j+1)/(2 Ubar_j)", pf(per_j));
        add("A_scan", "A_j equals the scanned offset of B(j) from w_m", pf(scan_A));
    } else {
        for (const char* name : {"w_m_scan", "alpha_identity", "aligned_windows", "per_box_average", "A_scan"})
            add(name, "enumeration oracle", Status::not_applicable, "Ubar_m above the enumeration threshold");
    }

    if (opt.check_discrepancy) {
        if (!opt.limits.within(s, 2 * r.ubar_m.get_d()))
            throw Error(ErrorKind::guardrail, "discrepancy chain needs 2*Ubar_m = " + Integer(2 * r.ubar_m).get_str() +
                                                  " points, above the guardrail; raise it or drop --check-disc");
        const std::size_t U = r.ubar_m.get_ui();
        const HaltonGenerator gen(p.config, p.t);
        DiscrepancyEvaluator window(gen.point_set(r.w_m, U), opt.limits);
        DiscrepancyEvaluator prefix(gen.point_set(0, 2 * U), opt.limits);
        Rational s1 = 0, s2 = 0;
        for (std::size_t M = 1; M <= U; ++M) s1 = std::max(s1, window.scaled(M));
        for (std::size_t M = 1; M <= 2 * U; ++M) s2 = std::max(s2, prefix.scaled(M));
        r.sup_window_discrepancy = s1;
        r.sup_prefix_discrepancy = s2;
        const Rational a = abs(r.alpha_m);
        add("alpha_vs_window", "|alpha_m| <= sup_{M<=Ubar_m} M D*_M(x_{n+w_m})", pf(a <= s1), "sup=" + to_string(s1));
        add("window_vs_prefix", "sup_{M<=Ubar_m} M D*_M(x_{n+w_m}) <= 2 sup_{M<=2Ubar_m} M D*_M(x_n)",
            pf(s1 <= 2 * s2), "sup=" + to_string(s2));
        add("alpha_vs_prefix", "|alpha_m| <= 2 sup_{M<=2Ubar_m} M D*_M(x_n)", pf(a <= 2 * s2));
    }
    return r;
}

struct GrowthRow {
    std::size_t N = 0;
    Rational discrepancy;  ///< D*_N
    double ratio = 0;      ///< N D*_N / log^s N
};

/// N D*_N / log^s N for N = 2, 2+stride, ..., N_max at t = max_i ceil(log_{u_i} N_max).
inline std::vector<GrowthRow> growth_scan(const GeneratorConfig& config, std::size_t N_max, std::size_t stride = 1,
                                          Limits limits = Limits::from_env(), std::size_t N_min = 2) {
    require_valid(config);
    if (N_max < 2) throw Error(ErrorKind::precondition, "growth scan needs N_max >= 2");
    if (stride < 1) throw Error(ErrorKind::precondition, "stride must be >= 1");
    const std::size_t t = default_truncation(config, Integer(static_cast<unsigned long>(N_max)));
    const HaltonGenerator gen(config, t);
    DiscrepancyEvaluator ev(gen.point_set(0, N_max), limits);
    ev.check_guardrail(N_max);
    const double s = static_cast<double>(config.dimension());
    std::vector<GrowthRow> rows;
    auto emit = [&](std::size_t N) {
        GrowthRow row;
        row.N = N;
        Rational scaled = ev.scaled(N);
        row.discrepancy = scaled / Rational(static_cast<long>(N));
        row.discrepancy.canonicalize();
        row.ratio = scaled.get_d() / std::pow(std::log(static_cast<double>(N)), s);
        rows.push_back(std::move(row));
    };
    std::size_t N = std::max<std::size_t>(2, N_min);
    for (; N <= N_max; N += stride) emit(N);
    if (rows.empty() || rows.back().N != N_max) emit(N_max);
    return rows;
}

}  // namespace rbhalton
