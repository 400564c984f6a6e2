#pragma once

// Brute-force oracles for the digit-expansion and residue results.
//
// Every check here derives its expectation by direct enumeration (generating
// truncated points and testing interval membership with exact rationals) and
// compares against the closed forms in numeration.hpp and congruence.hpp.

#include "rbhalton/congruence.hpp"
#include "rbhalton/witness.hpp"

#include <random>
#include <string>
#include <vector>

namespace rbhalton::verify {

struct Tally {
    std::string name;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t configurations = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        if (ok) {
            ++passed;
        } else {
            if (failed == 0) first_failure = what;
            ++failed;
        }
    }
    [[nodiscard]] bool ok() const { return failed == 0 && passed > 0; }
};

/// Digits of n in bases 3 and 3/2 for n = 0..11, trailing zeros dropped ((0) for zero).
inline const std::vector<std::vector<int>>& digit_table_base3() {
    static const std::vector<std::vector<int>> t = {{0},    {1},    {2},    {0, 1},    {1, 1},    {2, 1},
                                                    {0, 2}, {1, 2}, {2, 2}, {0, 0, 1}, {1, 0, 1}, {2, 0, 1}};
    return t;
}

inline const std::vector<std::vector<int>>& digit_table_base3_2() {
    static const std::vector<std::vector<int>> t = {
        {0},          {2},          {1, 2},          {0, 1, 2},       {2, 1, 2},       {1, 0, 1, 2},
        {0, 2, 1, 2}, {2, 2, 1, 2}, {1, 1, 0, 1, 2}, {0, 0, 2, 1, 2}, {2, 0, 2, 1, 2}, {1, 2, 2, 1, 2}};
    return t;
}

/// Finite expansion with trailing zeros removed; (0) for zero.
inline std::vector<int> finite_expansion(const Integer& n, const RationalBase& base, std::size_t cap = 256) {
    auto len = expansion_length(n, base, cap);
    if (!len) throw Error(ErrorKind::precondition, "expansion does not terminate within cap");
    if (*len == 0) return {0};
    auto st = expand_digits(n, base, *len);
    return st.digits();
}

inline Tally check_digit_table() {
    Tally t{"digit_table"};
    t.configurations = 2;
    for (long n = 0; n < 12; ++n) {
        t.record(finite_expansion(n, RationalBase(3, 1)) == digit_table_base3()[n], "base 3, n=" + std::to_string(n));
        t.record(finite_expansion(n, RationalBase(3, 2)) == digit_table_base3_2()[n], "base 3/2, n=" + std::to_string(n));
    }
    return t;
}

inline const std::vector<RationalBase>& single_bases() {
    static const std::vector<RationalBase> b = {{2, 1}, {3, 1}, {3, 2}, {4, 3}, {5, 2}, {5, 3}, {2, 3}, {7, 4}};
    return b;
}

/// u | (v z_{r-1} - a_r), z_r = (v z_{r-1} - a_r)/u, and reconstruction at every j.
inline Tally check_recurrence(long z_lo, long z_hi, std::size_t r_max) {
    Tally t{"recurrence_and_reconstruction"};
    for (const auto& base : single_bases()) {
        ++t.configurations;
        for (long z = z_lo; z <= z_hi; ++z) {
            auto st = expand_digits(Integer(z), base, r_max);
            bool ok = true;
            for (std::size_t r = 1; r <= r_max && ok; ++r) {
                const Integer lhs = Integer(base.v) * st.remainder(r - 1) - st.digits()[r - 1];
                ok = st.digits()[r - 1] >= 0 && st.digits()[r - 1] < base.u && lhs == Integer(base.u) * st.remainder(r);
            }
            for (std::size_t j = 0; j <= r_max && ok; j += 3) {
                std::vector<int> prefix(st.digits().begin(), st.digits().begin() + static_cast<std::ptrdiff_t>(j));
                ok = reconstruct(prefix, st.remainder(j), base) == z;
            }
            t.record(ok, "z=" + std::to_string(z) + " base " + base.str());
        }
    }
    return t;
}

/// Digit prefixes of length j agree iff z1 = z2 mod u^j.
inline Tally check_prefix_congruence(long lo, long hi, std::size_t j_max, const std::vector<RationalBase>& bases) {
    Tally t{"prefix_congruence"};
    for (const auto& base : bases) {
        ++t.configurations;
        std::vector<std::vector<int>> digits;
        for (long z = lo; z <= hi; ++z) digits.push_back(leading_digits(Integer(z), base, j_max));
        for (std::size_t j = 1; j <= j_max; ++j) {
            long mod = 1;
            for (std::size_t q = 0; q < j; ++q) mod *= base.u;
            std::size_t bad = 0;
            for (long a = lo; a <= hi; ++a)
                for (long b = lo; b <= hi; ++b) {
                    const auto& da = digits[static_cast<std::size_t>(a - lo)];
                    const auto& db = digits[static_cast<std::size_t>(b - lo)];
                    bool same = std::equal(da.begin(), da.begin() + static_cast<std::ptrdiff_t>(j), db.begin());
                    bool cong = ((a - b) % mod) == 0;
                    if (same != cong) ++bad;
                }
            t.record(bad == 0, "base " + base.str() + " j=" + std::to_string(j));
        }
    }
    return t;
}

struct ResidueCase {
    GeneratorConfig config;
    BoxDigits box;
    std::string label;
};

/// A spec with an identity preperiod and a two-step period (reversal, cyclic shift).
inline PermutationSpec mixed_spec(int u) {
    std::vector<int> shift(static_cast<std::size_t>(u));
    for (int d = 0; d < u; ++d) shift[d] = (d + 1) % u;
    return PermutationSpec(u, {Permutation::identity(u)}, {Permutation::reversal(u), Permutation(shift)});
}

/// Matrix of (config, box) pairs with U_k <= max_modulus: s in {1, 2};
/// identity, reversal and mixed permutations; several k-vectors each.
inline std::vector<ResidueCase> residue_matrix(double max_modulus, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::vector<std::vector<RationalBase>> systems = {
        {{2, 1}}, {{3, 2}}, {{4, 3}}, {{5, 2}}, {{2, 3}},
        {{2, 1}, {3, 2}}, {{3, 2}, {4, 3}}, {{2, 1}, {5, 3}}, {{5, 2}, {2, 3}}, {{3, 1}, {4, 1}}};
    std::vector<ResidueCase> cases;
    for (const auto& bases : systems) {
        for (int kind = 0; kind < 3; ++kind) {
            GeneratorConfig cfg;
            cfg.bases = bases;
            for (const auto& b : bases) {
                const int u = static_cast<int>(b.u);
                cfg.specs.push_back(kind == 0 ? PermutationSpec::identity(u)
                                              : kind == 1 ? PermutationSpec::reversal(u) : mixed_spec(u));
            }
            const std::string perm = kind == 0 ? "identity" : kind == 1 ? "reversal" : "mixed";
            // all k-vectors with U_k <= max_modulus, thinned to at most four per config
            std::vector<std::vector<std::size_t>> kvecs;
            std::vector<std::size_t> k(bases.size(), 1);
            auto product = [&](const std::vector<std::size_t>& kv) {
                double p = 1;
                for (std::size_t i = 0; i < kv.size(); ++i) p *= std::pow(static_cast<double>(bases[i].u), static_cast<double>(kv[i]));
                return p;
            };
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == k.size()) {
                    if (product(k) <= max_modulus) kvecs.push_back(k);
                    return;
                }
                for (k[i] = 1; product(k) <= max_modulus; ++k[i]) rec(i + 1);
                k[i] = 1;
            };
            rec(0);
            std::vector<std::vector<std::size_t>> chosen;
            if (!kvecs.empty()) {
                chosen.push_back(kvecs.front());
                chosen.push_back(kvecs.back());
                std::sort(kvecs.begin(), kvecs.end(), [&](const auto& a, const auto& b) { return product(a) < product(b); });
                chosen.push_back(kvecs.back());
                chosen.push_back(kvecs[kvecs.size() / 2]);
            }
            for (const auto& kv : chosen) {
                std::vector<std::vector<int>> digits(bases.size());
                for (std::size_t i = 0; i < bases.size(); ++i) {
                    std::uniform_int_distribution<int> dig(0, static_cast<int>(bases[i].u) - 1);
                    std::uniform_int_distribution<int> last(1, static_cast<int>(bases[i].u) - 1);
                    for (std::size_t q = 0; q + 1 < kv[i]; ++q) digits[i].push_back(dig(rng));
                    digits[i].push_back(last(rng));
                }
                std::string label = "bases";
                for (const auto& b : bases) label += " " + b.str();
                label += " " + perm + " k=(";
                for (std::size_t i = 0; i < kv.size(); ++i) label += (i ? "," : "") + std::to_string(kv[i]);
                label += ")";
                cases.push_back({cfg, BoxDigits(std::move(digits)), label});
            }
        }
    }
    return cases;
}

/// Interval and box residues by exhaustive scan over n in [0, U_k) at t in {max k, max k + 2};
/// extension, inverse and order identities asserted directly.
inline Tally check_residues(double max_modulus, std::uint64_t seed) {
    Tally t{"residue_classes"};
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    for (const auto& c : residue_matrix(max_modulus, seed)) {
        ++t.configurations;
        const auto s = c.config.dimension();
        const ResidueSystem rs = residue_system(c.box, c.config);
        std::vector<NeighborOffset> left;
        for (std::size_t i = 0; i < s; ++i) left.push_back(left_neighbor_offset(c.box.digits(i), c.config.specs[i], c.config.bases[i]));
        const Integer joint_left = joint_left_residue(c.box, c.config);

        std::vector<Rational> lo, width;
        for (std::size_t i = 0; i < s; ++i) {
            lo.push_back(c.box.left_end(i, c.config.bases[i].u));
            width.push_back(Rational(Integer(1), rs.moduli[i]));
        }
        for (std::size_t t_extra : {std::size_t{0}, std::size_t{2}}) {
            const std::size_t level = c.box.max_k() + t_extra;
            const HaltonGenerator gen(c.config, level);
            bool coord = true, joint = true, coord_left = true, joint_left_ok = true;
            for (Integer n = 0; n < rs.U; ++n) {
                const auto x = gen.point(n);
                bool all_in = true, all_left = true;
                for (std::size_t i = 0; i < s; ++i) {
                    const bool in = lo[i] <= x[i] && x[i] < lo[i] + width[i];
                    const bool lft = lo[i] - width[i] <= x[i] && x[i] < lo[i];
                    all_in = all_in && in;
                    all_left = all_left && lft;
                    if (in != (mod_floor(n, rs.moduli[i]) == rs.dot[i])) coord = false;
                    if (lft != (mod_floor(n, rs.moduli[i]) == left[i].residue)) coord_left = false;
                }
                if (all_in != (n == rs.ddot)) joint = false;
                if (all_left != (n == joint_left)) joint_left_ok = false;
            }
            const std::string tag = c.label + " t=" + std::to_string(level);
            t.record(coord, tag + " interval residue");
            t.record(joint, tag + " box residue");
            t.record(coord_left, tag + " left interval residue");
            t.record(joint_left_ok, tag + " left box residue");
        }

        // extending every prefix keeps the joint residue mod U_k
        std::vector<std::vector<int>> ext(s);
        for (std::size_t i = 0; i < s; ++i) {
            ext[i] = c.box.digits(i);
            std::uniform_int_distribution<int> extra(0, 3);
            std::uniform_int_distribution<int> dig(1, static_cast<int>(c.config.bases[i].u) - 1);
            for (int q = extra(rng); q > 0; --q) ext[i].push_back(dig(rng));
        }
        const Integer ddot_ext = ddot_y(BoxDigits(ext), c.config);
        t.record(mod_floor(ddot_ext, rs.U) == rs.ddot, c.label + " extension");

        for (std::size_t i = 0; i < s; ++i) {
            const auto& b = c.config.bases[i];
            bool inverse = true;
            for (std::size_t j = 1; j <= c.box.k(i); ++j)
                inverse = inverse && mod_floor(Integer(b.v) * rs.vbar[i], ipow(b.u, j)) == mod_floor(Integer(1), ipow(b.u, j));
            t.record(inverse, c.label + " vbar inverse");
            const std::size_t alpha = detail::multiplicative_order(Integer(b.v), Integer(b.u), Integer(b.u));
            t.record(powmod(rs.vbar[i], Integer(static_cast<unsigned long>(alpha)), Integer(b.u)) ==
                         mod_floor(Integer(1), Integer(b.u)),
                     c.label + " vbar order");
        }
    }
    return t;
}

/// All b-vectors, with tau_i both the minimal order of v_i mod u_i and the witness tau_i.
inline Tally check_fractional_sum(const std::vector<std::vector<RationalBase>>& systems) {
    Tally t{"fractional_sum_not_half"};
    for (const auto& bases : systems) {
        ++t.configurations;
        const auto cfg = GeneratorConfig::with_identity(bases);
        const auto params = derive_params(cfg, WitnessMode::from_level(64));
        std::vector<std::size_t> minimal;
        for (const auto& b : bases) minimal.push_back(detail::multiplicative_order(Integer(b.v), Integer(b.u), Integer(b.u)));
        const std::vector<std::size_t>* tau_choices[] = {&minimal, &params.tau};
        for (const auto* taus : tau_choices) {
            std::vector<int> bs(bases.size(), 1);
            while (true) {
                const Rational sum = lemma3_sum(bases, *taus, bs);
                t.record(sum != Rational(1, 2) && sum >= 0 && sum < 1, "b-vector hit 1/2");
                std::size_t i = 0;
                while (i < bs.size() && ++bs[i] >= bases[i].u) bs[i++] = 1;
                if (i == bs.size()) break;
            }
        }
    }
    return t;
}

inline const std::vector<std::vector<RationalBase>>& fractional_sum_systems() {
    static const std::vector<std::vector<RationalBase>> s = {
        {{2, 1}, {3, 2}}, {{3, 2}, {4, 3}}, {{3, 2}, {4, 3}, {5, 4}}, {{2, 1}, {3, 1}, {5, 2}}};
    return s;
}

inline std::vector<RationalBase> prefix_congruence_bases() { return {{3, 2}, {4, 3}, {5, 2}, {5, 3}, {2, 1}, {2, 3}}; }

/// Everything `verify-lemmas` runs.
inline std::vector<Tally> run_all(double max_modulus, std::uint64_t seed) {
    return {check_digit_table(), check_recurrence(-500, 500, 30), check_prefix_congruence(-200, 200, 5, prefix_congruence_bases()),
            check_residues(max_modulus, seed), check_fractional_sum(fractional_sum_systems())};
}

}  // namespace rbhalton::verify
