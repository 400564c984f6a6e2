#pragma once

// Residue characterizations of digit-prefix boxes.
//
// For a base-u_i digit prefix y_{i,1..k_i} the indices n whose truncated
// coordinate i starts with that prefix form one residue class modulo
// u_i^{k_i}; combining coordinates by CRT gives one class modulo
// U_k = prod u_i^{k_i}. The left-adjacent box (last digit decreased by one)
// is the same class shifted by a computable offset.

#include "rbhalton/sequence.hpp"

#include <string>
#include <vector>

namespace rbhalton {

/// a^{-1} mod modulus, normalized to [1, modulus).
inline Integer mod_inverse(const Integer& a, const Integer& modulus) {
    if (modulus < 2) throw Error(ErrorKind::precondition, "mod_inverse needs modulus >= 2");
    Integer r;
    if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t()) == 0)
        throw Error(ErrorKind::precondition,
                    "gcd(" + a.get_str() + ", " + modulus.get_str() + ") != 1, no modular inverse");
    return mod_floor(r, modulus);
}

/// Per-coordinate digit prefixes y_{i,1..k_i}; the last digit of each must be positive.
class BoxDigits {
public:
    BoxDigits() = default;
    explicit BoxDigits(std::vector<std::vector<int>> digits) : digits_(std::move(digits)) {
        for (std::size_t i = 0; i < digits_.size(); ++i) {
            if (digits_[i].empty())
                throw Error(ErrorKind::precondition, "coordinate " + std::to_string(i + 1) + " needs k_i >= 1");
            if (digits_[i].back() <= 0)
                throw Error(ErrorKind::precondition,
                            "coordinate " + std::to_string(i + 1) + ": last prefix digit y_{i,k_i} must be > 0");
        }
    }

    [[nodiscard]] std::size_t dimension() const { return digits_.size(); }
    [[nodiscard]] std::size_t k(std::size_t i) const { return digits_[i].size(); }
    [[nodiscard]] const std::vector<int>& digits(std::size_t i) const { return digits_[i]; }
    [[nodiscard]] std::size_t max_k() const {
        std::size_t m = 0;
        for (const auto& d : digits_) m = std::max(m, d.size());
        return m;
    }

    /// [y_i]_{k_i} = sum_j y_{i,j} u^{-j}
    [[nodiscard]] Rational left_end(std::size_t i, std::int64_t u) const {
        return truncate(DigitValue{digits_[i], static_cast<int>(u), 0}, k(i));
    }

private:
    std::vector<std::vector<int>> digits_;
};

namespace detail {

inline void check_digits(const std::vector<int>& y, std::int64_t u) {
    for (int d : y)
        if (d < 0 || d >= u) throw Error(ErrorKind::precondition, "box digit outside {0,...,u-1}");
}

}  // namespace detail

/// dot{y}_{i,k_i} = sum_{j<=k_i} sigma_j^{-1}(y_{i,j}) u^{j-1} vbar^j  mod u^{k_i}.
inline Integer dot_y(const std::vector<int>& y, const PermutationSpec& spec, const RationalBase& base) {
    detail::check_digits(y, base.u);
    const std::size_t k = y.size();
    const Integer modulus = ipow(base.u, k);
    if (k == 0) return 0;
    const Integer vbar = mod_inverse(Integer(base.v), modulus);
    Integer acc = 0;
    Integer upow = 1;
    Integer vpow = vbar;
    for (std::size_t j = 1; j <= k; ++j) {
        acc += spec.at(j).inverse(y[j - 1]) * upow * vpow;
        upow *= base.u;
        vpow = mod_floor(vpow * vbar, modulus);
    }
    return mod_floor(acc, modulus);
}

inline Integer dot_y(std::size_t i, const BoxDigits& box, const PermutationSpec& spec, const RationalBase& base) {
    return dot_y(box.digits(i), spec, base);
}

/// Every residue attached to one box.
struct ResidueSystem {
    std::vector<Integer> moduli;  ///< u_i^{k_i}
    Integer U;                    ///< prod u_i^{k_i}
    std::vector<Integer> vbar;    ///< v_i^{-1} mod u_i^{k_i}
    std::vector<Integer> M;       ///< (prod_{j!=i} u_j^{k_j})^{-1} mod u_i^{k_i}
    std::vector<Integer> dot;     ///< dot{y}_{i,k_i}
    Integer ddot;                 ///< joint residue mod U
};

/// M_{i,k} for exponent vector k.
inline Integer crt_multiplier(const GeneratorConfig& config, const std::vector<std::size_t>& k, std::size_t i) {
    Integer other = 1;
    for (std::size_t j = 0; j < config.dimension(); ++j)
        if (j != i) other *= ipow(config.bases[j].u, k[j]);
    const Integer modulus = ipow(config.bases[i].u, k[i]);
    if (modulus < 2) return 0;
    return mod_inverse(other, modulus);
}

/// Combines per-coordinate residues r_i mod u_i^{k_i} into sum_i M_i (U/u_i^{k_i}) r_i mod U.
inline Integer crt_combine(const std::vector<Integer>& residues, const std::vector<Integer>& moduli,
                           const std::vector<Integer>& multipliers) {
    Integer U = 1;
    for (const auto& m : moduli) U *= m;
    Integer acc = 0;
    for (std::size_t i = 0; i < residues.size(); ++i) acc += multipliers[i] * (U / moduli[i]) * residues[i];
    return mod_floor(acc, U);
}

inline ResidueSystem residue_system(const BoxDigits& box, const GeneratorConfig& config) {
    require_valid(config);
    const auto s = config.dimension();
    if (box.dimension() != s) throw Error(ErrorKind::precondition, "box dimension does not match config");
    ResidueSystem rs;
    std::vector<std::size_t> k(s);
    for (std::size_t i = 0; i < s; ++i) k[i] = box.k(i);
    rs.U = 1;
    for (std::size_t i = 0; i < s; ++i) {
        const auto& b = config.bases[i];
        rs.moduli.push_back(ipow(b.u, k[i]));
        rs.U *= rs.moduli.back();
        rs.vbar.push_back(mod_inverse(Integer(b.v), rs.moduli.back()));
        rs.M.push_back(crt_multiplier(config, k, i));
        rs.dot.push_back(dot_y(box.digits(i), config.specs[i], b));
    }
    rs.ddot = crt_combine(rs.dot, rs.moduli, rs.M);
    return rs;
}

/// ddot{y}_k mod U_k.
inline Integer ddot_y(const BoxDigits& box, const GeneratorConfig& config) { return residue_system(box, config).ddot; }

struct NeighborOffset {
    int b = 0;         ///< in {1,...,u-1}
    Integer residue;   ///< class mod u^k of the left-adjacent interval
};

/// b = sigma_k^{-1}(y_k - 1) - sigma_k^{-1}(y_k) mod u, with the residue of the
/// interval [[y]_k - u^{-k}, [y]_k). Uses the level-k digit y_k.
inline NeighborOffset left_neighbor_offset(const std::vector<int>& y, const PermutationSpec& spec,
                                           const RationalBase& base) {
    detail::check_digits(y, base.u);
    if (y.empty() || y.back() == 0)
        throw Error(ErrorKind::precondition, "left neighbor needs a positive last digit y_{i,k_i}");
    const std::size_t k = y.size();
    const Permutation sigma = spec.at(k);
    const std::int64_t u = base.u;
    std::int64_t b = (sigma.inverse(y.back() - 1) - sigma.inverse(y.back())) % u;
    if (b < 0) b += u;
    const Integer modulus = ipow(u, k);
    const Integer vbar = mod_inverse(Integer(base.v), modulus);
    NeighborOffset out;
    out.b = static_cast<int>(b);
    out.residue = mod_floor(dot_y(y, spec, base) + b * ipow(u, k - 1) * powmod(vbar, Integer(k), modulus), modulus);
    return out;
}

inline NeighborOffset left_neighbor_offset(std::size_t i, const BoxDigits& box, const PermutationSpec& spec,
                                           const RationalBase& base) {
    return left_neighbor_offset(box.digits(i), spec, base);
}

/// Joint residue of prod_i [[y_i]_{k_i} - u_i^{-k_i}, [y_i]_{k_i}):
/// ddot{y} + sum_i M_i (U/u_i) b_i vbar_i^{k_i} mod U.
inline Integer joint_left_residue(const BoxDigits& box, const GeneratorConfig& config) {
    const ResidueSystem rs = residue_system(box, config);
    Integer acc = rs.ddot;
    for (std::size_t i = 0; i < config.dimension(); ++i) {
        const auto nb = left_neighbor_offset(box.digits(i), config.specs[i], config.bases[i]);
        acc += rs.M[i] * (rs.U / config.bases[i].u) * nb.b * powmod(rs.vbar[i], Integer(box.k(i)), rs.moduli[i]);
    }
    return mod_floor(acc, rs.U);
}

/// sum_i b_i vbar_i^{tau_i} / u_i reduced mod 1, with vbar_i = v_i^{-1} mod u_i.
inline Rational lemma3_sum(const std::vector<RationalBase>& bases, const std::vector<std::size_t>& taus,
                           const std::vector<int>& bs) {
    const auto s = bases.size();
    if (s < 2) throw Error(ErrorKind::precondition, "the fractional-sum test needs s > 1");
    if (taus.size() != s || bs.size() != s) throw Error(ErrorKind::precondition, "bases, taus and b must have equal length");
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j)
            if (std::gcd(bases[i].u, bases[j].u) != 1)
                throw Error(ErrorKind::precondition, "bases must have pairwise coprime u");
    Rational sum = 0;
    for (std::size_t i = 0; i < s; ++i) {
        const Integer u(bases[i].u);
        if (bs[i] < 1 || bs[i] >= bases[i].u) throw Error(ErrorKind::precondition, "b_i must lie in {1,...,u_i-1}");
        if (powmod(Integer(bases[i].v), Integer(taus[i]), u) != mod_floor(Integer(1), u))
            throw Error(ErrorKind::precondition, "v_i^tau_i is not 1 mod u_i for coordinate " + std::to_string(i + 1));
        const Integer vbar = mod_inverse(Integer(bases[i].v), u);
        sum += make_rational(mod_floor(bs[i] * powmod(vbar, Integer(taus[i]), u), u), u);
    }
    return frac(sum);
}

}  // namespace rbhalton
