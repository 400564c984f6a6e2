#pragma once

// Digit permutation sequences, the permuted u/v-adic radical inverse and the
// digit-wise truncation operator [x]_t.

#include "rbhalton/numeration.hpp"

#include <algorithm>
#include <functional>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

namespace rbhalton {

/// A bijection on {0,...,u-1} stored as a lookup table together with its inverse.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> table) : table_(std::move(table)), inverse_(table_.size(), -1) {
        const int u = static_cast<int>(table_.size());
        if (u < 2) throw Error(ErrorKind::bad_config, "permutation needs at least two digits");
        for (int d = 0; d < u; ++d) {
            int image = table_[d];
            if (image < 0 || image >= u || inverse_[image] != -1)
                throw Error(ErrorKind::bad_config, "digit table is not a bijection on {0,...," + std::to_string(u - 1) + "}");
            inverse_[image] = d;
        }
    }

    static Permutation identity(int u) {
        std::vector<int> t(static_cast<std::size_t>(u));
        std::iota(t.begin(), t.end(), 0);
        return Permutation(std::move(t));
    }

    /// d -> u-1-d
    static Permutation reversal(int u) {
        std::vector<int> t(static_cast<std::size_t>(u));
        for (int d = 0; d < u; ++d) t[d] = u - 1 - d;
        return Permutation(std::move(t));
    }

    [[nodiscard]] int size() const { return static_cast<int>(table_.size()); }
    [[nodiscard]] int operator()(int d) const { return table_[d]; }
    [[nodiscard]] int inverse(int d) const { return inverse_[d]; }
    [[nodiscard]] const std::vector<int>& table() const { return table_; }
    [[nodiscard]] bool is_identity() const {
        for (int d = 0; d < size(); ++d)
            if (table_[d] != d) return false;
        return true;
    }

    friend bool operator==(const Permutation& a, const Permutation& b) { return a.table_ == b.table_; }

private:
    std::vector<int> table_;
    std::vector<int> inverse_;
};

/// The sequence (sigma_r)_{r>=1}. Tables give an eventually periodic sequence;
/// a provider callback covers arbitrary sequences that cannot be serialized.
class PermutationSpec {
public:
    using Provider = std::function<Permutation(std::size_t level)>;

    PermutationSpec() = default;

    PermutationSpec(int u, std::vector<Permutation> preperiod, std::vector<Permutation> period)
        : u_(u), preperiod_(std::move(preperiod)), period_(std::move(period)) {
        if (u_ < 2) throw Error(ErrorKind::bad_config, "permutation spec needs u >= 2");
        if (period_.empty()) throw Error(ErrorKind::bad_config, "permutation spec needs a nonempty period");
        for (const auto* list : {&preperiod_, &period_})
            for (const auto& p : *list)
                if (p.size() != u_)
                    throw Error(ErrorKind::bad_config, "permutation of size " + std::to_string(p.size()) +
                                                           " in a spec for u=" + std::to_string(u_));
    }

    static PermutationSpec identity(int u) { return PermutationSpec(u, {}, {Permutation::identity(u)}); }
    static PermutationSpec reversal(int u) { return PermutationSpec(u, {}, {Permutation::reversal(u)}); }

    static PermutationSpec from_provider(int u, Provider provider) {
        PermutationSpec s;
        s.u_ = u;
        s.period_ = {Permutation::identity(u)};
        s.provider_ = std::make_shared<const Provider>(std::move(provider));
        return s;
    }

    [[nodiscard]] int base_size() const { return u_; }
    [[nodiscard]] const std::vector<Permutation>& preperiod() const { return preperiod_; }
    [[nodiscard]] const std::vector<Permutation>& period() const { return period_; }
    [[nodiscard]] bool serializable() const { return provider_ == nullptr; }

    /// sigma_r for r >= 1.
    [[nodiscard]] Permutation at(std::size_t r) const {
        if (r < 1) throw Error(ErrorKind::precondition, "permutation levels start at 1");
        if (provider_) {
            Permutation p = (*provider_)(r);
            if (p.size() != u_) throw Error(ErrorKind::bad_config, "provider returned a permutation of the wrong size");
            return p;
        }
        return table_at(r);
    }

    /// Reference access for table-backed specs (no provider).
    [[nodiscard]] const Permutation& table_at(std::size_t r) const {
        if (r <= preperiod_.size()) return preperiod_[r - 1];
        return period_[(r - preperiod_.size() - 1) % period_.size()];
    }

    [[nodiscard]] bool is_identity() const {
        if (provider_) return false;
        return std::all_of(preperiod_.begin(), preperiod_.end(), [](const auto& p) { return p.is_identity(); }) &&
               std::all_of(period_.begin(), period_.end(), [](const auto& p) { return p.is_identity(); });
    }

private:
    int u_ = 2;
    std::vector<Permutation> preperiod_;
    std::vector<Permutation> period_{Permutation::identity(2)};
    std::shared_ptr<const Provider> provider_;
};

inline Permutation perm_at(const PermutationSpec& spec, std::size_t r) { return spec.at(r); }

/// Caches sigma_1..sigma_t so hot loops avoid provider calls and copies.
class LevelTables {
public:
    LevelTables(const PermutationSpec& spec, std::size_t t) {
        levels_.reserve(t);
        for (std::size_t r = 1; r <= t; ++r) levels_.push_back(spec.at(r));
    }
    [[nodiscard]] const Permutation& operator[](std::size_t r) const { return levels_[r - 1]; }
    [[nodiscard]] std::size_t depth() const { return levels_.size(); }

private:
    std::vector<Permutation> levels_;
};

/// Numerator of [phi(n)]_t over u^t: sum_{r<=t} sigma_r(a_r) u^{t-r}.
inline Integer radical_inverse_numerator(const Integer& n, const RationalBase& base, const LevelTables& levels,
                                         std::size_t t) {
    if (t < 1) throw Error(ErrorKind::precondition, "truncation level t must be >= 1");
    if (levels.depth() < t) throw Error(ErrorKind::precondition, "permutation tables shallower than t");
    const std::vector<int> digits = leading_digits(n, base, t);
    Integer acc = 0;
    for (std::size_t r = 1; r <= t; ++r) {
        acc *= base.u;
        acc += levels[r](digits[r - 1]);
    }
    return acc;
}

/// [phi^Sigma_{u/v}(n)]_t as an exact rational with denominator dividing u^t.
inline Rational radical_inverse_truncated(const Integer& n, const RationalBase& base, const PermutationSpec& spec,
                                          std::size_t t) {
    if (n < 0) throw Error(ErrorKind::precondition, "radical inverse is defined for n >= 0");
    if (spec.base_size() != base.u)
        throw Error(ErrorKind::bad_config, "permutation spec size does not match base " + base.str());
    LevelTables levels(spec, t);
    Rational r(radical_inverse_numerator(n, base, levels, t), ipow(base.u, t));
    r.canonicalize();
    return r;
}

/// A point of [0,1] given by a prescribed base-u digit sequence x_1, x_2, ...
/// Digits past the stored prefix are `tail` (0 or u-1 in practice).
struct DigitValue {
    std::vector<int> digits;
    int base_u = 2;
    int tail = 0;

    [[nodiscard]] int digit(std::size_t j) const { return j <= digits.size() ? digits[j - 1] : tail; }
};

/// sum_{j<=t} x_j u^{-j} from the prescribed digits (not a numeric rounding).
inline Rational truncate(const DigitValue& x, std::size_t t) {
    if (t < 1) throw Error(ErrorKind::precondition, "truncation level t must be >= 1");
    Integer acc = 0;
    for (std::size_t j = 1; j <= t; ++j) {
        int d = x.digit(j);
        if (d < 0 || d >= x.base_u) throw Error(ErrorKind::precondition, "digit outside {0,...,u-1}");
        acc = acc * x.base_u + d;
    }
    Rational r(acc, ipow(x.base_u, t));
    r.canonicalize();
    return r;
}

}  // namespace rbhalton
