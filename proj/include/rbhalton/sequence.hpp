#pragma once

// s-dimensional generalized Halton sequences in rational bases and their
// truncated point sets.

#include "rbhalton/inverse.hpp"

#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

namespace rbhalton {

struct GeneratorConfig {
    std::vector<RationalBase> bases;
    std::vector<PermutationSpec> specs;

    [[nodiscard]] std::size_t dimension() const { return bases.size(); }

    /// Identity permutations in every coordinate.
    static GeneratorConfig with_identity(std::vector<RationalBase> bases) {
        GeneratorConfig c;
        for (const auto& b : bases) c.specs.push_back(PermutationSpec::identity(static_cast<int>(b.u)));
        c.bases = std::move(bases);
        return c;
    }

    [[nodiscard]] Integer product_u() const {
        Integer p = 1;
        for (const auto& b : bases) p *= b.u;
        return p;
    }
};

struct ValidationReport {
    std::vector<std::string> problems;
    [[nodiscard]] bool ok() const { return problems.empty(); }
    [[nodiscard]] std::string message() const {
        std::string out;
        for (const auto& p : problems) out += (out.empty() ? "" : "; ") + p;
        return out;
    }
};

inline ValidationReport validate_config(const GeneratorConfig& config) {
    ValidationReport rep;
    const auto s = config.bases.size();
    if (s == 0) rep.problems.emplace_back("dimension s must be >= 1");
    if (config.specs.size() != s)
        rep.problems.push_back("expected " + std::to_string(s) + " permutation specs, got " +
                               std::to_string(config.specs.size()));
    for (std::size_t i = 0; i < s; ++i) {
        const auto& b = config.bases[i];
        const std::string tag = "base " + std::to_string(i + 1) + " (" + b.str() + ")";
        if (b.u < 2) rep.problems.push_back(tag + ": u < 2");
        if (b.v < 1) rep.problems.push_back(tag + ": v < 1");
        if (b.u >= 1 && b.v >= 1 && std::gcd(b.u, b.v) != 1)
            rep.problems.push_back(tag + ": gcd(u,v)=" + std::to_string(std::gcd(b.u, b.v)));
        if (i < config.specs.size() && config.specs[i].base_size() != b.u)
            rep.problems.push_back(tag + ": permutation spec acts on " + std::to_string(config.specs[i].base_size()) +
                                   " digits");
    }
    for (std::size_t i = 0; i < s; ++i)
        for (std::size_t j = i + 1; j < s; ++j) {
            auto g = std::gcd(config.bases[i].u, config.bases[j].u);
            if (g != 1)
                rep.problems.push_back("gcd(u_" + std::to_string(i + 1) + ",u_" + std::to_string(j + 1) +
                                       ")=" + std::to_string(g));
        }
    return rep;
}

inline void require_valid(const GeneratorConfig& config) {
    auto rep = validate_config(config);
    if (!rep.ok()) throw Error(ErrorKind::bad_config, "invalid generator config: " + rep.message());
}

/// Points ([x_n^(1)]_t, ..., [x_n^(s)]_t) for n = start_index, start_index+1, ...
struct PointSet {
    std::size_t t = 1;
    Integer start_index = 0;
    std::size_t s = 1;
    std::vector<std::vector<Rational>> points;

    [[nodiscard]] std::size_t size() const { return points.size(); }
};

/// Evaluates truncated points at a fixed level with cached permutation tables.
class HaltonGenerator {
public:
    HaltonGenerator(GeneratorConfig config, std::size_t t) : config_(std::move(config)), t_(t) {
        require_valid(config_);
        if (t_ < 1) throw Error(ErrorKind::precondition, "truncation level t must be >= 1");
        for (std::size_t i = 0; i < config_.dimension(); ++i) {
            levels_.emplace_back(config_.specs[i], t_);
            denominators_.push_back(ipow(config_.bases[i].u, t_));
        }
    }

    [[nodiscard]] const GeneratorConfig& config() const { return config_; }
    [[nodiscard]] std::size_t level() const { return t_; }
    [[nodiscard]] std::size_t dimension() const { return config_.dimension(); }
    /// u_i^t
    [[nodiscard]] const Integer& denominator(std::size_t i) const { return denominators_[i]; }

    /// Numerator of coordinate i over u_i^t.
    [[nodiscard]] Integer numerator(const Integer& n, std::size_t i) const {
        return radical_inverse_numerator(n, config_.bases[i], levels_[i], t_);
    }

    [[nodiscard]] std::vector<Rational> point(const Integer& n) const {
        if (n < 0) throw Error(ErrorKind::precondition, "sequence index must be >= 0");
        std::vector<Rational> x;
        x.reserve(dimension());
        for (std::size_t i = 0; i < dimension(); ++i) {
            Rational c(numerator(n, i), denominators_[i]);
            c.canonicalize();
            x.push_back(std::move(c));
        }
        return x;
    }

    [[nodiscard]] PointSet point_set(const Integer& n0, std::size_t count) const {
        if (count < 1) throw Error(ErrorKind::precondition, "point set needs N >= 1");
        PointSet ps;
        ps.t = t_;
        ps.start_index = n0;
        ps.s = dimension();
        ps.points.reserve(count);
        Integer n = n0;
        for (std::size_t k = 0; k < count; ++k, ++n) ps.points.push_back(point(n));
        return ps;
    }

private:
    GeneratorConfig config_;
    std::size_t t_;
    std::vector<LevelTables> levels_;
    std::vector<Integer> denominators_;
};

inline std::vector<Rational> point(const GeneratorConfig& config, const Integer& n, std::size_t t) {
    return HaltonGenerator(config, t).point(n);
}

inline PointSet point_set(const GeneratorConfig& config, const Integer& n0, std::size_t count, std::size_t t) {
    return HaltonGenerator(config, t).point_set(n0, count);
}

/// Smallest t with u^t >= N, i.e. ceil(log_u N) for N >= 1.
inline std::size_t ceil_log(const Integer& N, std::int64_t u) {
    std::size_t t = 0;
    Integer p = 1;
    while (p < N) {
        p *= u;
        ++t;
    }
    return t;
}

/// max_i ceil(log_{u_i} N)
inline std::size_t default_truncation(const GeneratorConfig& config, const Integer& N) {
    std::size_t t = 1;
    for (const auto& b : config.bases) t = std::max(t, ceil_log(N, b.u));
    return t;
}

}  // namespace rbhalton
