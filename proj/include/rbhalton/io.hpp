#pragma once

// File formats: JSON generator configs and permutation specs, point-set CSV,
// witness reports and growth tables.

#include "rbhalton/witness.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

namespace rbhalton {

using json = nlohmann::json;

// ---- permutation specs and configs ----------------------------------------

inline json to_json(const PermutationSpec& spec) {
    if (!spec.serializable()) throw Error(ErrorKind::io, "provider-backed permutation specs cannot be serialized");
    auto tables = [](const std::vector<Permutation>& ps) {
        json arr = json::array();
        for (const auto& p : ps) arr.push_back(p.table());
        return arr;
    };
    return json{{"u", spec.base_size()}, {"preperiod", tables(spec.preperiod())}, {"period", tables(spec.period())}};
}

inline PermutationSpec permutation_spec_from_json(const json& j) {
    try {
        const int u = j.at("u").get<int>();
        auto tables = [&](const char* key) {
            std::vector<Permutation> out;
            if (j.contains(key))
                for (const auto& t : j.at(key)) out.emplace_back(t.get<std::vector<int>>());
            return out;
        };
        return PermutationSpec(u, tables("preperiod"), tables("period"));
    } catch (const json::exception& e) {
        throw Error(ErrorKind::bad_config, std::string("malformed permutation spec: ") + e.what());
    }
}

inline json to_json(const GeneratorConfig& c) {
    json bases = json::array();
    json perms = json::array();
    for (const auto& b : c.bases) bases.push_back({{"u", b.u}, {"v", b.v}});
    for (const auto& p : c.specs) perms.push_back(to_json(p));
    return json{{"s", c.dimension()}, {"bases", bases}, {"perms", perms}};
}

/// {"s": int, "bases": [{"u":..,"v":..}], "perms": [spec...]}; omitted perms mean identity.
inline GeneratorConfig config_from_json(const json& j) {
    GeneratorConfig c;
    try {
        for (const auto& b : j.at("bases")) c.bases.emplace_back(b.at("u").get<std::int64_t>(), b.value("v", std::int64_t{1}));
        if (j.contains("perms")) {
            for (const auto& p : j.at("perms")) c.specs.push_back(permutation_spec_from_json(p));
        } else {
            for (const auto& b : c.bases) c.specs.push_back(PermutationSpec::identity(static_cast<int>(b.u)));
        }
        if (j.contains("s") && j.at("s").get<std::size_t>() != c.bases.size())
            throw Error(ErrorKind::bad_config, "config field s does not match the number of bases");
    } catch (const json::exception& e) {
        throw Error(ErrorKind::bad_config, std::string("malformed config: ") + e.what());
    }
    require_valid(c);
    return c;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::io, path + ": " + e.what());
    }
}

inline GeneratorConfig load_config(const std::string& path) { return config_from_json(read_json_file(path)); }

// ---- point-set CSV ---------------------------------------------------------

/// Decimal rendering with 17 significant digits.
inline std::string decimal(const Rational& x) {
    std::ostringstream os;
    os << std::setprecision(17) << x.get_d();
    return os.str();
}

inline void write_points_csv(std::ostream& out, const PointSet& ps, bool as_float = false) {
    for (std::size_t d = 0; d < ps.s; ++d) out << (d ? "," : "") << "x" << (d + 1);
    out << '\n';
    for (const auto& p : ps.points) {
        for (std::size_t d = 0; d < p.size(); ++d) out << (d ? "," : "") << (as_float ? decimal(p[d]) : to_string(p[d]));
        out << '\n';
    }
}

/// Reads "p/q" or decimal cells; a first row starting with a letter is a header.
inline PointSet read_points_csv(std::istream& in) {
    PointSet ps;
    ps.t = 0;
    std::string line;
    bool first = true;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (first) {
            first = false;
            auto pos = line.find_first_not_of(" \t");
            if (std::isalpha(static_cast<unsigned char>(line[pos]))) continue;
        }
        std::vector<Rational> row;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) {
            try {
                row.push_back(parse_rational(cell));
            } catch (const Error& e) {
                throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": " + e.what());
            }
        }
        if (!ps.points.empty() && row.size() != ps.s)
            throw Error(ErrorKind::io, "line " + std::to_string(lineno) + ": expected " + std::to_string(ps.s) + " columns");
        ps.s = row.size();
        ps.points.push_back(std::move(row));
    }
    if (ps.points.empty()) throw Error(ErrorKind::io, "point CSV holds no points");
    return ps;
}

inline PointSet read_points_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::io, "cannot open " + path);
    return read_points_csv(in);
}

// ---- witness report --------------------------------------------------------

inline const char* mode_name(WitnessMode::Kind k) {
    switch (k) {
        case WitnessMode::Kind::automatic: return "auto";
        case WitnessMode::Kind::level: return "level";
        default: return "manual";
    }
}

inline json to_json(const WitnessReport& r) {
    const auto& p = r.params;
    auto strs = [](const auto& v) {
        json a = json::array();
        for (const auto& x : v) {
            if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>) a.push_back(to_string(x));
            else a.push_back(x.get_str());
        }
        return a;
    };
    json params{
        {"config", to_json(p.config)},
        {"mode", mode_name(p.mode)},
        {"fell_back_to_manual", p.fell_back_to_manual},
        {"u_tilde", strs(p.u_tilde)},
        {"alpha", p.alpha},
        {"beta", p.beta},
        {"tau", p.tau},
        {"tau0", p.tau0},
        {"u0", p.u0},
        {"b", p.b},
        {"m", p.m},
        {"ksets", p.ksets},
        {"t", p.t},
        {"tau_conditions_hold", p.tau_conditions_hold},
    };
    params["N"] = p.N ? json(p.N->get_str()) : json(nullptr);
    params["T"] = p.T ? json(*p.T) : json(nullptr);
    json threshold{{"exponent", p.threshold.exponent.get_str()},
                   {"base", p.u0},
                   {"log10", p.threshold.log10_value},
                   {"status", "symbolic-only"}};
    threshold["n_exceeds"] = p.threshold.n_exceeds ? json(*p.threshold.n_exceeds) : json(nullptr);
    params["threshold"] = threshold;

    json table = json::array();
    for (const auto& e : r.a_table) table.push_back({{"j", e.j}, {"ubar", e.ubar.get_str()}, {"A", e.A.get_str()}});
    json verdicts = json::array();
    for (const auto& v : r.verdicts)
        verdicts.push_back({{"name", v.name}, {"inequality", v.inequality}, {"status", to_string(v.status)}, {"detail", v.detail}});

    json out{
        {"params", params},
        {"y", strs(r.y)},
        {"ubar_m", r.ubar_m.get_str()},
        {"w_m", r.w_m.get_str()},
        {"vbar_m", strs(r.vbar_m)},
        {"a_table", table},
        {"a_table_truncated", r.a_table_truncated},
        {"alpha_m", to_string(r.alpha_m)},
        {"alpha_m_float", r.alpha_m.get_d()},
        {"bound_rhs", to_string(r.bound_rhs)},
        {"C", r.C},
        {"verdicts", verdicts},
        {"all_passed", r.all_passed()},
    };
    out["w_m_scan"] = r.w_m_scan ? json(r.w_m_scan->get_str()) : json(nullptr);
    out["c"] = r.c ? json(r.c->get_str()) : json(nullptr);
    out["alpha_m_bruteforce"] = r.alpha_m_bruteforce ? json(to_string(*r.alpha_m_bruteforce)) : json(nullptr);
    out["C_log_s_N"] = r.C_log_s_N ? json(*r.C_log_s_N) : json(nullptr);
    out["sup_window_discrepancy"] = r.sup_window_discrepancy ? json(to_string(*r.sup_window_discrepancy)) : json(nullptr);
    out["sup_prefix_discrepancy"] = r.sup_prefix_discrepancy ? json(to_string(*r.sup_prefix_discrepancy)) : json(nullptr);
    return out;
}

inline void write_summary(std::ostream& os, const WitnessReport& r) {
    const auto& p = r.params;
    os << "witness (" << mode_name(p.mode) << (p.fell_back_to_manual ? ", fell back to manual m" : "") << ")\n";
    os << "  bases:";
    for (const auto& b : p.config.bases) os << ' ' << b.str();
    os << "\n  tau:";
    for (auto t : p.tau) os << ' ' << t;
    os << "  b:";
    for (auto b : p.b) os << ' ' << b;
    os << "  m=" << p.m << "  t=" << p.t;
    if (p.T) os << "  T=" << *p.T;
    os << "\n  Ubar_m=" << r.ubar_m.get_str() << "  w_m=" << r.w_m.get_str() << '\n';
    os << "  alpha_m=" << to_string(r.alpha_m) << " (~" << decimal(r.alpha_m) << ")  m^s/(4 prod u)=" << to_string(r.bound_rhs)
       << '\n';
    os << "  admissible-N threshold: " << p.u0 << "^" << p.threshold.exponent.get_str() << " (~1e"
       << static_cast<long long>(p.threshold.log10_value) << "), symbolic only";
    if (p.threshold.n_exceeds) os << "; N " << (*p.threshold.n_exceeds ? "exceeds" : "is below") << " it";
    os << '\n';
    for (const auto& v : r.verdicts) {
        os << "  [" << to_string(v.status) << "] " << v.name << ": " << v.inequality;
        if (!v.detail.empty()) os << "  (" << v.detail << ")";
        os << '\n';
    }
}

// ---- growth table ----------------------------------------------------------

inline void write_growth_csv(std::ostream& out, const std::vector<GrowthRow>& rows, bool as_float = false) {
    out << "N,D_star,ratio\n";
    for (const auto& r : rows) {
        std::ostringstream ratio;
        ratio << std::setprecision(12) << r.ratio;
        out << r.N << ',' << (as_float ? decimal(r.discrepancy) : to_string(r.discrepancy)) << ',' << ratio.str() << '\n';
    }
}

}  // namespace rbhalton
