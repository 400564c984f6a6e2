// rbhalton: command-line front end for rational-base Halton sequences,
// exact star discrepancy and the lower-bound witness.

#include "rbhalton/rbhalton.hpp"
#include "rbhalton/verify.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

namespace {

using namespace rbhalton;

enum ExitCode : int {
    ok = 0,
    verification_failed = 1,
    usage = 2,
    bad_config = 3,
    guardrail = 4,
    io_failure = 5,
};

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::guardrail: return guardrail;
        case ErrorKind::io: return io_failure;
        default: return bad_config;
    }
}

const char* kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::bad_config: return "bad_config";
        case ErrorKind::guardrail: return "guardrail";
        default: return "io";
    }
}

/// Writes to the named file, or stdout when the name is empty.
class Output {
public:
    explicit Output(const std::string& path) {
        if (!path.empty()) {
            file_ = std::make_unique<std::ofstream>(path);
            if (!*file_) throw Error(ErrorKind::io, "cannot write " + path);
        }
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }
    [[nodiscard]] bool is_file() const { return file_ != nullptr; }

private:
    std::unique_ptr<std::ofstream> file_;
};

/// "a..b" is the half-open index range [a, b).
std::pair<Integer, Integer> parse_range(const std::string& text) {
    auto dots = text.find("..");
    if (dots == std::string::npos) throw Error(ErrorKind::bad_config, "index range must look like a..b");
    try {
        Integer a(text.substr(0, dots), 10), b(text.substr(dots + 2), 10);
        if (a < 0 || b <= a) throw Error(ErrorKind::bad_config, "index range needs 0 <= a < b");
        return {a, b};
    } catch (const std::invalid_argument&) {
        throw Error(ErrorKind::bad_config, "cannot parse index range '" + text + "'");
    }
}

std::vector<std::vector<std::size_t>> load_ksets(const std::string& path) {
    const json j = read_json_file(path);
    try {
        const json& arr = j.is_object() ? j.at("k") : j;
        return arr.get<std::vector<std::vector<std::size_t>>>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::bad_config, "k-set file must hold [[k_11,...],[k_21,...]] or {\"k\": ...}: " + std::string(e.what()));
    }
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            out.push_back(std::stoi(cell));
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::bad_config, "cannot parse integer list '" + text + "'");
        }
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized Halton sequences in rational bases: generation, exact star discrepancy, lower-bound witness"};
    app.require_subcommand(1);
    std::string guardrail_text;
    app.add_option("--guardrail", guardrail_text, "limits 'cells[,enumeration]' (overrides RB_QMC_GUARDRAIL)");

    // expand
    auto* expand = app.add_subcommand("expand", "formal u/v-adic digits of an integer (lowest order first)");
    std::string z_text, base_text = "3/2";
    std::size_t digit_count = 8;
    bool show_remainders = false;
    expand->add_option("--z", z_text, "integer to expand (any sign)")->required();
    expand->add_option("--base", base_text, "rational base u/v")->capture_default_str();
    expand->add_option("--digits", digit_count, "number of digits")->capture_default_str();
    expand->add_flag("--remainders", show_remainders, "also print z_1..z_r");

    // invert
    auto* invert = app.add_subcommand("invert", "truncated radical inverse [phi(n)]_t");
    std::string n_text, perm_path;
    std::size_t level = 8;
    invert->add_option("--n", n_text, "index n >= 0")->required();
    invert->add_option("--base", base_text, "rational base u/v")->capture_default_str();
    invert->add_option("--t", level, "truncation level")->capture_default_str();
    invert->add_option("--perm", perm_path, "permutation spec JSON (default identity)");

    // points
    auto* points = app.add_subcommand("points", "write truncated points as CSV");
    std::string config_path, range_text, out_path;
    bool as_float = false;
    points->add_option("--config", config_path, "generator config JSON")->required();
    points->add_option("--n", range_text, "half-open index range a..b")->required();
    points->add_option("--t", level, "truncation level")->required();
    points->add_option("--out", out_path, "output CSV (default stdout)");
    points->add_flag("--float", as_float, "decimal instead of p/q coordinates");

    // disc
    auto* disc = app.add_subcommand("disc", "exact star discrepancy of a point CSV");
    std::string in_path;
    bool exact_flag = false;
    disc->add_option("--in", in_path, "point CSV")->required();
    auto* exact_opt = disc->add_flag("--exact", exact_flag, "print p/q and decimal (default)");
    disc->add_flag("--float", as_float, "print the decimal value only")->excludes(exact_opt);

    // witness
    auto* witness = app.add_subcommand("witness", "lower-bound witness report");
    std::string auto_n, ks_path, b_text, n_given;
    std::size_t manual_m = 0, level_T = 0, slack = 2;
    bool override_tau = false, check_disc = false;
    witness->add_option("--config", config_path, "generator config JSON")->required();
    auto* auto_opt = witness->add_option("--auto", auto_n, "derive everything from N (decimal, or 'threshold' for the admissible threshold)");
    auto* manual_opt = witness->add_option("--manual", manual_m, "number of levels m per coordinate");
    auto* level_opt = witness->add_option("--level", level_T, "derive L-sets from an explicit level T");
    auto* ks_opt = witness->add_option("--ks", ks_path, "JSON file with explicit k-sets (manual mode)");
    auto_opt->excludes(manual_opt)->excludes(level_opt)->excludes(ks_opt);
    manual_opt->excludes(level_opt);
    witness->add_flag("--override-tau", override_tau, "accept k-sets that violate the level conditions");
    witness->add_option("--b", b_text, "override b_i, comma separated");
    witness->add_option("--N", n_given, "N for the window and constant checks in manual/level mode");
    witness->add_option("--slack", slack, "t = max k + slack outside auto mode")->capture_default_str();
    witness->add_flag("--check-disc", check_disc, "also bound |alpha_m| by exact discrepancy (tiny configs)");
    witness->add_option("--out", out_path, "JSON report path (default stdout, summary to stderr)");

    // growth
    auto* growth = app.add_subcommand("growth", "N D*_N / log^s N table as CSV");
    std::size_t n_max = 256, stride = 1, n_min = 2;
    growth->add_option("--config", config_path, "generator config JSON")->required();
    growth->add_option("--n-max", n_max, "largest N")->capture_default_str();
    growth->add_option("--n-min", n_min, "smallest N")->capture_default_str();
    growth->add_option("--stride", stride, "step between N values")->capture_default_str();
    growth->add_option("--out", out_path, "output CSV (default stdout)");
    growth->add_flag("--float", as_float, "decimal D*_N column");

    // verify-lemmas
    auto* verify_cmd = app.add_subcommand("verify-lemmas", "brute-force oracle checks of the expansion and residue results");
    double max_modulus = 1e4;
    std::uint64_t seed = 1;
    verify_cmd->add_option("--max-modulus", max_modulus, "largest U_k scanned")->capture_default_str();
    verify_cmd->add_option("--seed", seed, "seed for the sampled digit prefixes")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? ok : usage;
    }

    try {
        const Limits limits = guardrail_text.empty() ? Limits::from_env() : Limits::parse(guardrail_text);
        if (*expand) {
            const auto base = RationalBase::parse(base_text);
            const Integer z(z_text, 10);
            const auto st = expand_digits(z, base, digit_count);
            for (std::size_t r = 0; r < st.size(); ++r) std::cout << (r ? "," : "") << st.digits()[r];
            if (auto len = expansion_length(z, base, digit_count)) std::cout << " (terminated at " << *len << ")\n";
            else std::cout << " (not terminated within " << digit_count << ")\n";
            if (show_remainders) {
                for (std::size_t r = 0; r < st.size(); ++r) std::cout << (r ? "," : "") << st.remainders()[r].get_str();
                std::cout << '\n';
            }
        } else if (*invert) {
            const auto base = RationalBase::parse(base_text);
            const auto spec = perm_path.empty() ? PermutationSpec::identity(static_cast<int>(base.u))
                                                : permutation_spec_from_json(read_json_file(perm_path));
            const Rational x = radical_inverse_truncated(Integer(n_text, 10), base, spec, level);
            std::cout << to_string(x) << ' ' << decimal(x) << '\n';
        } else if (*points) {
            const auto cfg = load_config(config_path);
            const auto [a, b] = parse_range(range_text);
            const auto ps = point_set(cfg, a, Integer(b - a).get_ui(), level);
            Output out(out_path);
            write_points_csv(out.stream(), ps, as_float);
        } else if (*disc) {
            const auto ps = read_points_csv(in_path);
            const Rational d = star_discrepancy(ps, limits);
            if (as_float) std::cout << decimal(d) << '\n';
            else std::cout << to_string(d) << ' ' << decimal(d) << '\n';
        } else if (*witness) {
            const auto cfg = load_config(config_path);
            WitnessMode mode;
            if (!auto_n.empty()) {
                if (auto_n == "threshold") {
                    std::int64_t u0 = 0;
                    for (const auto& b : cfg.bases) u0 = std::max(u0, b.u);
                    const auto th = detail::threshold_info(cfg, u0, std::nullopt);
                    if (th.exponent > 100000)
                        throw Error(ErrorKind::guardrail, "admissible N = " + std::to_string(u0) + "^" + th.exponent.get_str() +
                                                              " is too large to materialize");
                    mode = WitnessMode::automatic(ipow(u0, th.exponent.get_ui()) + 1);
                } else {
                    mode = WitnessMode::automatic(Integer(auto_n, 10));
                }
            } else if (*level_opt) {
                mode = WitnessMode::from_level(level_T);
            } else if (!ks_path.empty()) {
                mode = WitnessMode::manual(load_ksets(ks_path));
                if (*manual_opt) mode.m = manual_m;
            } else if (*manual_opt) {
                mode = WitnessMode::manual(manual_m);
            } else {
                throw Error(ErrorKind::bad_config, "witness needs one of --auto, --manual, --level or --ks");
            }
            if (!b_text.empty()) mode.b_override = parse_int_list(b_text);
            if (!n_given.empty() && mode.kind != WitnessMode::Kind::automatic) mode.N = Integer(n_given, 10);
            mode.override_tau = override_tau;
            mode.slack = slack;
            const auto params = derive_params(cfg, mode);
            VerifyOptions opt;
            opt.limits = limits;
            opt.check_discrepancy = check_disc;
            const auto report = verify_bound(params, opt);
            Output out(out_path);
            out.stream() << to_json(report).dump(2) << '\n';
            write_summary(out.is_file() ? std::cout : std::cerr, report);
            return report.all_passed() ? ok : verification_failed;
        } else if (*growth) {
            const auto cfg = load_config(config_path);
            const auto rows = growth_scan(cfg, n_max, stride, limits, n_min);
            Output out(out_path);
            write_growth_csv(out.stream(), rows, as_float);
        } else if (*verify_cmd) {
            bool all = true;
            for (const auto& t : verify::run_all(max_modulus, seed)) {
                std::cout << (t.ok() ? "PASS " : "FAIL ") << t.name << ": " << t.passed << " passed, " << t.failed
                          << " failed over " << t.configurations << " configurations";
                if (!t.first_failure.empty()) std::cout << " (first failure: " << t.first_failure << ")";
                std::cout << '\n';
                all = all && t.ok();
            }
            return all ? ok : verification_failed;
        }
    } catch (const Error& e) {
        std::cerr << "error[" << kind_name(e.kind()) << "]: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::invalid_argument& e) {
        std::cerr << "error[bad_config]: " << e.what() << '\n';
        return bad_config;
    }
    return ok;
}
