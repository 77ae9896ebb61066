#pragma once

// Command implementations behind the composite_coder CLI. Each command maps
// a RunConfig to a FigureTable; nothing here touches argv or the filesystem.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "composite/bss.hpp"
#include "composite/channels.hpp"
#include "composite/errors.hpp"
#include "composite/gaussian.hpp"
#include "composite/hull.hpp"
#include "composite/montecarlo.hpp"
#include "composite/numeric.hpp"
#include "composite/parallel.hpp"
#include "composite/specfn.hpp"
#include "composite/table.hpp"
#include "composite/version.hpp"

namespace composite {

enum class OutputFormat { Csv, Json };

inline std::vector<double> linspace(double lo, double hi, std::size_t count) {
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) {
        out[i] = count == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(count - 1);
    }
    if (count > 1) out.back() = hi;
    return out;
}

namespace detail {

inline double parse_number(std::string_view text, std::string_view what) {
    const std::string s(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size() || !std::isfinite(v)) {
        throw ConfigError(std::string(what) + ": '" + s + "' is not a finite number");
    }
    return v;
}

inline std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace detail

/// Parses "lo:hi:count" (inclusive, evenly spaced) or "v1,v2,...".
inline std::vector<double> parse_grid(std::string_view text, std::string_view what) {
    if (text.empty()) throw ConfigError(std::string(what) + ": empty grid");
    if (text.find(':') != std::string_view::npos) {
        const auto parts = detail::split(text, ':');
        if (parts.size() != 3) throw ConfigError(std::string(what) + ": expected lo:hi:count");
        const double lo = detail::parse_number(parts[0], what);
        const double hi = detail::parse_number(parts[1], what);
        const double n = detail::parse_number(parts[2], what);
        if (n < 1 || n != std::floor(n) || n > 1e7) {
            throw ConfigError(std::string(what) + ": count must be a positive integer");
        }
        return linspace(lo, hi, static_cast<std::size_t>(n));
    }
    std::vector<double> out;
    for (auto part : detail::split(text, ',')) out.push_back(detail::parse_number(part, what));
    return out;
}

inline std::string grid_text(const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += format_number(v[i]);
    }
    return s;
}

/// Everything a command needs. Fields a command does not use are ignored.
struct RunConfig {
    // Composite BSC
    double alpha1 = 0.25;
    double alpha2 = 0.45;
    std::optional<double> p;  // region: unused; interface: defaults to 0.7
    double b = 2.0;
    std::size_t grid = 201;
    std::vector<double> p_grid = linspace(0.0, 1.0, 101);

    // Rayleigh system
    double sigma2 = 1.0;
    double gamma_bar = 1.0;
    std::vector<double> power = linspace(0.25, 8.0, 20);

    // Monte Carlo
    std::uint64_t seed = 1;
    std::size_t trials = 200;
    std::vector<std::size_t> blocklength;  // empty: per-experiment default
    std::vector<double> rate;              // empty: per-experiment default
    double beta = 0.1;
    double rate_fraction = 0.8;

    // Self-check mutation hook: shifts every reference value.
    double perturb = 0.0;

    OutputFormat format = OutputFormat::Csv;
};

namespace detail {

inline void require_grid(const std::vector<double>& g, const char* what) {
    if (g.size() < 2) throw ConfigError(std::string(what) + ": grid needs at least 2 points");
}

inline CompositeBsc make_bsc(const RunConfig& cfg, double p) {
    try {
        return CompositeBsc(cfg.alpha1, cfg.alpha2, p, cfg.b);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

inline RayleighSystem make_rayleigh(const RunConfig& cfg, double power) {
    try {
        return RayleighSystem(cfg.sigma2, power, cfg.gamma_bar);
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }
}

inline void require_bsc_grid(const RunConfig& cfg) {
    if (cfg.grid < 2) throw ConfigError("grid: needs at least 2 points");
    if (cfg.grid > 5000) throw ConfigError("grid: at most 5000 points per axis");
}

// Metadata common to every table: the canonical parameters, a command line
// rebuilt from them, their hash and the library version.
inline void stamp(FigureTable& t, std::string_view command, nlohmann::ordered_json params) {
    std::string line = "composite_coder " + std::string(command);
    for (auto it = params.begin(); it != params.end(); ++it) {
        line += " --" + it.key() + ' ';
        if (it->is_string()) {
            line += it->get<std::string>();
        } else if (it->is_number_float()) {
            line += format_number(it->get<double>());
        } else {
            line += it->dump();
        }
    }
    nlohmann::ordered_json meta = nlohmann::ordered_json::object();
    meta["command"] = command;
    meta["command_line"] = line;
    meta["parameters"] = params;
    meta["config_hash"] = fnv1a_hex(std::string(command) + params.dump());
    meta["version"] = kVersion;
    for (auto it = t.metadata.begin(); it != t.metadata.end(); ++it) meta[it.key()] = *it;
    t.metadata = std::move(meta);
}

inline nlohmann::ordered_json bsc_params(const RunConfig& cfg) {
    nlohmann::ordered_json j;
    j["alpha1"] = format_number(cfg.alpha1);
    j["alpha2"] = format_number(cfg.alpha2);
    j["b"] = format_number(cfg.b);
    return j;
}

inline std::pair<Cell, Cell> scheme_params(const SchemeEvaluation& e) {
    switch (e.scheme) {
        case BssScheme::Broadcast:
        case BssScheme::Shannon:
        case BssScheme::Outage: return {e.param("beta"), std::monostate{}};
        case BssScheme::ResidueSplitting: return {e.param("beta"), e.param("rho")};
        case BssScheme::SystematicGood:
        case BssScheme::SystematicBad: return {e.param("dc"), e.param("wz_rate")};
    }
    return {std::monostate{}, std::monostate{}};
}

inline nlohmann::ordered_json param_names() {
    return {{"broadcast", {"beta"}},
            {"shannon", {"beta"}},
            {"outage", {"beta"}},
            {"residue_splitting", {"beta", "rho"}},
            {"systematic_good", {"dc", "wz_rate"}},
            {"systematic_bad", {"dc", "wz_rate"}}};
}

inline nlohmann::ordered_json pairs_json(const std::vector<DistortionPair>& pts) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : pts) arr.push_back({std::stod(format_number(v.d1)), std::stod(format_number(v.d2))});
    return arr;
}

inline nlohmann::ordered_json staircase_json(const std::vector<std::pair<double, double>>& s) {
    auto arr = nlohmann::ordered_json::array();
    for (const auto& [k, d] : s) arr.push_back({std::stod(format_number(k)), std::stod(format_number(d))});
    return arr;
}

}  // namespace detail

/// Expected distortion of uncoded, outage-separation and broadcast-separation
/// transmission over the power grid.
inline FigureTable cmd_gaussian_compare(const RunConfig& cfg) {
    detail::require_grid(cfg.power, "power");
    std::vector<std::array<double, 3>> vals(cfg.power.size());
    for (double P : cfg.power) detail::make_rayleigh(cfg, P);
    parallel_for(cfg.power.size(), [&](std::size_t i) {
        const auto r = gaussian_schemes(RayleighSystem(cfg.sigma2, cfg.power[i], cfg.gamma_bar));
        vals[i] = {r[0].expected_distortion, r[1].expected_distortion, r[2].expected_distortion};
    });
    FigureTable t;
    t.columns = {"P", "De_uncoded", "De_outage_sep", "De_broadcast"};
    for (std::size_t i = 0; i < vals.size(); ++i) {
        t.add_row({cfg.power[i], vals[i][0], vals[i][1], vals[i][2]});
    }
    auto params = nlohmann::ordered_json::object();
    params["sigma2"] = format_number(cfg.sigma2);
    params["gamma-bar"] = format_number(cfg.gamma_bar);
    params["power"] = grid_text(cfg.power);
    detail::stamp(t, "gaussian-compare", std::move(params));
    return t;
}

/// Every (D1, D2) pair of every scheme family, flagged against the
/// residue-splitting hull.
inline FigureTable cmd_bss_region(const RunConfig& cfg) {
    detail::require_bsc_grid(cfg);
    const auto ch = detail::make_bsc(cfg, cfg.p.value_or(0.5));
    std::vector<SchemeEvaluation> all;
    for (BssScheme fam : {BssScheme::Shannon, BssScheme::Outage, BssScheme::Broadcast,
                          BssScheme::ResidueSplitting, BssScheme::SystematicGood, BssScheme::SystematicBad}) {
        auto part = scheme_sweep(ch, fam, cfg.grid);
        all.insert(all.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    std::vector<SchemeEvaluation> rs, bc;
    for (const auto& e : all) {
        if (e.scheme == BssScheme::ResidueSplitting) rs.push_back(e);
        if (e.scheme == BssScheme::Broadcast) bc.push_back(e);
    }
    const auto rs_hull = pareto_lower_hull(distortion_pairs(rs));
    const auto bc_hull = pareto_lower_hull(distortion_pairs(bc));

    FigureTable t;
    t.columns = {"scheme", "param1", "param2", "D1", "D2", "on_hull"};
    constexpr double kOnHullTol = 1e-9;
    auto excess = nlohmann::ordered_json::object();
    for (const auto& e : all) {
        const double ex = hull_excess(rs_hull, e.pair());
        const auto [p1, p2] = detail::scheme_params(e);
        t.add_row({std::string(to_string(e.scheme)), p1, p2, e.d1, e.d2, std::abs(ex) <= kOnHullTol});
        if (e.scheme == BssScheme::SystematicGood || e.scheme == BssScheme::SystematicBad) {
            excess[std::string(to_string(e.scheme))] = std::stod(format_number(ex));
        }
    }
    t.metadata["param_names"] = detail::param_names();
    t.metadata["residue_splitting_hull"] = detail::pairs_json(rs_hull);
    t.metadata["broadcast_hull"] = detail::pairs_json(bc_hull);
    t.metadata["systematic_hull_excess"] = excess;
    auto params = detail::bsc_params(cfg);
    params["grid"] = cfg.grid;
    detail::stamp(t, "bss-region", std::move(params));
    return t;
}

/// Best expected distortion of each family versus the bad-state probability.
inline FigureTable cmd_bss_frontier(const RunConfig& cfg) {
    detail::require_bsc_grid(cfg);
    detail::require_grid(cfg.p_grid, "p-grid");
    for (double p : cfg.p_grid) {
        if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("p-grid: values must lie in [0, 1]");
    }
    const auto ch = detail::make_bsc(cfg, 0.5);
    const auto fr = expected_distortion_frontier(ch, cfg.p_grid, cfg.grid);

    // FrontierRow stores families in kFrontierFamilies order.
    auto slot = [](BssScheme s) {
        for (std::size_t f = 0; f < kFrontierFamilies.size(); ++f) {
            if (kFrontierFamilies[f] == s) return f;
        }
        return std::size_t{0};
    };
    FigureTable t;
    t.columns = {"p", "De_broadcast", "De_residue", "De_sys_good", "De_sys_bad", "best_scheme"};
    for (const auto& r : fr.rows) {
        t.add_row({r.p, r.family_min[slot(BssScheme::Broadcast)], r.family_min[slot(BssScheme::ResidueSplitting)],
                   r.family_min[slot(BssScheme::SystematicGood)], r.family_min[slot(BssScheme::SystematicBad)],
                   std::string(to_string(r.best))});
    }
    auto cross = nlohmann::ordered_json::array();
    for (const auto& c : fr.crossovers) {
        nlohmann::ordered_json j;
        j["p"] = std::stod(format_number(c.p));
        j["below"] = to_string(c.below);
        j["above"] = to_string(c.above);
        cross.push_back(std::move(j));
    }
    t.metadata["crossovers"] = std::move(cross);
    auto params = detail::bsc_params(cfg);
    params["grid"] = cfg.grid;
    params["p-grid"] = grid_text(cfg.p_grid);
    detail::stamp(t, "bss-frontier", std::move(params));
    return t;
}

/// Interface complexity versus expected distortion at one state probability.
inline FigureTable cmd_bss_interface(const RunConfig& cfg) {
    detail::require_bsc_grid(cfg);
    const double p = cfg.p.value_or(0.7);
    const auto ch = detail::make_bsc(cfg, p);
    const auto series = interface_tradeoff(ch, p, cfg.grid);
    FigureTable t;
    t.columns = {"scheme", "param1", "param2", "Kt", "Kr", "De"};
    auto stairs = nlohmann::ordered_json::object();
    for (const auto& s : series) {
        for (const auto& e : s.points) {
            const auto [p1, p2] = detail::scheme_params(e);
            t.add_row({std::string(to_string(e.scheme)), p1, p2, e.kt, e.kr, e.expected});
        }
        nlohmann::ordered_json j;
        j["kt"] = detail::staircase_json(s.kt_staircase);
        j["kr"] = detail::staircase_json(s.kr_staircase);
        stairs[std::string(to_string(s.scheme))] = std::move(j);
    }
    t.metadata["param_names"] = detail::param_names();
    t.metadata["staircases"] = std::move(stairs);
    auto params = detail::bsc_params(cfg);
    params["p"] = format_number(p);
    params["grid"] = cfg.grid;
    detail::stamp(t, "bss-interface", std::move(params));
    return t;
}

enum class McExperiment { UncodedBsc, UncodedGaussian, Quantizer, Msvq, SuperpositionBc };

inline std::string_view to_string(McExperiment e) {
    switch (e) {
        case McExperiment::UncodedBsc: return "uncoded-bsc";
        case McExperiment::UncodedGaussian: return "uncoded-gaussian";
        case McExperiment::Quantizer: return "quantizer";
        case McExperiment::Msvq: return "msvq";
        case McExperiment::SuperpositionBc: return "superposition-bc";
    }
    return "?";
}

inline McExperiment parse_experiment(std::string_view name) {
    for (auto e : {McExperiment::UncodedBsc, McExperiment::UncodedGaussian, McExperiment::Quantizer,
                   McExperiment::Msvq, McExperiment::SuperpositionBc}) {
        if (to_string(e) == name) return e;
    }
    throw ConfigError("unknown experiment '" + std::string(name) +
                      "' (uncoded-bsc, uncoded-gaussian, quantizer, msvq, superposition-bc)");
}

/// Channel family an experiment draws its parameters from.
inline bool experiment_is_gaussian(McExperiment e) { return e == McExperiment::UncodedGaussian; }

namespace detail {

// |mean - target| within three standard errors (sigma = half-width / 1.96).
inline double three_sigma(const TrialReport& r) { return 3.0 * r.half_width_95 / 1.96; }

inline std::vector<std::size_t> default_blocklengths(McExperiment e) {
    switch (e) {
        case McExperiment::UncodedBsc:
        case McExperiment::UncodedGaussian: return {1000};
        case McExperiment::Quantizer: return {16, 24};
        case McExperiment::Msvq: return {16, 32};
        case McExperiment::SuperpositionBc: return {64, 128, 256};
    }
    return {1000};
}

inline std::vector<double> default_rates(McExperiment e) {
    if (e == McExperiment::Msvq) return {0.25};
    return {0.25, 0.5, 0.75};
}

}  // namespace detail

/// Monte Carlo check of one explicit construction against its analytic target.
/// Columns: experiment, statistic, blocklength, param, mean, half_width_95,
/// target, pass.
inline FigureTable cmd_mc(const RunConfig& cfg, McExperiment exp) {
    if (cfg.trials < 2) throw ConfigError("trials: need at least 2 for a confidence interval");
    const auto lengths = cfg.blocklength.empty() ? detail::default_blocklengths(exp) : cfg.blocklength;
    const auto rates = cfg.rate.empty() ? detail::default_rates(exp) : cfg.rate;
    for (auto n : lengths) {
        if (n < 1) throw ConfigError("blocklength: must be >= 1");
    }
    for (double r : rates) {
        if (!(r >= 0.0)) throw ConfigError("rate: must be >= 0");
    }

    FigureTable t;
    t.columns = {"experiment", "statistic", "blocklength", "param", "mean", "half_width_95", "target", "pass"};
    const std::string name(to_string(exp));
    auto row = [&](std::string stat, std::size_t n, double param, const TrialReport& r, double target,
                   std::string verdict) {
        t.add_row({name, std::move(stat), static_cast<double>(n), param, r.mean, r.half_width_95, target,
                   std::move(verdict)});
    };
    auto verdict = [](bool ok) { return std::string(ok ? "pass" : "fail"); };

    auto params = nlohmann::ordered_json::object();
    params["seed"] = cfg.seed;
    params["trials"] = cfg.trials;
    {
        std::string bl;
        for (std::size_t i = 0; i < lengths.size(); ++i) bl += (i ? "," : "") + std::to_string(lengths[i]);
        params["blocklength"] = bl;
    }

    switch (exp) {
        case McExperiment::UncodedBsc: {
            detail::make_bsc(cfg, 0.5);
            for (auto n : lengths) {
                for (double a : {cfg.alpha1, cfg.alpha2}) {
                    const auto r = simulate_uncoded_bsc({n, cfg.trials, cfg.seed}, a);
                    row("distortion", n, a, r, a, verdict(std::abs(r.mean - a) <= detail::three_sigma(r)));
                }
            }
            params["alpha1"] = format_number(cfg.alpha1);
            params["alpha2"] = format_number(cfg.alpha2);
            break;
        }
        case McExperiment::UncodedGaussian: {
            for (double P : cfg.power) detail::make_rayleigh(cfg, P);
            for (auto n : lengths) {
                for (double P : cfg.power) {
                    const RayleighSystem sys(cfg.sigma2, P, cfg.gamma_bar);
                    const double target = uncoded_state_distortion(sys, cfg.gamma_bar);
                    const auto r = simulate_uncoded_gaussian({n, cfg.trials, cfg.seed}, sys, cfg.gamma_bar);
                    row("mse", n, P, r, target, verdict(std::abs(r.mean - target) <= detail::three_sigma(r)));
                }
            }
            params["sigma2"] = format_number(cfg.sigma2);
            params["gamma-bar"] = format_number(cfg.gamma_bar);
            params["power"] = grid_text(cfg.power);
            break;
        }
        case McExperiment::Quantizer: {
            for (auto n : lengths) {
                for (double R : rates) codebook_size(n, R, "quantizer");
            }
            for (auto n : lengths) {
                for (double R : rates) {
                    const double target = bss_distortion_rate(R);
                    const auto r = simulate_random_quantizer({n, cfg.trials, cfg.seed}, R);
                    row("distortion", n, R, r, target, verdict(r.mean >= target - detail::three_sigma(r)));
                }
            }
            params["rate"] = grid_text(rates);
            break;
        }
        case McExperiment::Msvq: {
            for (auto n : lengths) {
                for (double R : rates) {
                    codebook_size(n, R, "msvq base");
                    codebook_size(n, R, "msvq refinement");
                }
            }
            for (auto n : lengths) {
                for (double R : rates) {
                    const auto r = simulate_msvq({n, cfg.trials, cfg.seed}, R, R);
                    const double base_target = bss_distortion_rate(R);
                    const double fine_target = bss_distortion_rate(2.0 * R);
                    row("base", n, R, r.base, base_target,
                        verdict(r.base.mean >= base_target - detail::three_sigma(r.base)));
                    row("refined", n, R, r.refined, fine_target,
                        verdict(r.refined.mean <= r.base.mean + detail::three_sigma(r.refined) &&
                                r.refined.mean >= fine_target - detail::three_sigma(r.refined)));
                }
            }
            params["rate"] = grid_text(rates);
            break;
        }
        case McExperiment::SuperpositionBc: {
            const auto ch = detail::make_bsc(cfg, 0.5);
            if (!(cfg.beta > 0.0 && cfg.beta <= 0.5)) throw ConfigError("beta: must lie in (0, 1/2]");
            if (!(cfg.rate_fraction > 0.0 && cfg.rate_fraction <= 1.0)) {
                throw ConfigError("rate-fraction: must lie in (0, 1]");
            }
            const auto edge = bsc_bc_rate_region(ch, cfg.beta);
            const RatePair rp{BitsRate(cfg.rate_fraction * edge.r1), BitsRate(cfg.rate_fraction * edge.r2)};
            for (auto m : lengths) {
                codebook_size(m, rp.r1, "superposition cloud codebook");
                codebook_size(m, rp.r2, "superposition base codebook");
            }
            const double nan = std::numeric_limits<double>::quiet_NaN();
            auto diag = nlohmann::ordered_json::array();
            std::optional<SuperpositionReport> prev;
            for (auto m : lengths) {
                const auto r = simulate_superposition_bc({m, cfg.trials, cfg.seed}, ch, cfg.beta, rp);
                // No finite-length target; the check is that errors fall with m.
                const auto trend = [&](double now, double before) {
                    return prev ? verdict(now < before) : std::string("n/a");
                };
                row("block_error_state1", m, cfg.beta, r.err_state1, nan,
                    trend(r.err_state1.mean, prev ? prev->err_state1.mean : 0.0));
                row("block_error_state2", m, cfg.beta, r.err_state2, nan,
                    trend(r.err_state2.mean, prev ? prev->err_state2.mean : 0.0));
                nlohmann::ordered_json d;
                d["blocklength"] = m;
                d["base_codewords"] = r.base_codewords;
                d["cloud_codewords"] = r.cloud_codewords;
                d["radius_miss_state1"] = r.radius_miss_state1;
                d["radius_miss_state2"] = r.radius_miss_state2;
                diag.push_back(std::move(d));
                prev = r;
            }
            t.metadata["rates"] = {std::stod(format_number(rp.r1)), std::stod(format_number(rp.r2))};
            t.metadata["diagnostics"] = std::move(diag);
            auto bp = detail::bsc_params(cfg);
            for (auto it = bp.begin(); it != bp.end(); ++it) params[it.key()] = *it;
            params["beta"] = format_number(cfg.beta);
            params["rate-fraction"] = format_number(cfg.rate_fraction);
            break;
        }
    }
    detail::stamp(t, "mc " + name, std::move(params));
    return t;
}

struct SelfcheckResult {
    FigureTable table;
    bool ok = true;
};

/// Identity and closed-form-versus-numeric checks. Each row compares a
/// library value with an independently computed reference.
inline SelfcheckResult cmd_selfcheck(const RunConfig& cfg) {
    SelfcheckResult res;
    auto& t = res.table;
    t.columns = {"check", "value", "reference", "error", "tolerance", "relative", "status"};
    auto check = [&](std::string name, double value, double reference, double tol, bool relative) {
        reference += cfg.perturb * std::max(1.0, std::abs(reference));
        double err = std::abs(value - reference);
        if (relative) err /= std::max(std::abs(reference), std::numeric_limits<double>::min());
        const bool ok = err <= tol;
        res.ok = res.ok && ok;
        t.add_row({std::move(name), value, reference, err, tol, relative, std::string(ok ? "pass" : "fail")});
    };
    auto worst = [](auto&& f, const std::vector<double>& xs) {
        // Returns (value, reference) at the point of largest relative gap.
        std::pair<double, double> out{0.0, 0.0};
        double gap = -1.0;
        for (double x : xs) {
            const auto [v, r] = f(x);
            const double g = std::abs(v - r) / std::max(std::abs(r), std::numeric_limits<double>::min());
            if (g > gap) {
                gap = g;
                out = {v, r};
            }
        }
        return out;
    };
    std::vector<double> logz;
    for (int k = -60; k <= 60; ++k) logz.push_back(std::pow(10.0, k / 10.0));
    const std::vector<double> snrs = {0.5, 1.0, 2.0, 5.0};

    {
        auto [v, r] = worst([](double z) {
            const double w = lambert_w(z);
            return std::pair{w * std::exp(w), z};
        }, logz);
        check("lambert_w_roundtrip", v, r, 1e-12, true);
    }
    check("lambert_w_omega_constant", lambert_w(1.0), 0.567143290409783873, 1e-15, false);
    {
        std::vector<double> xs = linspace(0.05, 20.0, 40);
        auto [v, r] = worst([](double x) {
            const double q = integrate([](double s) { return std::exp(-s) / s; }, x,
                                       std::numeric_limits<double>::infinity(), 1e-13);
            return std::pair{exp_integral(x), q};
        }, xs);
        check("exp_integral_vs_quadrature", v, r, 1e-9, true);
    }
    check("exp_integral_at_one", exp_integral(1.0), 0.219383934395520274, 1e-15, false);
    check("exp_integral_branch_join", detail::expint_series(1.0), std::exp(-1.0) * detail::expint_cf_scaled(1.0),
          1e-13, true);
    {
        double err = 0.0;
        for (double p : linspace(1e-6, 0.5, 2001)) err = std::max(err, std::abs(inverse_binary_entropy(binary_entropy(p)) - p));
        check("entropy_inverse_roundtrip", err, 0.0, 1e-9, false);
    }
    check("bss_distortion_rate_half", bss_distortion_rate(0.5), 0.110027864438359, 1e-12, false);
    {
        auto [v, r] = worst([](double x) {
            const RayleighSystem sys(1.0, x, 1.0);
            return std::pair{optimal_outage_for_distortion(sys).q.value(), minimize_outage_separation(sys).q.value()};
        }, snrs);
        check("outage_q_distortion_closed_vs_numeric", v, r, 1e-6, false);
    }
    {
        auto [v, r] = worst([](double x) {
            const RayleighSystem sys(1.0, x, 1.0);
            const auto m = minimize_scalar([&](double q) { return -outage_capacity_rayleigh(sys, q).value(); }, 0.0,
                                           1.0 - 1e-12, 1e-12, 4096);
            return std::pair{optimal_outage_for_capacity(sys).value(), m.argmin};
        }, snrs);
        check("outage_q_capacity_closed_vs_numeric", v, r, 1e-6, false);
    }
    {
        auto [v, r] = worst([](double x) {
            const RayleighSystem sys(1.0, x, 1.0);
            const double q = integrate([&](double g) { return sys.fading_pdf(g) / (1.0 + sys.power() * g); }, 0.0,
                                       std::numeric_limits<double>::infinity(), 1e-13);
            return std::pair{uncoded_expected_distortion(sys), q};
        }, snrs);
        check("uncoded_distortion_closed_vs_quadrature", v, r, 1e-8, true);
    }
    {
        // Along the optimal profile the layered rate satisfies
        // R(g) = ln(g / g_P) - (g - g_P) / (2 gbar).
        auto [v, r] = worst([](double x) {
            const RayleighSystem sys(1.0, x, 1.0);
            const auto prof = optimal_power_profile(sys);
            const double g = 0.5 * (prof.support_lo + prof.support_hi);
            const double closed = std::log(g / prof.support_lo) - (g - prof.support_lo) / 2.0;
            return std::pair{bc_rate_profile(prof, g).value(), closed};
        }, snrs);
        check("broadcast_rate_profile_closed_form", v, r, 1e-8, true);
    }
    {
        const RayleighSystem sys(1.0, 1.0, 1.0);
        check("broadcast_distortion_vs_layered_optimum", bc_expected_distortion(sys),
              layered_broadcast_optimum(sys, 64).expected_distortion, 1e-2, true);
    }
    {
        const WynerZivCurve wz(0.25);
        const double dc = wz.dc();
        const double left = wz.rate(dc * (1.0 - 1e-12));
        const double right = wz.rate(std::min(0.25, dc * (1.0 + 1e-12)));
        check("wyner_ziv_continuity_at_turning_point", left, right, 1e-9, false);
    }
    check("binary_convolution_with_half", binary_convolve(0.17, 0.5), 0.5, 1e-15, false);

    auto params = nlohmann::ordered_json::object();
    if (cfg.perturb != 0.0) params["perturb"] = format_number(cfg.perturb);
    detail::stamp(t, "selfcheck", std::move(params));
    return res;
}

}  // namespace composite
