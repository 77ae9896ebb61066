// composite_coder: figure data and Monte Carlo checks for source-channel
// coding over composite channels.
//
// Exit codes: 0 ok, 1 self-check failure, 2 config error, 3 numeric error,
// 4 codebook budget exceeded.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "composite/commands.hpp"

namespace {

using namespace composite;

enum Exit { kOk = 0, kSelfcheckFailed = 1, kConfig = 2, kNumeric = 3, kBudget = 4 };

struct RawOptions {
    std::string p_grid;
    std::string power;
    std::string blocklength;
    std::string rate;
    std::string format = "csv";
    std::string out;
    std::string experiment;
};

void write_table(const FigureTable& t, OutputFormat fmt, const std::string& out) {
    if (out.empty()) {
        if (fmt == OutputFormat::Json) {
            write_json(std::cout, t);
        } else {
            write_csv(std::cout, t);
        }
        return;
    }
    std::ofstream f(out, std::ios::binary);
    if (!f) throw ConfigError("cannot open output file " + out);
    if (fmt == OutputFormat::Json) {
        write_json(f, t);
    } else {
        write_csv(f, t);
        // CSV has no place for metadata; it goes next to the data.
        std::ofstream meta(out + ".meta.json", std::ios::binary);
        if (!meta) throw ConfigError("cannot open output file " + out + ".meta.json");
        meta << t.metadata.dump(2) << '\n';
    }
    if (!f) throw ConfigError("failed writing " + out);
}

void print_selfcheck(const FigureTable& t) {
    std::printf("%-44s %-22s %-22s %-10s %-8s %s\n", "check", "value", "reference", "error", "tol", "status");
    for (const auto& r : t.rows) {
        std::printf("%-44s %-22.15g %-22.15g %-10.2e %-8.0e %s\n", std::get<std::string>(r[0]).c_str(),
                    std::get<double>(r[1]), std::get<double>(r[2]), std::get<double>(r[3]), std::get<double>(r[4]),
                    std::get<std::string>(r[6]).c_str());
    }
}

std::vector<std::size_t> parse_lengths(const std::string& text) {
    std::vector<std::size_t> out;
    for (double v : parse_grid(text, "blocklength")) {
        if (v < 1 || v != std::floor(v) || v > 1e9) throw ConfigError("blocklength: positive integers only");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Source-channel coding over composite channels: figure data and Monte Carlo checks",
                 "composite_coder"};
    app.set_version_flag("--version", std::string(kVersion));
    app.set_config("--config", "", "key=value file; command-line flags take precedence");
    app.require_subcommand(1);

    RunConfig cfg;
    RawOptions raw;
    double p_value = 0.0;

    auto* o_alpha1 = app.add_option("--alpha1", cfg.alpha1, "good-state crossover probability");
    auto* o_alpha2 = app.add_option("--alpha2", cfg.alpha2, "bad-state crossover probability");
    auto* o_p = app.add_option("--p", p_value, "bad-state probability (bss-interface)");
    auto* o_b = app.add_option("--b", cfg.b, "channel uses per source symbol");
    auto* o_grid = app.add_option("--grid", cfg.grid, "parameter grid points per axis");
    auto* o_pgrid = app.add_option("--p-grid", raw.p_grid, "p sweep: lo:hi:count or v1,v2,...");
    auto* o_sigma2 = app.add_option("--sigma2", cfg.sigma2, "source variance");
    auto* o_power = app.add_option("--power", raw.power, "power: value, lo:hi:count or v1,v2,...");
    auto* o_gbar = app.add_option("--gamma-bar", cfg.gamma_bar, "mean fading power gain");
    app.add_option("--out", raw.out, "output file (default stdout)");
    app.add_option("--format", raw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--seed", cfg.seed, "Monte Carlo seed");
    app.add_option("--trials", cfg.trials, "Monte Carlo trials per point");
    app.add_option("--blocklength", raw.blocklength, "blocklengths: n or n1,n2,...");
    app.add_option("--rate", raw.rate, "quantizer rates in bits per symbol");
    app.add_option("--beta", cfg.beta, "superposition parameter (superposition-bc)");
    app.add_option("--rate-fraction", cfg.rate_fraction, "fraction of the boundary rates (superposition-bc)");

    auto* c_gauss = app.add_subcommand("gaussian-compare", "expected distortion of the Gaussian schemes vs P");
    auto* c_region = app.add_subcommand("bss-region", "achievable (D1, D2) pairs of the binary schemes");
    auto* c_frontier = app.add_subcommand("bss-frontier", "best expected distortion vs state probability");
    auto* c_iface = app.add_subcommand("bss-interface", "interface complexity vs expected distortion");
    auto* c_mc = app.add_subcommand("mc", "Monte Carlo validation of an explicit construction");
    c_mc->add_option("experiment", raw.experiment,
                     "uncoded-bsc | uncoded-gaussian | quantizer | msvq | superposition-bc")
        ->required();
    auto* c_self = app.add_subcommand("selfcheck", "special-function and closed-form agreement checks");
    c_self->add_option("--perturb", cfg.perturb, "shift every reference value (mutation test)");
    for (auto* c : {c_gauss, c_region, c_frontier, c_iface, c_mc, c_self}) c->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kConfig;
    }

    const std::vector<CLI::Option*> bsc_opts = {o_alpha1, o_alpha2, o_p, o_b, o_grid, o_pgrid};
    const std::vector<CLI::Option*> gauss_opts = {o_sigma2, o_power, o_gbar};
    auto reject = [](const std::vector<CLI::Option*>& opts, const std::string& cmd) {
        for (auto* o : opts) {
            if (o->count() > 0) {
                throw ConfigError(o->get_name() + " does not apply to " + cmd +
                                  " (one channel family per invocation)");
            }
        }
    };

    try {
        cfg.format = raw.format == "json" ? OutputFormat::Json : OutputFormat::Csv;
        if (o_p->count() > 0) cfg.p = p_value;
        if (!raw.p_grid.empty()) cfg.p_grid = parse_grid(raw.p_grid, "p-grid");
        if (o_pgrid->count() > 0 && raw.p_grid.empty()) throw ConfigError("p-grid: empty sweep");
        if (!raw.power.empty()) cfg.power = parse_grid(raw.power, "power");
        if (o_power->count() > 0 && raw.power.empty()) throw ConfigError("power: empty sweep");
        if (!raw.blocklength.empty()) cfg.blocklength = parse_lengths(raw.blocklength);
        if (!raw.rate.empty()) cfg.rate = parse_grid(raw.rate, "rate");

        FigureTable table;
        int status = kOk;
        if (c_gauss->parsed()) {
            reject(bsc_opts, "gaussian-compare");
            table = cmd_gaussian_compare(cfg);
        } else if (c_self->parsed()) {
            reject(bsc_opts, "selfcheck");
            reject(gauss_opts, "selfcheck");
            auto res = cmd_selfcheck(cfg);
            print_selfcheck(res.table);
            std::printf("%s: %zu checks\n", res.ok ? "PASS" : "FAIL", res.table.rows.size());
            if (!raw.out.empty()) write_table(res.table, cfg.format, raw.out);
            return res.ok ? kOk : kSelfcheckFailed;
        } else if (c_mc->parsed()) {
            const auto exp = parse_experiment(raw.experiment);
            const std::string name = "mc " + raw.experiment;
            if (exp == McExperiment::Quantizer || exp == McExperiment::Msvq) {
                reject(bsc_opts, name);
                reject(gauss_opts, name);
            } else if (experiment_is_gaussian(exp)) {
                reject(bsc_opts, name);
            } else {
                reject(gauss_opts, name);
            }
            table = cmd_mc(cfg, exp);
        } else {
            reject(gauss_opts, c_region->parsed() ? "bss-region" : c_frontier->parsed() ? "bss-frontier"
                                                                                        : "bss-interface");
            const auto probe = detail::make_bsc(cfg, 0.5);
            if (probe.good_state_lossless()) {
                std::fprintf(stderr,
                             "warning: b(1 - h(alpha1)) >= 1, the good state carries the source losslessly\n");
            }
            if (c_region->parsed()) {
                table = cmd_bss_region(cfg);
            } else if (c_frontier->parsed()) {
                table = cmd_bss_frontier(cfg);
            } else {
                table = cmd_bss_interface(cfg);
            }
        }
        write_table(table, cfg.format, raw.out);
        return status;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const BudgetError& e) {
        std::fprintf(stderr, "budget error: %s\n", e.what());
        return kBudget;
    } catch (const std::runtime_error& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return kNumeric;
    }
}
