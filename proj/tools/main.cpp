#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cfqsim/experiments.hpp"
#include "cfqsim/montecarlo.hpp"
#include "cfqsim/protocols.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitRegression = 3;

// Flat `key = value` config with '#' comments; command-line flags win over
// config entries, config entries win over built-in defaults.
class ConfigFile {
  public:
    static ConfigFile load(const std::string& path) {
        std::ifstream in(path);
        if (!in) {
            throw std::runtime_error("cannot read config file: " + path);
        }
        ConfigFile cfg;
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) {
                line.erase(hash);
            }
            const std::string trimmed = trim(line);
            if (trimmed.empty()) {
                continue;
            }
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos) {
                throw std::runtime_error("malformed config line " +
                                         std::to_string(lineno) + ": " + trimmed);
            }
            const std::string key = trim(trimmed.substr(0, eq));
            const std::string value = trim(trimmed.substr(eq + 1));
            if (key.empty() || value.empty()) {
                throw std::runtime_error("malformed config line " +
                                         std::to_string(lineno) + ": " + trimmed);
            }
            cfg.entries_[key] = value;
        }
        return cfg;
    }

    template <typename T>
    void fill(const std::string& key, std::optional<T>& slot) const {
        if (slot.has_value()) {
            return;
        }
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return;
        }
        std::istringstream is(it->second);
        T parsed;
        is >> parsed;
        if (is.fail() || !is.eof()) {
            throw std::runtime_error("config value for '" + key +
                                     "' is not valid: " + it->second);
        }
        slot = parsed;
    }

  private:
    ConfigFile() = default;

    static std::string trim(const std::string& s) {
        const auto begin = s.find_first_not_of(" \t\r");
        if (begin == std::string::npos) {
            return {};
        }
        const auto end = s.find_last_not_of(" \t\r");
        return s.substr(begin, end - begin + 1);
    }

    std::map<std::string, std::string> entries_;
};

template <>
void ConfigFile::fill<std::string>(const std::string& key,
                                   std::optional<std::string>& slot) const {
    if (slot.has_value()) {
        return;
    }
    const auto it = entries_.find(key);
    if (it != entries_.end()) {
        slot = it->second;
    }
}

cfqsim::EmitFormat parse_format(const std::string& name) {
    if (name == "csv") {
        return cfqsim::EmitFormat::Csv;
    }
    if (name == "json") {
        return cfqsim::EmitFormat::Json;
    }
    throw std::runtime_error("format must be csv or json, got: " + name);
}

cfqsim::SlazNoise parse_slaz_noise(const std::string& name) {
    if (name == "segment") {
        return cfqsim::SlazNoise::PerSegment;
    }
    if (name == "outer") {
        return cfqsim::SlazNoise::PerOuterCycle;
    }
    throw std::runtime_error("slaz-noise must be segment or outer, got: " + name);
}

// Mask spec: `none`, `all`, or a comma-separated list of 1-based cycle
// indices like `3,7,12`.
cfqsim::NoiseMask parse_mask(const std::string& spec, int cycles) {
    cfqsim::NoiseMask mask(static_cast<std::size_t>(cycles), false);
    if (spec == "none") {
        return mask;
    }
    if (spec == "all") {
        mask.assign(mask.size(), true);
        return mask;
    }
    std::istringstream is(spec);
    std::string token;
    while (std::getline(is, token, ',')) {
        std::size_t used = 0;
        int index = 0;
        try {
            index = std::stoi(token, &used);
        } catch (const std::exception&) {
            throw std::runtime_error("malformed mask entry: " + token);
        }
        if (used != token.size() || index < 1 || index > cycles) {
            throw std::runtime_error("mask cycle index out of range: " + token);
        }
        mask[static_cast<std::size_t>(index - 1)] = true;
    }
    return mask;
}

void write_rows(std::vector<cfqsim::SweepRow> rows, cfqsim::EmitFormat format,
                const std::optional<std::string>& out_path) {
    if (out_path) {
        cfqsim::emit_file(std::move(rows), format, *out_path);
    } else {
        cfqsim::emit(std::move(rows), format, std::cout);
    }
}

void print_report(const char* title, const std::vector<cfqsim::CellDeviation>& cells,
                  const std::vector<std::string>& audit,
                  const std::vector<std::string>& violations) {
    std::cerr << title << "\n";
    for (const auto& cell : cells) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "  %-22s computed %.6f expected %.3f |dev| %.2e%s",
                      cell.cell.c_str(), cell.computed, cell.expected, cell.deviation,
                      cell.flagged ? "  FLAG" : (cell.audit ? "  audit" : ""));
        std::cerr << buf << "\n";
    }
    if (!audit.empty()) {
        std::cerr << "convention-audit cells (deviation above 2e-3, inside tolerance):\n";
        for (const auto& line : audit) {
            std::cerr << "  " << line << "\n";
        }
    }
    for (const auto& line : violations) {
        std::cerr << "VIOLATION: " << line << "\n";
    }
}

struct AnalyticArgs {
    std::optional<int> m;
    std::optional<int> n;
    std::optional<double> t;
    std::optional<std::string> format;
    std::optional<std::string> out;
};

int run_analytic(const AnalyticArgs& args) {
    const int m = args.m.value();
    const int n = args.n.value_or(320);
    std::vector<cfqsim::SweepRow> rows;
    if (args.t) {
        rows.push_back(cfqsim::SweepRow{"improved", m, std::nullopt, *args.t,
                                        std::nullopt, std::nullopt, std::nullopt,
                                        std::nullopt, cfqsim::improved_c0(m, *args.t),
                                        std::nullopt});
    }
    rows.push_back(cfqsim::SweepRow{"improved", m, std::nullopt, std::nullopt,
                                    std::nullopt, std::nullopt, std::nullopt,
                                    std::nullopt, cfqsim::improved_c1(m), std::nullopt});
    rows.push_back(cfqsim::SweepRow{"slaz", m, std::nullopt, std::nullopt,
                                    std::nullopt, std::nullopt, std::nullopt,
                                    std::nullopt, cfqsim::slaz_p1(m), std::nullopt});
    write_rows(std::move(rows), parse_format(args.format.value_or("csv")), args.out);
    const double d_improved =
        cfqsim::equivalent_distance(cfqsim::Protocol::Improved, m, 1, 1.0);
    const double d_slaz =
        cfqsim::equivalent_distance(cfqsim::Protocol::Slaz, m, n, 1.0);
    std::cerr << "equivalent distance per unit channel length: improved " << d_improved
              << ", nested baseline (N=" << n << ") " << d_slaz << "\n";
    return kExitOk;
}

struct RunArgs {
    std::optional<std::string> protocol;
    std::optional<int> m;
    std::optional<int> n;
    std::optional<std::string> bob;
    std::optional<std::string> mask;
    std::optional<double> c;
    std::optional<double> t;
    std::optional<int> module_n;
    std::optional<std::string> format;
};

int run_single(const RunArgs& args) {
    const std::string protocol = args.protocol.value();
    const int m = args.m.value();
    const std::string bob_name = args.bob.value();
    if (bob_name != "pass" && bob_name != "block") {
        throw std::runtime_error("bob must be pass or block, got: " + bob_name);
    }
    const cfqsim::BobBit bob =
        bob_name == "block" ? cfqsim::BobBit::Block : cfqsim::BobBit::Pass;
    const cfqsim::NoiseMask mask = parse_mask(args.mask.value_or("none"), m);

    cfqsim::DetectorDist dist;
    if (protocol == "improved") {
        cfqsim::ImprovedParams params(
            m, cfqsim::uniform_for_target(
                   static_cast<std::size_t>(args.module_n.value_or(1)),
                   args.t.value_or(1.0)));
        dist = cfqsim::improved_run(params, bob, mask, args.c.value_or(0.0));
    } else if (protocol == "slaz") {
        if (!args.n) {
            throw std::runtime_error("slaz runs need --N (inner-cycle count)");
        }
        dist = cfqsim::slaz_run(cfqsim::SlazParams(m, *args.n), bob, mask);
    } else {
        throw std::runtime_error("protocol must be improved or slaz, got: " + protocol);
    }

    if (std::fabs(dist.total() - 1.0) > 1e-9) {
        std::fprintf(stderr, "conservation check failed: total mass %.15g\n",
                     dist.total());
        return kExitNumeric;
    }
    const auto format = parse_format(args.format.value_or("csv"));
    if (format == cfqsim::EmitFormat::Csv) {
        std::printf("detector,mass\n");
        std::printf("D1,%.12g\n", dist.d1);
        std::printf("D2,%.12g\n", dist.d2);
        std::printf("D3_module,%.12g\n", dist.d3_module);
        std::printf("D4_bob,%.12g\n", dist.d4_bob);
        std::printf("noise_absorbed,%.12g\n", dist.noise_absorbed);
    } else {
        std::printf("{\"D1\":%.12g,\"D2\":%.12g,\"D3_module\":%.12g,"
                    "\"D4_bob\":%.12g,\"noise_absorbed\":%.12g}\n",
                    dist.d1, dist.d2, dist.d3_module, dist.d4_bob,
                    dist.noise_absorbed);
    }
    return kExitOk;
}

struct TableArgs {
    std::optional<std::string> out;
    std::optional<std::string> format;
};

int run_table1(const TableArgs& args) {
    const auto result = cfqsim::gen_table1();
    write_rows(result.rows, parse_format(args.format.value_or("csv")), args.out);
    std::vector<cfqsim::CellDeviation> cells = result.cells;
    print_report("reference-table regression report:", cells, result.audit,
                 result.violations);
    return result.violations.empty() ? kExitOk : kExitRegression;
}

int run_fig3(const TableArgs& args) {
    const auto result = cfqsim::fig3_default();
    write_rows(result.rows, parse_format(args.format.value_or("csv")), args.out);
    std::cerr << "c0 sweep: " << result.rows.size() << " rows, "
              << result.violations.size() << " shape violations\n";
    for (const auto& line : result.violations) {
        std::cerr << "VIOLATION: " << line << "\n";
    }
    return result.violations.empty() ? kExitOk : kExitRegression;
}

struct Fig4Args {
    std::optional<std::string> out;
    std::optional<std::string> format;
    std::optional<std::uint64_t> seed;
    std::optional<long long> trials;
    std::optional<int> workers;
    std::optional<std::string> slaz_noise;
};

int run_fig4(const Fig4Args& args) {
    if (!args.seed) {
        std::fprintf(stderr, "fig4 is stochastic and needs an explicit --seed\n");
        return kExitUsage;
    }
    const long long trials = args.trials.value_or(2000);
    if (trials < 1) {
        std::fprintf(stderr, "trial count must be >= 1, got %lld\n", trials);
        return kExitUsage;
    }
    cfqsim::Fig4Config config;
    config.b_grid = cfqsim::default_b_grid();
    config.trials = static_cast<std::size_t>(trials);
    config.seed = cfqsim::Seed{*args.seed};
    config.workers = args.workers.value_or(1);
    config.slaz_noise = parse_slaz_noise(args.slaz_noise.value_or("segment"));

    const auto result = cfqsim::sweep_noise(config);
    write_rows(result.rows, parse_format(args.format.value_or("csv")), args.out);
    std::cerr << "noise sweep: " << result.rows.size() << " rows, "
              << result.violations.size() << " oracle-band violations\n";
    for (const auto& line : result.violations) {
        std::cerr << "VIOLATION: " << line << "\n";
    }
    return result.violations.empty() ? kExitOk : kExitRegression;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Simulator and analytics for chained-Zeno counterfactual "
                 "communication protocols"};
    app.require_subcommand(1);

    AnalyticArgs analytic_args;
    std::optional<std::string> analytic_config;
    auto* analytic = app.add_subcommand(
        "analytic", "Counterfactuality rates C0/C1, baseline readout rate p1, "
                    "and equivalent optical distances for a cycle count M");
    analytic->add_option("--M", analytic_args.m, "outer-cycle count");
    analytic->add_option("--N", analytic_args.n,
                         "baseline inner-cycle count for the distance summary");
    analytic->add_option("--t", analytic_args.t, "module transmission for C0");
    analytic->add_option("--format", analytic_args.format, "csv or json");
    analytic->add_option("--out", analytic_args.out, "output path (default stdout)");
    analytic->add_option("--config", analytic_config, "flat key=value config file");

    RunArgs run_args;
    std::optional<std::string> run_config;
    auto* run = app.add_subcommand(
        "run", "Detector distribution of a single protocol run with an "
               "explicit noise mask");
    run->add_option("--protocol", run_args.protocol, "improved or slaz");
    run->add_option("--M", run_args.m, "outer-cycle count");
    run->add_option("--N", run_args.n, "inner-cycle count (slaz)");
    run->add_option("--bob", run_args.bob, "pass or block");
    run->add_option("--mask", run_args.mask, "none, all, or cycle list like 3,7,12");
    run->add_option("--c", run_args.c, "return rate of an obstructed segment (improved)");
    run->add_option("--t", run_args.t, "module target transmission (improved)");
    run->add_option("--module-N", run_args.module_n, "module splitter count (improved)");
    run->add_option("--format", run_args.format, "csv or json");
    run->add_option("--config", run_config, "flat key=value config file");

    TableArgs table_args;
    std::optional<std::string> table_config;
    auto* table1 = app.add_subcommand(
        "table1", "Regenerate both reference-table halves (counterfactuality "
                  "C0 and blocked-readout p2) with a per-cell regression report");
    table1->add_option("--out", table_args.out, "output path (default stdout)");
    table1->add_option("--format", table_args.format, "csv or json");
    table1->add_option("--config", table_config, "flat key=value config file");

    TableArgs fig3_args;
    std::optional<std::string> fig3_config;
    auto* fig3 = app.add_subcommand(
        "fig3", "C0-versus-M curves for the four reference transmissions, with "
                "monotonicity and ordering checks");
    fig3->add_option("--out", fig3_args.out, "output path (default stdout)");
    fig3->add_option("--format", fig3_args.format, "csv or json");
    fig3->add_option("--config", fig3_config, "flat key=value config file");

    Fig4Args fig4_args;
    std::optional<std::string> fig4_config;
    auto* fig4 = app.add_subcommand(
        "fig4", "Noise-robustness curves (success rate versus block rate B) "
                "for both protocols, sampled plus exact oracle");
    fig4->add_option("--out", fig4_args.out, "output path (default stdout)");
    fig4->add_option("--format", fig4_args.format, "csv or json");
    fig4->add_option("--seed", fig4_args.seed, "master seed (required)");
    fig4->add_option("--trials", fig4_args.trials, "trials per grid point (default 2000)");
    fig4->add_option("--workers", fig4_args.workers, "worker threads (default 1)");
    fig4->add_option("--slaz-noise", fig4_args.slaz_noise,
                     "baseline noise resolution: segment (default) or outer");
    fig4->add_option("--config", fig4_config, "flat key=value config file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (analytic->parsed()) {
            if (analytic_config) {
                const auto cfg = ConfigFile::load(*analytic_config);
                cfg.fill("M", analytic_args.m);
                cfg.fill("N", analytic_args.n);
                cfg.fill("t", analytic_args.t);
                cfg.fill("format", analytic_args.format);
                cfg.fill("out", analytic_args.out);
            }
            if (!analytic_args.m || *analytic_args.m < 1) {
                std::fprintf(stderr, "analytic needs --M >= 1\n");
                return kExitUsage;
            }
            return run_analytic(analytic_args);
        }
        if (run->parsed()) {
            if (run_config) {
                const auto cfg = ConfigFile::load(*run_config);
                cfg.fill("protocol", run_args.protocol);
                cfg.fill("M", run_args.m);
                cfg.fill("N", run_args.n);
                cfg.fill("bob", run_args.bob);
                cfg.fill("mask", run_args.mask);
                cfg.fill("c", run_args.c);
                cfg.fill("t", run_args.t);
                cfg.fill("module_N", run_args.module_n);
                cfg.fill("format", run_args.format);
            }
            if (!run_args.protocol || !run_args.m || *run_args.m < 1 || !run_args.bob) {
                std::fprintf(stderr, "run needs --protocol, --M >= 1, and --bob\n");
                return kExitUsage;
            }
            return run_single(run_args);
        }
        if (table1->parsed()) {
            if (table_config) {
                const auto cfg = ConfigFile::load(*table_config);
                cfg.fill("out", table_args.out);
                cfg.fill("format", table_args.format);
            }
            return run_table1(table_args);
        }
        if (fig3->parsed()) {
            if (fig3_config) {
                const auto cfg = ConfigFile::load(*fig3_config);
                cfg.fill("out", fig3_args.out);
                cfg.fill("format", fig3_args.format);
            }
            return run_fig3(fig3_args);
        }
        if (fig4->parsed()) {
            if (fig4_config) {
                const auto cfg = ConfigFile::load(*fig4_config);
                cfg.fill("out", fig4_args.out);
                cfg.fill("format", fig4_args.format);
                cfg.fill("seed", fig4_args.seed);
                cfg.fill("trials", fig4_args.trials);
                cfg.fill("workers", fig4_args.workers);
                cfg.fill("slaz_noise", fig4_args.slaz_noise);
            }
            return run_fig4(fig4_args);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
    return kExitUsage;
}
