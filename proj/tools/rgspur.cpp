// rgspur command-line front end.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "rgspur/config.hpp"
#include "rgspur/lossmodel.hpp"
#include "rgspur/oracle.hpp"
#include "rgspur/schedule_io.hpp"
#include "rgspur/sweep.hpp"

namespace {

using namespace rgspur;

enum ExitCode : int {
    kOk = 0,
    kGeneric = 1,
    kUsage = 2,
    kUnknownPreset = 3,
    kBadSchedule = 4,
    kUnwritable = 5,
    kOracleDisagrees = 6,
};

class OutputError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

constexpr const char *kConfigEnv = "RGSPUR_CONFIG";

RunConfig resolve_config(const std::string &path) {
    if (!path.empty()) {
        return load_config(path);
    }
    if (const char *env = std::getenv(kConfigEnv); env != nullptr && *env != '\0') {
        return load_config(env);
    }
    return RunConfig{};
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw OutputError(fmt::format("cannot write '{}'", path.string()));
    }
    out << content;
    out.close();
    if (!out) {
        throw OutputError(fmt::format("failed writing '{}'", path.string()));
    }
}

std::vector<std::size_t> parse_branching(const std::string &text) {
    std::vector<std::size_t> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used != item.size() || v < 1) {
            throw ConfigError(fmt::format("bad branching entry '{}'", item));
        }
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

nlohmann::json vector_json(const std::optional<ErrorVector> &e) {
    if (!e) {
        return nullptr;
    }
    return nlohmann::json{{"w", e->w()}, {"x", e->x()}, {"y", e->y()}, {"z", e->z()}};
}

// --- sweep -------------------------------------------------------------------

struct SweepOptions {
    std::string config;
    std::string output;
    std::string param;
    std::optional<double> start;
    std::optional<double> stop;
    std::optional<std::size_t> points;
    std::string scenarios;
    std::optional<std::size_t> threads;
};

int run_sweep_command(const SweepOptions &o) {
    RunConfig config = resolve_config(o.config);
    if (!o.param.empty()) {
        config.sweep.param = o.param;
    }
    if (o.start) {
        config.sweep.start = *o.start;
    }
    if (o.stop) {
        config.sweep.stop = *o.stop;
    }
    if (o.points) {
        config.sweep.points = *o.points;
    }
    if (!o.scenarios.empty()) {
        config.scenarios.clear();
        std::stringstream in(o.scenarios);
        std::string item;
        while (std::getline(in, item, ',')) {
            config.scenarios.push_back(item);
        }
    }
    if (o.threads) {
        config.threads = *o.threads;
    }
    if (!o.output.empty()) {
        config.output = o.output;
    }
    config.validate();

    const std::vector<SweepRow> rows = run_sweep(config);
    std::ostringstream csv;
    write_csv(csv, config, rows);
    if (config.output && config.output->string() != "-") {
        write_file(*config.output, csv.str());
        std::cerr << fmt::format("wrote {} rows to {}\n", rows.size(), config.output->string());
    } else {
        std::cout << csv.str();
    }
    return kOk;
}

// --- oracle validate -----------------------------------------------------------

struct OracleOptions {
    std::string fixtures = "purify_golden.json";
    bool no_fixtures = false;
    std::size_t samples = 1000;
    std::uint64_t seed = 20250501;
    std::size_t fixture_random = 8;
    bool tamper = false;
};

int run_oracle_command(const OracleOptions &o) {
    oracle::ReconcileOptions options;
    options.samples = o.samples;
    options.seed = o.seed;
    if (o.tamper) {
        // Listed ZX/XZ transforms under their printed labels.
        options.analytic = {&quoted_table(Stabilizer::ZX), &quoted_table(Stabilizer::XZ), &quoted_table(Stabilizer::YY)};
    }
    const oracle::Reconciliation report = oracle::reconcile(options);
    std::cout << oracle::format_report(report);
    if (!o.no_fixtures) {
        write_file(o.fixtures, oracle::golden_fixtures_json(o.fixture_random, o.seed));
        std::cout << fmt::format("fixtures: {}\n", o.fixtures);
    }
    if (!report.analytic_agrees()) {
        std::cerr << "analytic layer disagrees with the oracle\n";
        return kOracleDisagrees;
    }
    return kOk;
}

// --- loss mc -----------------------------------------------------------------

struct LossOptions {
    std::optional<double> eta;
    std::optional<double> length_km;
    double db_per_km = 0.2;
    std::string branching = "16,14,1";
    std::size_t arms = 18;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    double bsm = 0.5;
    std::size_t threads = 0;
    std::optional<std::size_t> hops;
    std::optional<double> target_stderr;
    bool json = false;
};

int run_loss_command(const LossOptions &o) {
    LossParams p;
    if (o.eta) {
        p.eta = *o.eta;
    } else {
        p.eta = transmissivity(o.length_km.value_or(2.0), o.db_per_km);
    }
    p.branching = parse_branching(o.branching);
    p.m_arms = o.arms;
    p.samples = o.samples;
    p.seed = o.seed;
    p.bsm_intrinsic = o.bsm;
    p.threads = o.threads;
    p.target_stderr = o.target_stderr;
    const McEstimate e = mc_link_success(p);

    if (o.json) {
        nlohmann::json doc{{"eta", p.eta},
                           {"branching", p.branching},
                           {"m_arms", p.m_arms},
                           {"bsm_intrinsic", p.bsm_intrinsic},
                           {"samples", e.samples},
                           {"seed", p.seed},
                           {"successes", e.successes},
                           {"mean", e.mean},
                           {"stderr", e.stderr_},
                           {"arm_success", e.arm_success},
                           {"half_rgs_success", e.half_rgs_success}};
        if (o.hops) {
            doc["hops"] = *o.hops;
            doc["e2e_generation_success"] = e2e_generation_success(e.mean, *o.hops);
        }
        doc["warning"] = e.warning ? nlohmann::json(*e.warning) : nlohmann::json(nullptr);
        std::cout << doc.dump(2) << "\n";
        return kOk;
    }
    std::cout << fmt::format("eta {:.12g}  arms {}  branching ({})  bsm {}  samples {}  seed {}\n", p.eta, p.m_arms,
                             o.branching, p.bsm_intrinsic, e.samples, p.seed);
    std::cout << fmt::format("link success   {:.8f} +- {:.2e}\n", e.mean, e.stderr_);
    std::cout << fmt::format("  any arm      {:.8f}\n", e.arm_success);
    std::cout << fmt::format("  half-RGS     {:.8f}\n", e.half_rgs_success);
    if (o.hops) {
        std::cout << fmt::format("end to end     {:.8f} ({} hops)\n", e2e_generation_success(e.mean, *o.hops), *o.hops);
    }
    if (e.warning) {
        std::cerr << "warning: " << *e.warning << "\n";
    }
    return kOk;
}

// --- schedule eval -------------------------------------------------------------

struct ScheduleOptions {
    std::string preset;
    std::string file;
    std::string config;
    std::optional<std::size_t> rounds;
    std::optional<double> p_depol;
    std::optional<std::size_t> hops;
    bool print_tree = false;
};

int run_schedule_command(const ScheduleOptions &o) {
    RunConfig config = resolve_config(o.config);
    if (o.p_depol) {
        config.chain.p_depol = *o.p_depol;
    }
    if (o.hops) {
        config.chain.hops = *o.hops;
    }
    config.chain.validate();
    const std::size_t hops = config.chain.hops;

    ScheduleExpr expr = preset_raw(1);
    std::string name;
    if (!o.file.empty()) {
        expr = load_schedule_file(o.file);
        name = o.file;
    } else {
        name = o.preset.empty() ? "fig5" : o.preset;
        if (name == "fig5") {
            expr = preset_fig5(hops);
        } else if (name == "raw") {
            expr = preset_raw(hops);
        } else if (name == "baseline_pump") {
            expr = preset_baseline_pump(hops, o.rounds.value_or(config.baseline.rounds));
        } else {
            throw UnknownScenarioError(fmt::format("unknown preset '{}' (expected fig5, raw or baseline_pump)", name));
        }
    }

    const ErrorVector link = link_error_vector(config.chain);
    const ScheduleResult result = evaluate(expr, link, hops);
    const ResourceReport resources = resource_report(expr, hops);

    nlohmann::json steps = nlohmann::json::array();
    for (const PurifyStep &s : result.steps) {
        steps.push_back({{"stab", std::string(to_string(s.stab))},
                         {"first_hop", s.range.first},
                         {"last_hop", s.range.last},
                         {"p_success", s.p_success}});
    }
    nlohmann::json doc{{"schedule", name},
                       {"hops", hops},
                       {"link", vector_json(link)},
                       {"vector", vector_json(result.vector)},
                       {"fidelity", result.vector ? nlohmann::json(fidelity(*result.vector)) : nlohmann::json(nullptr)},
                       {"p_success", result.p_success},
                       {"half_rgs_per_hop_side", result.half_rgs_per_hop_side},
                       {"half_rgs_per_node", resources.per_node},
                       {"max_half_rgs_per_hop_side", result.max_half_rgs_per_hop_side},
                       {"total_half_rgs_pairs", resources.total_leaves},
                       {"comm_rounds", result.comm_rounds},
                       {"steps", steps}};
    if (o.print_tree) {
        doc["tree"] = schedule_to_json(expr);
    }
    std::cout << doc.dump(2) << "\n";
    return kOk;
}

// --- timing show -------------------------------------------------------------

struct TimingOptions {
    std::string config;
    std::optional<std::size_t> n_pur;
    std::optional<double> L_total;
    bool drop_pur_circ = false;
};

int run_timing_command(const TimingOptions &o) {
    RunConfig config = resolve_config(o.config);
    if (o.n_pur) {
        config.timing.n_pur = *o.n_pur;
    }
    if (o.L_total) {
        config.timing.L_total = *o.L_total;
    }
    TimingParams t = resolved_timing(config);
    if (!config.timing.n_pur) {
        t.n_pur = 5;
    }
    t.validate();
    const bool drop = o.drop_pur_circ || config.timing.baseline_drop_pur_circ;

    std::cout << fmt::format("tau_half {:g} s  tau_join {:g} s  tau_pur_circ {:g} s  n_pur {}  L_total {:g} m  c {:g} m/s\n",
                             t.tau_half, t.tau_join, t.tau_pur_circ, t.n_pur, t.L_total, t.c);
    std::cout << fmt::format("{:<12}{:>16}{:>16}{:>14}\n", "scenario", "tau_rgs [s]", "t_mem [s]", "comm_rounds");
    const std::array<std::pair<const char *, ScenarioTimes>, 3> rows{{
        {"raw", times_raw(t)},
        {"baseline", times_baseline(t, !drop)},
        {"optimistic", times_optimistic(t)},
    }};
    for (const auto &[name, s] : rows) {
        std::cout << fmt::format("{:<12}{:>16.6e}{:>16.6e}{:>14}\n", name, s.tau_rgs, s.t_mem, s.comm_rounds);
    }
    return kOk;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Bell-diagonal repeater chain simulator with purification schedules"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "rgspur 0.1.0");

    SweepOptions sweep_opts;
    CLI::App *sweep = app.add_subcommand("sweep", "Sweep one parameter and write CSV");
    sweep->add_option("--config", sweep_opts.config, fmt::format("JSON config (default: ${})", kConfigEnv));
    sweep->add_option("-o,--output", sweep_opts.output, "CSV path; '-' for stdout");
    sweep->add_option("--param", sweep_opts.param, "Sweep parameter");
    sweep->add_option("--start", sweep_opts.start);
    sweep->add_option("--stop", sweep_opts.stop);
    sweep->add_option("--points", sweep_opts.points);
    sweep->add_option("--scenarios", sweep_opts.scenarios, "Comma separated: raw,baseline,fig5,custom:<path>");
    sweep->add_option("--threads", sweep_opts.threads);

    OracleOptions oracle_opts;
    CLI::App *oracle_cmd = app.add_subcommand("oracle", "Density-matrix oracle");
    oracle_cmd->require_subcommand(1);
    CLI::App *validate = oracle_cmd->add_subcommand("validate", "Check analytic purification against the oracle");
    validate->add_option("--fixtures", oracle_opts.fixtures, "Golden fixture output path");
    validate->add_flag("--no-fixtures", oracle_opts.no_fixtures, "Skip writing fixtures");
    validate->add_option("--samples", oracle_opts.samples, "Random pairs per stabilizer")->check(CLI::PositiveNumber);
    validate->add_option("--seed", oracle_opts.seed);
    validate->add_option("--fixture-random", oracle_opts.fixture_random, "Random fixture cases per stabilizer");
    validate->add_flag("--tamper", oracle_opts.tamper, "Check the transforms under their printed labels instead");

    LossOptions loss_opts;
    CLI::App *loss = app.add_subcommand("loss", "Photon loss model");
    loss->require_subcommand(1);
    CLI::App *mc = loss->add_subcommand("mc", "Monte Carlo link generation success");
    CLI::Option *eta_opt = mc->add_option("--eta", loss_opts.eta, "Per-photon survival")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--length-km", loss_opts.length_km, "Photon travel distance (default 2)")->excludes(eta_opt);
    mc->add_option("--db-per-km", loss_opts.db_per_km, "Attenuation")->excludes(eta_opt);
    mc->add_option("--branching", loss_opts.branching, "Tree branching, comma separated");
    mc->add_option("--arms", loss_opts.arms)->check(CLI::PositiveNumber);
    mc->add_option("--samples", loss_opts.samples)->check(CLI::PositiveNumber);
    mc->add_option("--seed", loss_opts.seed);
    mc->add_option("--bsm", loss_opts.bsm, "Intrinsic BSM success")->check(CLI::Range(0.0, 1.0));
    mc->add_option("--threads", loss_opts.threads);
    mc->add_option("--hops", loss_opts.hops, "Also report end-to-end success over this many links");
    mc->add_option("--target-stderr", loss_opts.target_stderr);
    mc->add_flag("--json", loss_opts.json);

    ScheduleOptions schedule_opts;
    CLI::App *schedule = app.add_subcommand("schedule", "Purification schedules");
    schedule->require_subcommand(1);
    CLI::App *eval = schedule->add_subcommand("eval", "Evaluate a schedule on the configured chain");
    CLI::Option *preset_opt = eval->add_option("--preset", schedule_opts.preset, "fig5 | raw | baseline_pump");
    eval->add_option("--file", schedule_opts.file, "Schedule JSON")->excludes(preset_opt);
    eval->add_option("--config", schedule_opts.config, fmt::format("JSON config (default: ${})", kConfigEnv));
    eval->add_option("--rounds", schedule_opts.rounds, "Pumping rounds for baseline_pump");
    eval->add_option("--p-depol", schedule_opts.p_depol);
    eval->add_option("--hops", schedule_opts.hops);
    eval->add_flag("--tree", schedule_opts.print_tree, "Include the schedule tree");

    TimingOptions timing_opts;
    CLI::App *timing = app.add_subcommand("timing", "Timing model");
    timing->require_subcommand(1);
    CLI::App *show = timing->add_subcommand("show", "Generation and memory times per scenario");
    show->add_option("--config", timing_opts.config, fmt::format("JSON config (default: ${})", kConfigEnv));
    show->add_option("--n-pur", timing_opts.n_pur);
    show->add_option("--L-total", timing_opts.L_total);
    show->add_flag("--drop-pur-circ", timing_opts.drop_pur_circ);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*sweep) {
            return run_sweep_command(sweep_opts);
        }
        if (*validate) {
            return run_oracle_command(oracle_opts);
        }
        if (*mc) {
            return run_loss_command(loss_opts);
        }
        if (*eval) {
            return run_schedule_command(schedule_opts);
        }
        if (*show) {
            return run_timing_command(timing_opts);
        }
    } catch (const UnknownScenarioError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUnknownPreset;
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ScheduleFormatError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadSchedule;
    } catch (const ScheduleError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBadSchedule;
    } catch (const OutputError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUnwritable;
    } catch (const ParameterError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kGeneric;
    }
    return kGeneric;
}
