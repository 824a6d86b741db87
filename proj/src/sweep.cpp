#include "rgspur/sweep.hpp"

#include <atomic>
#include <cmath>
#include <map>
#include <thread>

#include <fmt/format.h>

#include "rgspur/lossmodel.hpp"
#include "rgspur/schedule_io.hpp"

namespace rgspur {

namespace {

std::string number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    return fmt::format("{}", v);
}

SweepRow raw_row(const ChainParams &chain, const TimingParams &base, double p_link) {
    const ErrorVector link = link_error_vector(chain);
    const std::vector<ErrorVector> links(chain.hops, link);
    SweepRow row;
    row.timing = base;
    row.timing.n_pur = 1;
    const ScenarioTimes times = times_raw(row.timing);
    row.vector = compose_chain(links);
    row.fidelity = fidelity(*row.vector);
    row.p_success = 1.0;
    row.p_generation = e2e_generation_success(p_link, chain.hops);
    const RateResult r = pipelined_rate(times, row.p_generation, 1.0);
    row.rate = r.rate;
    row.rate_zero_success = r.zero_success;
    row.tau_rgs = times.tau_rgs;
    row.t_mem = times.t_mem;
    row.half_rgs_per_hop = 1;
    row.comm_rounds = times.comm_rounds;
    return row;
}

SweepRow baseline_row(const RunConfig &config, const TimingParams &base, double p_link) {
    const ChainParams &chain = config.chain;
    const ErrorVector link = link_error_vector(chain);
    const std::vector<ErrorVector> links(chain.hops, link);
    const ErrorVector e2e = compose_chain(links);

    PumpResult pump = config.baseline.target_fidelity
                          ? pump_baseline(e2e, *config.baseline.target_fidelity, config.baseline.rounds)
                          : pump_rounds(e2e, config.baseline.rounds);

    SweepRow row;
    row.timing = base;
    row.timing.n_pur = config.timing.n_pur.value_or(pump.rounds + 1);
    const ScenarioTimes times = times_baseline(row.timing, !config.timing.baseline_drop_pur_circ);
    row.p_generation = e2e_generation_success(p_link, chain.hops);
    row.p_success = pump.p_success();
    if (!pump.impossible) {
        row.vector = pump.final;
        row.fidelity = fidelity(pump.final);
    }
    const RateResult r = delivered_rate(Scenario::Baseline, times, row.timing, row.p_generation, 1.0, &pump);
    row.rate = r.rate;
    row.rate_zero_success = r.zero_success;
    row.tau_rgs = times.tau_rgs;
    row.t_mem = times.t_mem;
    row.half_rgs_per_hop = pump.rounds + 1;
    row.comm_rounds = baseline_comm_rounds(pump.rounds);
    if (pump.rounds == 0) {
        row.comm_rounds = 1;
    }
    return row;
}

SweepRow schedule_row(const RunConfig &config, const ScheduleExpr &expr, const TimingParams &base, double p_link) {
    const ChainParams &chain = config.chain;
    const ErrorVector link = link_error_vector(chain);
    const ScheduleResult result = evaluate(expr, link, chain.hops);
    const ResourceReport resources = resource_report(expr, chain.hops);

    SweepRow row;
    row.timing = base;
    row.timing.n_pur = config.timing.n_pur.value_or(result.max_half_rgs_per_hop_side);
    const ScenarioTimes times = times_optimistic(row.timing);
    row.vector = result.vector;
    row.fidelity = result.vector ? fidelity(*result.vector) : 0.0;
    row.p_success = result.p_success;
    row.p_generation = std::pow(p_link, static_cast<double>(resources.total_leaves));
    const RateResult r = pipelined_rate(times, row.p_generation, row.p_success);
    row.rate = r.rate;
    row.rate_zero_success = r.zero_success;
    row.tau_rgs = times.tau_rgs;
    row.t_mem = times.t_mem;
    row.half_rgs_per_hop = result.max_half_rgs_per_hop_side;
    row.comm_rounds = result.comm_rounds;
    return row;
}

// Scenario schedules must deliver an end-to-end pair.
void require_full_span(const ScheduleExpr &expr, const std::string &scenario, std::size_t hops) {
    const HopRange range = validate(expr, hops);
    if (range.first != 0 || range.last + 1 != hops) {
        throw ScheduleError(fmt::format("scenario '{}' spans hops {}..{}, the chain has hops 0..{}", scenario,
                                        range.first, range.last, hops - 1));
    }
}

} // namespace

ScheduleExpr scenario_schedule(const std::string &scenario, std::size_t hops) {
    if (scenario == "fig5") {
        return preset_fig5(hops);
    }
    if (scenario.starts_with("custom:")) {
        return load_schedule_file(scenario.substr(7));
    }
    throw UnknownScenarioError(fmt::format("scenario '{}' has no schedule", scenario));
}

std::vector<SweepRow> evaluate_point(const RunConfig &config, double p_link, const std::string &sweep_param,
                                     double value) {
    const TimingParams base = resolved_timing(config);
    std::vector<SweepRow> rows;
    for (const std::string &scenario : config.scenarios) {
        SweepRow row;
        if (scenario == "raw") {
            row = raw_row(config.chain, base, p_link);
        } else if (scenario == "baseline") {
            row = baseline_row(config, base, p_link);
        } else {
            const ScheduleExpr expr = scenario_schedule(scenario, config.chain.hops);
            require_full_span(expr, scenario, config.chain.hops);
            row = schedule_row(config, expr, base, p_link);
        }
        row.sweep_param = sweep_param;
        row.value = value;
        row.scenario = scenario;
        rows.push_back(std::move(row));
    }
    return rows;
}

double link_generation_probability(const RunConfig &config) {
    if (!config.link_success.monte_carlo) {
        return config.link_success.fixed;
    }
    LossParams loss;
    loss.eta = config.link_success.eta.value_or(transmissivity(config.chain.hop_length_km, config.chain.loss_db_per_km));
    loss.branching.assign(config.chain.branching.begin(), config.chain.branching.end());
    loss.m_arms = config.chain.m_arms;
    loss.bsm_intrinsic = config.link_success.bsm_intrinsic;
    loss.samples = config.link_success.samples;
    loss.seed = config.seed;
    loss.threads = config.threads;
    return mc_link_success(loss).mean;
}

std::vector<SweepRow> run_sweep(const RunConfig &config) {
    config.validate();
    const std::vector<double> values = config.sweep.values();

    std::vector<RunConfig> points;
    for (double v : values) {
        points.push_back(with_parameter(config, config.sweep.param, v));
    }

    // Link probabilities depend only on hop geometry; estimate each once.
    std::map<double, double> p_link_by_length;
    for (const RunConfig &p : points) {
        if (!p_link_by_length.contains(p.chain.hop_length_km)) {
            p_link_by_length[p.chain.hop_length_km] = link_generation_probability(p);
        }
    }

    // Custom schedules are parsed up front so file errors surface in order.
    for (const std::string &scenario : config.scenarios) {
        if (scenario.starts_with("custom:")) {
            require_full_span(scenario_schedule(scenario, config.chain.hops), scenario, config.chain.hops);
        }
    }

    std::vector<std::vector<SweepRow>> results(points.size());
    std::vector<std::exception_ptr> errors(points.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < points.size(); i = next++) {
            try {
                results[i] = evaluate_point(points[i], p_link_by_length.at(points[i].chain.hop_length_km),
                                            config.sweep.param, values[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    std::size_t workers = config.threads != 0 ? config.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, points.size());
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (errors[i]) {
            std::rethrow_exception(errors[i]);
        }
        for (SweepRow &row : results[i]) {
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

const std::vector<std::string> &csv_columns() {
    static const std::vector<std::string> columns{
        "sweep_param", "value", "scenario", "fidelity", "p_success", "rate",         "tau_rgs", "t_mem",
        "half_rgs_per_hop", "comm_rounds", "w", "x", "y", "z", "p_generation", "tau_half", "tau_join",
        "tau_pur_circ", "n_pur", "L_total", "c"};
    return columns;
}

void write_csv(std::ostream &out, const RunConfig &config, const std::vector<SweepRow> &rows) {
    out << "# rgspur sweep\n";
    out << "# config: " << config_to_json(config).dump() << "\n";
    out << "# rate: pairs per second; times in seconds; L_total in meters; c in m/s\n";
    const std::vector<std::string> &columns = csv_columns();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        out << (i ? "," : "") << columns[i];
    }
    out << "\n";
    const double nan = std::nan("");
    for (const SweepRow &r : rows) {
        const std::array<double, 4> c =
            r.vector ? r.vector->components() : std::array<double, 4>{nan, nan, nan, nan};
        out << r.sweep_param << ',' << number(r.value) << ',' << r.scenario << ',' << number(r.fidelity) << ','
            << number(r.p_success) << ',' << number(r.rate) << ',' << number(r.tau_rgs) << ',' << number(r.t_mem)
            << ',' << r.half_rgs_per_hop << ',' << r.comm_rounds << ',' << number(c[0]) << ',' << number(c[1]) << ','
            << number(c[2]) << ',' << number(c[3]) << ',' << number(r.p_generation) << ',' << number(r.timing.tau_half)
            << ',' << number(r.timing.tau_join) << ',' << number(r.timing.tau_pur_circ) << ',' << r.timing.n_pur
            << ',' << number(r.timing.L_total) << ',' << number(r.timing.c) << '\n';
    }
}

} // namespace rgspur
