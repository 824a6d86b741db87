#include "rgspur/timing.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace rgspur {

namespace {

void require_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(fmt::format("{} must be in [0, 1], got {}", what, p));
    }
}

} // namespace

void TimingParams::validate() const {
    if (!(tau_half > 0.0)) {
        throw ParameterError("tau_half must be positive");
    }
    if (!(tau_join >= 0.0) || !(tau_pur_circ >= 0.0) || !(L_total >= 0.0)) {
        throw ParameterError("tau_join, tau_pur_circ and L_total must be non-negative");
    }
    if (!(c > 0.0)) {
        throw ParameterError("c must be positive");
    }
    if (n_pur < 1) {
        throw ParameterError("n_pur must be at least 1");
    }
}

std::string_view to_string(Scenario scenario) {
    switch (scenario) {
    case Scenario::Raw:
        return "raw";
    case Scenario::Baseline:
        return "baseline";
    case Scenario::Optimistic:
        return "optimistic";
    }
    return "?";
}

ScenarioTimes times_raw(const TimingParams &p) {
    p.validate();
    return ScenarioTimes{p.tau_half + p.tau_join, p.tau_half + p.one_way_latency(), 1};
}

ScenarioTimes times_baseline(const TimingParams &p, bool include_pur_circ) {
    p.validate();
    const double n = static_cast<double>(p.n_pur);
    const double circuit = include_pur_circ ? p.tau_pur_circ : 0.0;
    return ScenarioTimes{p.tau_half + p.tau_join, n * p.tau_half + circuit + 2.0 * p.one_way_latency(),
                         baseline_comm_rounds(1)};
}

ScenarioTimes times_optimistic(const TimingParams &p) {
    p.validate();
    const double n = static_cast<double>(p.n_pur);
    const double tau_rgs = n * p.tau_half + std::max(p.tau_pur_circ + p.tau_join, n * p.tau_join);
    return ScenarioTimes{tau_rgs, n * p.tau_half + p.tau_pur_circ + p.one_way_latency(), 1};
}

std::size_t baseline_comm_rounds(std::size_t pumping_rounds) { return 2 * pumping_rounds; }

RateResult pipelined_rate(const ScenarioTimes &times, double p_generation, double p_schedule) {
    require_probability(p_generation, "p_generation");
    require_probability(p_schedule, "p_schedule");
    if (!(times.tau_rgs > 0.0)) {
        throw ParameterError("tau_rgs must be positive");
    }
    const double p = p_generation * p_schedule;
    if (p == 0.0) {
        return RateResult{0.0, true};
    }
    return RateResult{p / times.tau_rgs, false};
}

RateResult restart_rate(std::span<const double> stage_times, std::span<const double> stage_success) {
    if (stage_times.size() != stage_success.size() || stage_times.empty()) {
        throw ParameterError("restart_rate needs one success probability per stage, at least one stage");
    }
    double elapsed = 0.0;
    double reach = 1.0;
    for (std::size_t i = 0; i < stage_times.size(); ++i) {
        require_probability(stage_success[i], "stage success probability");
        if (!(stage_times[i] >= 0.0)) {
            throw ParameterError("stage times must be non-negative");
        }
        elapsed += stage_times[i] * reach;
        reach *= stage_success[i];
    }
    if (reach == 0.0) {
        return RateResult{0.0, true};
    }
    const double expected = elapsed / reach;
    if (!(expected > 0.0)) {
        throw ParameterError("restart_rate needs a positive total stage time");
    }
    return RateResult{1.0 / expected, false};
}

std::vector<double> pumping_round_times(const TimingParams &p, std::size_t rounds) {
    p.validate();
    std::vector<double> out;
    out.reserve(rounds);
    const double wait = p.tau_pur_circ + 2.0 * p.one_way_latency();
    for (std::size_t i = 0; i < rounds; ++i) {
        out.push_back((i == 0 ? 2.0 : 1.0) * p.tau_half + wait);
    }
    return out;
}

RateResult delivered_rate(Scenario scenario, const ScenarioTimes &times, const TimingParams &params,
                          double p_generation, double p_schedule, PumpResult *pump) {
    if (scenario != Scenario::Baseline || (pump != nullptr && pump->rounds == 0)) {
        return pipelined_rate(times, p_generation, p_schedule);
    }
    if (pump == nullptr) {
        throw ParameterError("baseline rate needs the pumping result");
    }
    require_probability(p_generation, "p_generation");
    const std::vector<double> stage_times = pumping_round_times(params, pump->rounds);
    std::vector<double> stage_success;
    for (std::size_t i = 0; i < pump->rounds; ++i) {
        const double fresh = i == 0 ? p_generation * p_generation : p_generation;
        stage_success.push_back(pump->per_round_p[i] * fresh);
    }
    const RateResult r = restart_rate(stage_times, stage_success);
    if (!r.zero_success) {
        pump->expected_time = 1.0 / r.rate;
    }
    return r;
}

} // namespace rgspur
