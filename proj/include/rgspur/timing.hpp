#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rgspur/schedule.hpp"

namespace rgspur {

/// Timing constants. All times in seconds, lengths in meters.
struct TimingParams {
    double tau_half = 1e-6;      ///< time to generate one half-RGS
    double tau_join = 1e-8;      ///< time to join two half-RGSs
    double tau_pur_circ = 1e-7;  ///< time to run one purification circuit
    std::size_t n_pur = 5;       ///< pairs consumed per purification attempt
    double L_total = 2e4;        ///< end-to-end distance
    double c = 2e8;              ///< signal speed in fiber

    void validate() const;
    double one_way_latency() const { return L_total / c; }
};

enum class Scenario { Raw, Baseline, Optimistic };

std::string_view to_string(Scenario scenario);

struct ScenarioTimes {
    double tau_rgs = 0.0;  ///< RGS generation time
    double t_mem = 0.0;    ///< end-node memory time
    std::size_t comm_rounds = 1;
};

/// Half-RGSs joined as soon as they exist.
ScenarioTimes times_raw(const TimingParams &p);

/// Purification at the end nodes after heralding. `include_pur_circ = false`
/// drops the circuit time from t_mem. comm_rounds counts one pumping round
/// (two end-to-end exchanges).
ScenarioTimes times_baseline(const TimingParams &p, bool include_pur_circ = true);

/// Purification folded into RGS generation.
ScenarioTimes times_optimistic(const TimingParams &p);

/// End-to-end exchanges needed by k heralded pumping rounds.
std::size_t baseline_comm_rounds(std::size_t pumping_rounds);

struct RateResult {
    double rate = 0.0;  ///< delivered pairs per second
    bool zero_success = false;
};

/// Source-limited pipeline: p_generation * p_schedule / tau_rgs.
RateResult pipelined_rate(const ScenarioTimes &times, double p_generation, double p_schedule);

/// Sequential stages with full restart on any failure:
/// T = sum_i t_i prod_{j<i} p_j / prod_i p_i, rate = 1 / T.
RateResult restart_rate(std::span<const double> stage_times, std::span<const double> stage_success);

/// Wall time of each heralded pumping round. Round 1 generates the held pair
/// and the first sacrificial pair; every round waits for the circuit and an
/// end-to-end round trip.
std::vector<double> pumping_round_times(const TimingParams &p, std::size_t rounds);

/// Delivered rate for a scenario. Baseline uses `pump` (required) with the
/// restart model, each round also needing a freshly generated pair
/// (probability p_generation), and stores the expected time in pump.
RateResult delivered_rate(Scenario scenario, const ScenarioTimes &times, const TimingParams &params,
                          double p_generation, double p_schedule, PumpResult *pump = nullptr);

} // namespace rgspur
