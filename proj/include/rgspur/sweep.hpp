#pragma once

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "rgspur/config.hpp"
#include "rgspur/schedule.hpp"

namespace rgspur {

/// One scenario evaluated at one sweep point.
struct SweepRow {
    std::string sweep_param;
    double value = 0.0;
    std::string scenario;
    double fidelity = 0.0;
    double p_success = 0.0;
    double rate = 0.0;
    bool rate_zero_success = false;
    double tau_rgs = 0.0;
    double t_mem = 0.0;
    std::size_t half_rgs_per_hop = 0;
    std::size_t comm_rounds = 0;
    std::optional<ErrorVector> vector;  ///< unset when the schedule cannot succeed
    double p_generation = 1.0;
    TimingParams timing;  ///< constants used for this row, n_pur included
};

/// Evaluates every scenario of `config` at its current parameter values.
/// `p_link` is the per-link generation probability.
std::vector<SweepRow> evaluate_point(const RunConfig &config, double p_link, const std::string &sweep_param = "",
                                     double value = 0.0);

/// Rows in sweep order, scenarios in config order within each point.
/// Points run concurrently; the result does not depend on thread count.
std::vector<SweepRow> run_sweep(const RunConfig &config);

/// Per-link generation probability for a chain: fixed or Monte Carlo.
double link_generation_probability(const RunConfig &config);

/// Column names in CSV order.
const std::vector<std::string> &csv_columns();

/// Comment lines carrying the effective config, a header row, then one line
/// per row. Numbers use round-trip precision.
void write_csv(std::ostream &out, const RunConfig &config, const std::vector<SweepRow> &rows);

/// Built-in or custom schedule behind a scenario name, for schedule-driven
/// scenarios ("fig5", "custom:<path>").
ScheduleExpr scenario_schedule(const std::string &scenario, std::size_t hops);

} // namespace rgspur
