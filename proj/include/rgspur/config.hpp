#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "rgspur/chain.hpp"
#include "rgspur/lossmodel.hpp"
#include "rgspur/timing.hpp"

namespace rgspur {

/// Bad or inconsistent configuration.
class ConfigError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A scenario name that is neither built in nor custom:<path>.
class UnknownScenarioError : public ConfigError {
  public:
    using ConfigError::ConfigError;
};

struct SweepGrid {
    std::string param = "p_depol";
    double start = 0.0;
    double stop = 0.01;
    std::size_t points = 11;

    /// Evenly spaced, endpoints included; a single point gives `start`.
    std::vector<double> values() const;
};

struct BaselineConfig {
    std::size_t rounds = 4;
    /// When set, pump until this fidelity is reached (at most `rounds` rounds).
    std::optional<double> target_fidelity;
};

struct TimingConfig {
    TimingParams params;
    /// Unset: derived from the chain length.
    std::optional<double> L_total;
    /// Unset: derived per scenario from the schedule.
    std::optional<std::size_t> n_pur;
    bool baseline_drop_pur_circ = false;
};

/// Generation probability of one elementary link: a fixed number or a Monte
/// Carlo estimate from the loss model.
struct LinkSuccessConfig {
    bool monte_carlo = false;
    double fixed = 1.0;
    std::optional<double> eta;  ///< unset: from hop length and attenuation
    double bsm_intrinsic = 0.5;
    std::uint64_t samples = 100'000;
};

struct RunConfig {
    ChainParams chain;
    TimingConfig timing;
    BaselineConfig baseline;
    std::vector<std::string> scenarios{"raw", "baseline", "fig5"};
    SweepGrid sweep;
    LinkSuccessConfig link_success;
    std::uint64_t seed = 1;
    std::size_t threads = 0;
    std::optional<std::filesystem::path> output;

    void validate() const;
};

/// Keys not listed here are rejected. All fields are optional.
RunConfig config_from_json(const nlohmann::json &doc);
nlohmann::json config_to_json(const RunConfig &config);
RunConfig load_config(const std::filesystem::path &path);

/// Names accepted as sweep parameters.
const std::vector<std::string> &sweep_parameters();

/// Copy of `config` with one sweep parameter set.
RunConfig with_parameter(const RunConfig &config, const std::string &param, double value);

/// Timing constants with L_total resolved against the chain.
TimingParams resolved_timing(const RunConfig &config);

} // namespace rgspur
