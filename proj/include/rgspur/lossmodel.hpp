#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace rgspur {

/// 10^(-db_per_km * length_km / 10).
double transmissivity(double length_km, double db_per_km);

struct LossParams {
    double eta = 1.0;  ///< per-photon survival probability
    std::vector<std::size_t> branching{16, 14, 1};
    std::size_t m_arms = 18;
    double bsm_intrinsic = 0.5;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 1;
    std::size_t threads = 0;  ///< 0 = hardware concurrency
    std::optional<double> target_stderr;

    void validate() const;
};

struct McEstimate {
    std::uint64_t samples = 0;
    std::uint64_t successes = 0;
    double mean = 0.0;
    double stderr_ = 0.0;

    /// At least one outer-pair BSM succeeded.
    double arm_success = 0.0;
    /// All logical measurements of one half-RGS succeeded (per half-RGS tally).
    double half_rgs_success = 0.0;

    std::optional<std::string> warning;
};

/// Monte Carlo probability that one link heralds: some arm's BSM succeeds and
/// both half-RGSs complete their tree-encoded logical measurements (one X on
/// the selected inner qubit, Z on the other m - 1). Bit-identical for a given
/// (seed, samples) regardless of thread count.
McEstimate mc_link_success(const LossParams &p);

/// Single-sample tree outcomes. `arrived` is called once per photon needed,
/// in a fixed order, and reports whether that photon survived.
template <class Arrived> bool tree_logical_z(const std::vector<std::size_t> &branching, Arrived &&arrived);
template <class Arrived> bool tree_logical_x(const std::vector<std::size_t> &branching, Arrived &&arrived);

/// per_link^hops.
double e2e_generation_success(double per_link, std::size_t hops);

} // namespace rgspur

#include "rgspur/lossmodel_tree.ipp"
