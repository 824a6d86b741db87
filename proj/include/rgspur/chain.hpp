#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "rgspur/belldiag.hpp"

namespace rgspur {

/// How the inner-qubit logical errors reach an anchor.
///
/// `PerMeasurement`: one Z channel per logical Z measurement (m_arms - 1 of
/// them) plus one per logical X measurement, all independent.
/// `Aggregate`: eps_logical_z and eps_logical_x are already per-anchor totals
/// and are applied once each.
enum class InnerChannelMode { PerMeasurement, Aggregate };

std::string_view to_string(InnerChannelMode mode);
InnerChannelMode parse_inner_channel_mode(std::string_view name);

/// Physical description of a uniform repeater chain.
struct ChainParams {
    std::size_t hops = 10;
    double hop_length_km = 2.0;
    double loss_db_per_km = 0.2;
    std::size_t m_arms = 18;
    std::vector<int> branching = {16, 14, 1};
    double p_depol = 0.0;
    /// Placeholder defaults; supply values for the tree code in use.
    double eps_logical_x = 1e-3;
    double eps_logical_z = 1e-3;
    DepolarizingConvention depolarizing_convention = DepolarizingConvention::PauliThirds;
    InnerChannelMode inner_channel = InnerChannelMode::PerMeasurement;

    /// Throws ParameterError on the first violated invariant.
    void validate() const;

    double total_length_m() const { return static_cast<double>(hops) * hop_length_km * 1000.0; }
};

/// Net Z-flip probability the inner qubits leave on one anchor.
double anchor_flip_probability(const ChainParams &params);

/// Anchor-to-anchor error vector of one hop, conditioned on generation
/// success: both outer photons depolarized, joined by the ABSA BSM, then the
/// inner-qubit Z channels applied to each anchor.
ErrorVector link_error_vector(const ChainParams &params);

/// Swaps every intermediate anchor pair: a left fold of bsm_compose.
ErrorVector compose_chain(std::span<const ErrorVector> links);

} // namespace rgspur
