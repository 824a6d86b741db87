#include "rgspur/chain.hpp"

#include <cmath>

#include <fmt/format.h>

namespace rgspur {

std::string_view to_string(InnerChannelMode mode) {
    return mode == InnerChannelMode::PerMeasurement ? "per_measurement" : "aggregate";
}

InnerChannelMode parse_inner_channel_mode(std::string_view name) {
    if (name == "per_measurement") {
        return InnerChannelMode::PerMeasurement;
    }
    if (name == "aggregate") {
        return InnerChannelMode::Aggregate;
    }
    throw ParameterError(fmt::format("unknown inner channel mode '{}'", name));
}

void ChainParams::validate() const {
    auto probability = [](double v, const char *name) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw ParameterError(fmt::format("{} must be in [0, 1], got {}", name, v));
        }
    };
    if (hops < 1) {
        throw ParameterError("hops must be at least 1");
    }
    if (m_arms < 1) {
        throw ParameterError("m_arms must be at least 1");
    }
    if (!(hop_length_km >= 0.0) || !(loss_db_per_km >= 0.0)) {
        throw ParameterError("hop_length_km and loss_db_per_km must be non-negative");
    }
    for (int b : branching) {
        if (b < 1) {
            throw ParameterError("branching entries must be at least 1");
        }
    }
    probability(p_depol, "p_depol");
    probability(eps_logical_x, "eps_logical_x");
    probability(eps_logical_z, "eps_logical_z");
}

namespace {

std::size_t z_measurement_count(const ChainParams &params) {
    return params.inner_channel == InnerChannelMode::PerMeasurement ? params.m_arms - 1 : 1;
}

} // namespace

double anchor_flip_probability(const ChainParams &params) {
    const std::size_t z_measurements = z_measurement_count(params);
    const double bias =
        std::pow(1.0 - 2.0 * params.eps_logical_z, static_cast<double>(z_measurements)) * (1.0 - 2.0 * params.eps_logical_x);
    return 0.5 * (1.0 - bias);
}

ErrorVector link_error_vector(const ChainParams &params) {
    params.validate();
    // Each half-RGS contributes an anchor-outer pair; the outer photon travels.
    const ErrorVector left = depolarize_photon(ErrorVector::perfect(), Side::B, params.p_depol, params.depolarizing_convention);
    const ErrorVector right = depolarize_photon(ErrorVector::perfect(), Side::A, params.p_depol, params.depolarizing_convention);
    ErrorVector link = bsm_compose(left, right);

    const std::size_t z_measurements = z_measurement_count(params);
    for (Side side : {Side::A, Side::B}) {
        for (std::size_t i = 0; i < z_measurements; ++i) {
            link = apply_z_channel(link, side, params.eps_logical_z);
        }
        link = apply_z_channel(link, side, params.eps_logical_x);
    }
    return link;
}

ErrorVector compose_chain(std::span<const ErrorVector> links) {
    if (links.empty()) {
        throw ParameterError("compose_chain needs at least one link");
    }
    ErrorVector out = links.front();
    for (std::size_t i = 1; i < links.size(); ++i) {
        out = bsm_compose(out, links[i]);
    }
    return out;
}

} // namespace rgspur
