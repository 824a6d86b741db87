#include <algorithm>
#include <cmath>

#include <gtest/gtest.h>

#include "rgspur/chain.hpp"
#include "test_util.hpp"

namespace rgspur {
namespace {

using testing::random_vector;
using testing::vectors_near;

ChainParams noiseless() {
    ChainParams p;
    p.p_depol = 0.0;
    p.eps_logical_x = 0.0;
    p.eps_logical_z = 0.0;
    return p;
}

TEST(ChainParams, Validation) {
    EXPECT_NO_THROW(ChainParams{}.validate());
    const auto bad = [](auto mutate) {
        ChainParams p;
        mutate(p);
        return p;
    };
    EXPECT_THROW(bad([](ChainParams &p) { p.hops = 0; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.m_arms = 0; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.p_depol = 1.5; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.eps_logical_x = -0.1; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.eps_logical_z = 2.0; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.branching = {16, 0, 1}; }).validate(), ParameterError);
    EXPECT_THROW(bad([](ChainParams &p) { p.hop_length_km = -1.0; }).validate(), ParameterError);
    EXPECT_DOUBLE_EQ(ChainParams{}.total_length_m(), 20000.0);
}

TEST(InnerChannelMode, Names) {
    EXPECT_EQ(parse_inner_channel_mode("per_measurement"), InnerChannelMode::PerMeasurement);
    EXPECT_EQ(parse_inner_channel_mode("aggregate"), InnerChannelMode::Aggregate);
    EXPECT_EQ(to_string(InnerChannelMode::Aggregate), "aggregate");
    EXPECT_THROW(parse_inner_channel_mode("sum"), ParameterError);
}

TEST(LinkErrorVector, NoiselessIsPerfect) {
    EXPECT_EQ(link_error_vector(noiseless()), ErrorVector::perfect());
}

TEST(LinkErrorVector, DepolarizedOuterPhotons) {
    for (std::size_t m : {1u, 5u, 18u, 40u}) {
        ChainParams p = noiseless();
        p.p_depol = 0.03;
        p.m_arms = m;
        const ErrorVector e = link_error_vector(p);
        EXPECT_NEAR(fidelity(e), 0.9412, 1e-12);
        EXPECT_NEAR(fidelity(e), (1.0 + 3.0 * 0.96 * 0.96) / 4.0, 1e-12);
    }
}

TEST(LinkErrorVector, InnerZChannelsPerMeasurement) {
    ChainParams p = noiseless();
    p.eps_logical_z = 0.001;
    const double q = 0.0167307010586132;
    EXPECT_NEAR(anchor_flip_probability(p), q, 1e-15);
    EXPECT_NEAR(anchor_flip_probability(p), (1.0 - std::pow(1.0 - 2.0 * 0.001, 17)) / 2.0, 1e-15);
    const ErrorVector e = link_error_vector(p);
    EXPECT_NEAR(e.w(), 0.966818514240686, 1e-14);
    EXPECT_NEAR(e.x(), 0.0164507847007005, 1e-14);
    EXPECT_NEAR(e.y(), 0.000279916357912681, 1e-14);
    EXPECT_NEAR(e.z(), 0.0164507847007005, 1e-14);
    EXPECT_NEAR(e.w(), (1 - q) * (1 - q), 1e-14);
}

TEST(LinkErrorVector, XMeasurementAddsOneChannel) {
    ChainParams p = noiseless();
    p.eps_logical_x = 0.01;
    EXPECT_NEAR(anchor_flip_probability(p), 0.01, 1e-15);
    p.eps_logical_z = 0.002;
    p.m_arms = 3;
    const double qz = (1.0 - std::pow(1.0 - 0.004, 2)) / 2.0;
    EXPECT_NEAR(anchor_flip_probability(p), qz * 0.99 + 0.01 * (1 - qz), 1e-15);
}

TEST(LinkErrorVector, AggregateModeAppliesEachChannelOnce) {
    ChainParams p = noiseless();
    p.inner_channel = InnerChannelMode::Aggregate;
    p.eps_logical_z = 0.01;
    p.eps_logical_x = 0.02;
    const double q = 0.01 * 0.98 + 0.02 * 0.99;
    EXPECT_NEAR(anchor_flip_probability(p), q, 1e-15);
    const ErrorVector e = link_error_vector(p);
    EXPECT_NEAR(e.w(), (1 - q) * (1 - q), 1e-15);
    EXPECT_NEAR(e.y(), q * q, 1e-15);
}

TEST(LinkErrorVector, InnerChannelOrderDoesNotMatter) {
    ChainParams p;
    p.p_depol = 0.007;
    p.eps_logical_z = 0.003;
    p.eps_logical_x = 0.004;
    const double q = anchor_flip_probability(p);
    // Inner channels on the anchors before the outer BSM.
    const ErrorVector left = apply_z_channel(depolarize_photon(ErrorVector::perfect(), Side::B, p.p_depol), Side::A, q);
    const ErrorVector right = apply_z_channel(depolarize_photon(ErrorVector::perfect(), Side::A, p.p_depol), Side::B, q);
    EXPECT_TRUE(vectors_near(bsm_compose(left, right), link_error_vector(p), 1e-15));
}

TEST(LinkErrorVector, MonotoneInDepolarizing) {
    ChainParams p;
    double previous = 1.0;
    for (int k = 0; k <= 50; ++k) {
        p.p_depol = 0.02 * k / 50.0;
        const double f = fidelity(link_error_vector(p));
        EXPECT_LE(f, previous + 1e-15);
        previous = f;
    }
}

TEST(ComposeChain, Examples) {
    const ErrorVector e(0.97, 0.01, 0.01, 0.01);
    const std::vector<ErrorVector> single{e};
    EXPECT_EQ(compose_chain(single), e);
    const std::vector<ErrorVector> ten(10, e);
    EXPECT_NEAR(fidelity(compose_chain(ten)), 0.74862447699362578, 1e-12);
    std::vector<ErrorVector> with_mixed(4, e);
    with_mixed[2] = ErrorVector::maximally_mixed();
    EXPECT_TRUE(vectors_near(compose_chain(with_mixed), ErrorVector::maximally_mixed(), 1e-15));
    EXPECT_THROW(compose_chain(std::vector<ErrorVector>{}), ParameterError);
}

TEST(ComposeChain, FidelityNonIncreasingInLength) {
    std::mt19937_64 rng(211);
    for (int trial = 0; trial < 20; ++trial) {
        ErrorVector link = random_vector(rng);
        if (link.w() < 0.5) {
            link = ErrorVector::normalized({2.0, link.x(), link.y(), link.z()});
        }
        std::vector<ErrorVector> links;
        double previous = 1.0;
        for (int n = 1; n <= 30; ++n) {
            links.push_back(link);
            const double f = fidelity(compose_chain(links));
            EXPECT_LE(f, previous + 1e-12);
            previous = f;
        }
    }
}

TEST(ComposeChain, PermutationInvariant) {
    std::mt19937_64 rng(223);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<ErrorVector> links;
        for (int i = 0; i < 8; ++i) {
            links.push_back(random_vector(rng));
        }
        const ErrorVector reference = compose_chain(links);
        std::shuffle(links.begin(), links.end(), rng);
        EXPECT_TRUE(vectors_near(compose_chain(links), reference, 1e-12));
    }
}

TEST(ComposeChain, NoiselessPipelineIsExact) {
    const ChainParams p = noiseless();
    const std::vector<ErrorVector> links(p.hops, link_error_vector(p));
    EXPECT_EQ(compose_chain(links), ErrorVector::perfect());
}

} // namespace
} // namespace rgspur
