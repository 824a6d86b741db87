#include "rgspur/lossmodel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <thread>

#include <fmt/format.h>

#include "rgspur/belldiag.hpp"

namespace rgspur {

namespace {

constexpr std::uint64_t kBatchSize = 1 << 14;

// Bernoulli draw by comparing raw 64-bit output against a fixed threshold.
class Coin {
  public:
    Coin(double p, std::mt19937_64 &rng) : rng_(rng), always_(p >= 1.0), never_(p <= 0.0) {
        if (!always_ && !never_) {
            threshold_ = static_cast<std::uint64_t>(std::ldexp(p, 64));
        }
    }

    bool operator()() {
        if (always_) {
            return true;
        }
        if (never_) {
            return false;
        }
        return rng_() < threshold_;
    }

  private:
    std::mt19937_64 &rng_;
    bool always_;
    bool never_;
    std::uint64_t threshold_ = 0;
};

struct Tally {
    std::uint64_t link = 0;
    std::uint64_t arm = 0;
    std::uint64_t half = 0;
};

bool half_rgs(const LossParams &p, Coin &photon) {
    if (!tree_logical_x(p.branching, photon)) {
        return false;
    }
    for (std::size_t i = 1; i < p.m_arms; ++i) {
        if (!tree_logical_z(p.branching, photon)) {
            return false;
        }
    }
    return true;
}

Tally run_batch(const LossParams &p, std::uint64_t batch, std::uint64_t count) {
    std::seed_seq seq{static_cast<std::uint32_t>(p.seed), static_cast<std::uint32_t>(p.seed >> 32),
                      static_cast<std::uint32_t>(batch), static_cast<std::uint32_t>(batch >> 32)};
    std::mt19937_64 rng(seq);
    Coin photon(p.eta, rng);
    Coin arm(p.bsm_intrinsic * p.eta * p.eta, rng);

    Tally t;
    for (std::uint64_t s = 0; s < count; ++s) {
        bool any_arm = false;
        for (std::size_t a = 0; a < p.m_arms && !any_arm; ++a) {
            any_arm = arm();
        }
        const bool left = half_rgs(p, photon);
        const bool right = half_rgs(p, photon);
        t.arm += any_arm;
        t.half += static_cast<std::uint64_t>(left) + static_cast<std::uint64_t>(right);
        t.link += any_arm && left && right;
    }
    return t;
}

double binomial_stderr(double mean, std::uint64_t n) { return std::sqrt(mean * (1.0 - mean) / static_cast<double>(n)); }

} // namespace

double transmissivity(double length_km, double db_per_km) {
    if (!(length_km >= 0.0) || !(db_per_km >= 0.0)) {
        throw ParameterError("length and attenuation must be non-negative");
    }
    return std::pow(10.0, -db_per_km * length_km / 10.0);
}

void LossParams::validate() const {
    if (!(eta >= 0.0 && eta <= 1.0)) {
        throw ParameterError(fmt::format("eta must be in [0, 1], got {}", eta));
    }
    if (!(bsm_intrinsic >= 0.0 && bsm_intrinsic <= 1.0)) {
        throw ParameterError(fmt::format("bsm_intrinsic must be in [0, 1], got {}", bsm_intrinsic));
    }
    if (samples < 1) {
        throw ParameterError("samples must be at least 1");
    }
    if (m_arms < 1) {
        throw ParameterError("m_arms must be at least 1");
    }
    if (std::any_of(branching.begin(), branching.end(), [](std::size_t b) { return b < 1; })) {
        throw ParameterError("branching entries must be at least 1");
    }
    if (target_stderr && !(*target_stderr > 0.0)) {
        throw ParameterError("target_stderr must be positive");
    }
}

McEstimate mc_link_success(const LossParams &p) {
    p.validate();
    const std::uint64_t batches = (p.samples + kBatchSize - 1) / kBatchSize;
    std::vector<Tally> tallies(batches);

    std::size_t workers = p.threads != 0 ? p.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<std::size_t>(std::min<std::uint64_t>(workers, batches));

    std::atomic<std::uint64_t> next{0};
    auto work = [&] {
        for (std::uint64_t b = next++; b < batches; b = next++) {
            const std::uint64_t count = std::min(kBatchSize, p.samples - b * kBatchSize);
            tallies[b] = run_batch(p, b, count);
        }
    };
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) {
            pool.emplace_back(work);
        }
    }

    Tally total;
    for (const Tally &t : tallies) {
        total.link += t.link;
        total.arm += t.arm;
        total.half += t.half;
    }

    McEstimate out;
    out.samples = p.samples;
    out.successes = total.link;
    const double n = static_cast<double>(p.samples);
    out.mean = static_cast<double>(total.link) / n;
    out.stderr_ = binomial_stderr(out.mean, p.samples);
    out.arm_success = static_cast<double>(total.arm) / n;
    out.half_rgs_success = static_cast<double>(total.half) / (2.0 * n);

    const std::uint64_t failures = p.samples - total.link;
    if (p.target_stderr && out.stderr_ > *p.target_stderr) {
        out.warning = fmt::format("stderr {:.3g} exceeds target {:.3g}; increase samples", out.stderr_, *p.target_stderr);
    } else if (failures > 0 && failures < 10) {
        out.warning = fmt::format("only {} failures observed; stderr is unreliable", failures);
    } else if (failures == 0 && (p.eta < 1.0 || p.bsm_intrinsic < 1.0)) {
        out.warning = "no failures observed; stderr is unreliable";
    }
    return out;
}

double e2e_generation_success(double per_link, std::size_t hops) {
    if (!(per_link >= 0.0 && per_link <= 1.0)) {
        throw ParameterError(fmt::format("per-link probability must be in [0, 1], got {}", per_link));
    }
    return std::pow(per_link, static_cast<double>(hops));
}

} // namespace rgspur
