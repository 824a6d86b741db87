#include "rgspur/schedule.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "overloaded.hpp"

namespace rgspur {

namespace {

using detail::overloaded;

std::string describe(const HopRange &r) { return fmt::format("[{}, {}]", r.first, r.last); }

HopRange check(const ScheduleExpr &expr, std::size_t hops) {
    return expr.visit(overloaded{
        [&](const ScheduleExpr::Link &l) {
            if (l.hop >= hops) {
                throw ScheduleError(fmt::format("link hop {} outside [0, {})", l.hop, hops));
            }
            return HopRange{l.hop, l.hop};
        },
        [&](const ScheduleExpr::Swap &s) {
            if (s.parts.empty()) {
                throw ScheduleError("swap has no parts");
            }
            HopRange acc = check(s.parts.front(), hops);
            for (std::size_t i = 1; i < s.parts.size(); ++i) {
                const HopRange next = check(s.parts[i], hops);
                if (next.first != acc.last + 1) {
                    throw ScheduleError(fmt::format("swap parts not contiguous: {} followed by {}", describe(acc),
                                                    describe(next)));
                }
                acc.last = next.last;
            }
            return acc;
        },
        [&](const ScheduleExpr::Purify &p) {
            const HopRange keep = check(p.keep, hops);
            const HopRange sacrifice = check(p.sacrifice, hops);
            if (!(keep == sacrifice)) {
                throw ScheduleError(fmt::format("purify {} children span different hops: {} vs {}", to_string(p.stab),
                                                describe(keep), describe(sacrifice)));
            }
            return keep;
        },
    });
}

struct Partial {
    std::optional<ErrorVector> vector;
    double p = 1.0;
    HopRange range{0, 0};
};

class Evaluator {
  public:
    explicit Evaluator(std::span<const ErrorVector> links) : links_(links) {}

    Partial run(const ScheduleExpr &expr) {
        return expr.visit(overloaded{
            [&](const ScheduleExpr::Link &l) { return Partial{links_[l.hop], 1.0, HopRange{l.hop, l.hop}}; },
            [&](const ScheduleExpr::Swap &s) {
                Partial acc = run(s.parts.front());
                for (std::size_t i = 1; i < s.parts.size(); ++i) {
                    const Partial next = run(s.parts[i]);
                    acc.p *= next.p;
                    acc.range.last = next.range.last;
                    if (acc.vector && next.vector) {
                        acc.vector = bsm_compose(*acc.vector, *next.vector);
                    } else {
                        acc.vector.reset();
                    }
                }
                return acc;
            },
            [&](const ScheduleExpr::Purify &p) {
                const Partial keep = run(p.keep);
                const Partial sacrifice = run(p.sacrifice);
                Partial out{std::nullopt, keep.p * sacrifice.p, keep.range};
                double branch = 0.0;
                if (keep.vector && sacrifice.vector) {
                    const PurifyOutcome o = rgspur::purify(p.stab, *keep.vector, *sacrifice.vector);
                    branch = o.p_success;
                    out.vector = o.kept;
                }
                out.p *= branch;
                steps.push_back(PurifyStep{p.stab, keep.range, branch});
                return out;
            },
        });
    }

    std::vector<PurifyStep> steps;

  private:
    std::span<const ErrorVector> links_;
};

void count_leaves(const ScheduleExpr &expr, std::vector<std::size_t> &per_hop) {
    expr.visit(overloaded{
        [&](const ScheduleExpr::Link &l) { ++per_hop[l.hop]; },
        [&](const ScheduleExpr::Swap &s) {
            for (const ScheduleExpr &part : s.parts) {
                count_leaves(part, per_hop);
            }
        },
        [&](const ScheduleExpr::Purify &p) {
            count_leaves(p.keep, per_hop);
            count_leaves(p.sacrifice, per_hop);
        },
    });
}

ScheduleExpr swap_range(std::size_t first, std::size_t count) {
    std::vector<ScheduleExpr> parts;
    parts.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        parts.push_back(ScheduleExpr::link(first + i));
    }
    return ScheduleExpr::swap(std::move(parts));
}

} // namespace

ScheduleExpr ScheduleExpr::link(std::size_t hop) { return ScheduleExpr(std::make_shared<const Node>(Link{hop})); }

ScheduleExpr ScheduleExpr::swap(std::vector<ScheduleExpr> parts) {
    return ScheduleExpr(std::make_shared<const Node>(Swap{std::move(parts)}));
}

ScheduleExpr ScheduleExpr::purify(Stabilizer stab, ScheduleExpr keep, ScheduleExpr sacrifice) {
    return ScheduleExpr(std::make_shared<const Node>(Purify{stab, std::move(keep), std::move(sacrifice)}));
}

HopRange validate(const ScheduleExpr &expr, std::size_t hops) {
    if (hops == 0) {
        throw ScheduleError("chain has no hops");
    }
    return check(expr, hops);
}

ScheduleResult evaluate(const ScheduleExpr &expr, std::span<const ErrorVector> per_hop_links) {
    validate(expr, per_hop_links.size());
    Evaluator evaluator(per_hop_links);
    const Partial top = evaluator.run(expr);

    ScheduleResult out;
    out.vector = top.vector;
    out.p_success = top.vector ? top.p : 0.0;
    out.steps = std::move(evaluator.steps);
    ResourceReport resources = resource_report(expr, per_hop_links.size());
    out.half_rgs_per_hop_side = std::move(resources.per_hop);
    out.max_half_rgs_per_hop_side =
        *std::max_element(out.half_rgs_per_hop_side.begin(), out.half_rgs_per_hop_side.end());
    out.comm_rounds = 1;
    return out;
}

ScheduleResult evaluate(const ScheduleExpr &expr, const ErrorVector &link, std::size_t hops) {
    const std::vector<ErrorVector> links(hops, link);
    return evaluate(expr, links);
}

ScheduleExpr preset_fig5(std::size_t hops) {
    if (hops < 2 || hops % 2 != 0) {
        throw ParameterError(fmt::format("the staged schedule needs an even hop count >= 2, got {}", hops));
    }
    const std::size_t half = hops / 2;

    std::vector<ScheduleExpr> purified_links;
    for (std::size_t i = 0; i < hops; ++i) {
        purified_links.push_back(ScheduleExpr::purify(Stabilizer::YY, ScheduleExpr::link(i), ScheduleExpr::link(i)));
    }
    const ScheduleExpr link_level = ScheduleExpr::swap(std::move(purified_links));

    const ScheduleExpr left = swap_range(0, half);
    const ScheduleExpr right = swap_range(half, half);
    const ScheduleExpr midpoint = ScheduleExpr::swap({ScheduleExpr::purify(Stabilizer::YY, left, left),
                                                      ScheduleExpr::purify(Stabilizer::YY, right, right)});

    const ScheduleExpr raw = swap_range(0, hops);
    return ScheduleExpr::purify(Stabilizer::YY, ScheduleExpr::purify(Stabilizer::ZX, link_level, midpoint), raw);
}

ScheduleExpr preset_raw(std::size_t hops) {
    if (hops < 1) {
        throw ParameterError("hops must be at least 1");
    }
    return swap_range(0, hops);
}

ScheduleExpr preset_baseline_pump(std::size_t hops, std::size_t rounds) {
    const ScheduleExpr raw = preset_raw(hops);
    ScheduleExpr held = raw;
    for (std::size_t i = 0; i < rounds; ++i) {
        held = ScheduleExpr::purify(kPumpingSequence[i % kPumpingSequence.size()], held, raw);
    }
    return held;
}

ResourceReport resource_report(const ScheduleExpr &expr, std::size_t hops) {
    validate(expr, hops);
    ResourceReport out;
    out.per_hop.assign(hops, 0);
    count_leaves(expr, out.per_hop);
    out.per_node.assign(hops + 1, 0);
    for (std::size_t node = 0; node <= hops; ++node) {
        const std::size_t left = node > 0 ? out.per_hop[node - 1] : 0;
        const std::size_t right = node < hops ? out.per_hop[node] : 0;
        out.per_node[node] = std::max(left, right);
    }
    for (std::size_t c : out.per_hop) {
        out.total_leaves += c;
    }
    return out;
}

double PumpResult::p_success() const {
    double p = 1.0;
    for (double r : per_round_p) {
        p *= r;
    }
    return p;
}

namespace {

PumpResult pump(const ErrorVector &e2e, std::optional<double> target, std::size_t max_rounds) {
    PumpResult out;
    out.final = e2e;
    while (true) {
        if (target && fidelity(out.final) >= *target) {
            out.converged = true;
            break;
        }
        if (out.rounds >= max_rounds) {
            out.converged = !target.has_value();
            break;
        }
        const Stabilizer stab = kPumpingSequence[out.rounds % kPumpingSequence.size()];
        const PurifyOutcome o = purify(stab, out.final, e2e);
        out.per_round_p.push_back(o.p_success);
        out.stabilizers.push_back(stab);
        ++out.rounds;
        if (!o.ok()) {
            out.impossible = true;
            break;
        }
        out.final = *o.kept;
    }
    return out;
}

} // namespace

PumpResult pump_baseline(const ErrorVector &e2e, double target_fidelity, std::size_t max_rounds) {
    if (!(target_fidelity >= 0.0 && target_fidelity < 1.0)) {
        throw ParameterError(fmt::format("target fidelity must be in [0, 1), got {}", target_fidelity));
    }
    if (max_rounds < 1) {
        throw ParameterError("max_rounds must be at least 1");
    }
    return pump(e2e, target_fidelity, max_rounds);
}

PumpResult pump_rounds(const ErrorVector &e2e, std::size_t rounds) { return pump(e2e, std::nullopt, rounds); }

} // namespace rgspur
