#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rgspur/belldiag.hpp"
#include "rgspur/purify.hpp"

namespace rgspur {

/// A schedule tree violates a structural invariant.
class ScheduleError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Immutable expression tree of link generation, swapping and purification.
/// Subtrees are shared, so reusing one expression twice describes two copies
/// of the same construction.
class ScheduleExpr {
  public:
    struct Link;
    struct Swap;
    struct Purify;

    static ScheduleExpr link(std::size_t hop);
    static ScheduleExpr swap(std::vector<ScheduleExpr> parts);
    static ScheduleExpr purify(Stabilizer stab, ScheduleExpr keep, ScheduleExpr sacrifice);

    template <class Visitor> decltype(auto) visit(Visitor &&visitor) const;

  private:
    using Node = std::variant<Link, Swap, Purify>;
    explicit ScheduleExpr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
    std::shared_ptr<const Node> node_;
};

struct ScheduleExpr::Link {
    std::size_t hop;
};

struct ScheduleExpr::Swap {
    std::vector<ScheduleExpr> parts;
};

struct ScheduleExpr::Purify {
    Stabilizer stab;
    ScheduleExpr keep;
    ScheduleExpr sacrifice;
};

template <class Visitor> decltype(auto) ScheduleExpr::visit(Visitor &&visitor) const {
    return std::visit(std::forward<Visitor>(visitor), *node_);
}

/// Inclusive range of hops a (sub)schedule spans.
struct HopRange {
    std::size_t first;
    std::size_t last;
    friend bool operator==(const HopRange &, const HopRange &) = default;
};

/// Checks every invariant against a chain of `hops` hops and returns the span
/// of the whole tree. Throws ScheduleError naming the violated rule.
HopRange validate(const ScheduleExpr &expr, std::size_t hops);

struct PurifyStep {
    Stabilizer stab;
    HopRange range;
    double p_success;
};

struct ScheduleResult {
    /// Final pair; empty if some purification branch has probability 0.
    std::optional<ErrorVector> vector;
    /// Product of every purification branch probability (all must pass).
    double p_success = 0.0;
    std::vector<std::size_t> half_rgs_per_hop_side;
    std::size_t max_half_rgs_per_hop_side = 0;
    std::size_t comm_rounds = 1;
    /// Purifications in evaluation order (post-order).
    std::vector<PurifyStep> steps;
};

ScheduleResult evaluate(const ScheduleExpr &expr, const ErrorVector &link, std::size_t hops);
ScheduleResult evaluate(const ScheduleExpr &expr, std::span<const ErrorVector> per_hop_links);

/// Three end-to-end pairs (link-level YY, midpoint YY, raw) combined by
/// ZX then YY; five half-RGSs per side at each hop. hops must be even.
ScheduleExpr preset_fig5(std::size_t hops);
/// Straight swapping of one raw link per hop.
ScheduleExpr preset_raw(std::size_t hops);
/// End-node pumping of raw end-to-end pairs, written as a static tree.
ScheduleExpr preset_baseline_pump(std::size_t hops, std::size_t rounds);

struct ResourceReport {
    /// Link leaves referencing each hop (half-RGSs per side of that hop).
    std::vector<std::size_t> per_hop;
    /// Emitters (anchors) needed at each node 0..hops; node 0 and node hops
    /// are the end nodes.
    std::vector<std::size_t> per_node;
    std::size_t total_leaves = 0;
};

ResourceReport resource_report(const ScheduleExpr &expr, std::size_t hops);

/// Stabilizer order used for end-node pumping; repeats cyclically.
inline constexpr std::array<Stabilizer, 4> kPumpingSequence = {Stabilizer::YY, Stabilizer::ZX, Stabilizer::YY,
                                                               Stabilizer::XZ};

struct PumpResult {
    ErrorVector final = ErrorVector::perfect();
    std::size_t rounds = 0;
    std::vector<double> per_round_p;
    std::vector<Stabilizer> stabilizers;
    bool converged = false;
    /// A round had success probability 0; `final` is the last valid pair.
    bool impossible = false;
    /// Expected delivery time in seconds, filled by the timing model.
    std::optional<double> expected_time;

    double p_success() const;
};

/// Purifies a held end-to-end pair with fresh copies of `e2e` (each fresh
/// copy sacrificed) until fidelity >= target or max_rounds rounds ran.
PumpResult pump_baseline(const ErrorVector &e2e, double target_fidelity, std::size_t max_rounds);

/// Exactly `rounds` pumping rounds, no target.
PumpResult pump_rounds(const ErrorVector &e2e, std::size_t rounds);

} // namespace rgspur
