#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rgspur/belldiag.hpp"

namespace rgspur {

/// Joint stabilizer measured by a 2-to-1 purification round: Z_a X_b, X_a Z_b
/// or Y_a Y_b.
enum class Stabilizer { ZX, XZ, YY };

inline constexpr std::array<Stabilizer, 3> kAllStabilizers = {Stabilizer::ZX, Stabilizer::XZ, Stabilizer::YY};

std::string_view to_string(Stabilizer stab);
Stabilizer parse_stabilizer(std::string_view name);

/// Sum of e1[i] * e2[j] over a fixed list of index pairs.
struct BilinearForm {
    struct Term {
        std::uint8_t first;
        std::uint8_t second;
    };
    std::vector<Term> terms;

    double operator()(const ErrorVector &e1, const ErrorVector &e2) const;
};

/// Success probability and unnormalized output of one purification protocol.
struct PurificationTable {
    Stabilizer label;
    BilinearForm success;
    std::array<BilinearForm, 4> output;
};

/// Tables used by the analytic layer, with ZX/XZ labels resolved against the
/// density-matrix oracle (see oracle.hpp and README "Label resolution").
const PurificationTable &purification_table(Stabilizer stab);

/// The tables exactly as commonly quoted, under their quoted labels. The
/// ZX and XZ output transforms appear here under each other's names.
const PurificationTable &quoted_table(Stabilizer stab);

/// Result of one purification round on (kept, sacrificial).
struct PurifyOutcome {
    /// Conditional output; empty when the keep branch has probability 0.
    std::optional<ErrorVector> kept;
    double p_success = 0.0;

    bool ok() const { return kept.has_value(); }
};

/// Probability that the parity outcomes agree. e1 is the kept pair.
double success_prob(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2);

/// Purifies e1 with e2 as the sacrificial pair. The kept vector is normalized
/// by the sum of its own numerator, which is also the reported p_success.
PurifyOutcome purify(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2);
PurifyOutcome purify(const PurificationTable &table, const ErrorVector &e1, const ErrorVector &e2);

} // namespace rgspur
