#include "rgspur/purify.hpp"

#include <fmt/format.h>

namespace rgspur {

namespace {

constexpr std::uint8_t W = 0, X = 1, Y = 2, Z = 3;

using T = BilinearForm::Term;

// (a1 + b1)(a2 + b2) + (c1 + d1)(c2 + d2)
BilinearForm agreement(std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t d) {
    return BilinearForm{{T{a, a}, T{a, b}, T{b, a}, T{b, b}, T{c, c}, T{c, d}, T{d, c}, T{d, d}}};
}

BilinearForm pair(T first, T second) { return BilinearForm{{first, second}}; }

// Each stabilizer passes when both pairs sit on the same side of its detected
// set: ZX detects Z on b (y, z), XZ detects Z on a (x, y), YY detects an odd
// number of Z (x, z).
BilinearForm success_zx() { return agreement(W, X, Z, Y); }
BilinearForm success_xz() { return agreement(W, Z, X, Y); }
BilinearForm success_yy() { return agreement(W, Y, X, Z); }

// Output whose entries sum to the XZ success probability.
std::array<BilinearForm, 4> output_xz() {
    return {pair({W, W}, {Z, Z}), pair({Z, W}, {W, Z}), pair({X, Y}, {Y, X}), pair({X, X}, {Y, Y})};
}

// Output whose entries sum to the ZX success probability.
std::array<BilinearForm, 4> output_zx() {
    return {pair({W, W}, {X, X}), pair({Z, Z}, {Y, Y}), pair({Z, Y}, {Y, Z}), pair({X, W}, {W, X})};
}

std::array<BilinearForm, 4> output_yy() {
    return {pair({W, W}, {Y, Y}), pair({X, Z}, {Z, X}), pair({Y, W}, {W, Y}), pair({X, X}, {Z, Z})};
}

std::size_t slot(Stabilizer stab) { return static_cast<std::size_t>(stab); }

} // namespace

std::string_view to_string(Stabilizer stab) {
    switch (stab) {
    case Stabilizer::ZX:
        return "ZX";
    case Stabilizer::XZ:
        return "XZ";
    case Stabilizer::YY:
        return "YY";
    }
    return "?";
}

Stabilizer parse_stabilizer(std::string_view name) {
    for (Stabilizer s : kAllStabilizers) {
        if (name == to_string(s)) {
            return s;
        }
    }
    throw ParameterError(fmt::format("unknown stabilizer '{}' (expected ZX, XZ or YY)", name));
}

double BilinearForm::operator()(const ErrorVector &e1, const ErrorVector &e2) const {
    double total = 0.0;
    for (const Term &t : terms) {
        total += e1[t.first] * e2[t.second];
    }
    return total;
}

const PurificationTable &purification_table(Stabilizer stab) {
    static const std::array<PurificationTable, 3> tables = {
        PurificationTable{Stabilizer::ZX, success_zx(), output_zx()},
        PurificationTable{Stabilizer::XZ, success_xz(), output_xz()},
        PurificationTable{Stabilizer::YY, success_yy(), output_yy()},
    };
    return tables[slot(stab)];
}

const PurificationTable &quoted_table(Stabilizer stab) {
    // The quoted ZX/XZ transforms carry the opposite labels; each one's
    // entries sum to the other stabilizer's success probability.
    static const std::array<PurificationTable, 3> tables = {
        PurificationTable{Stabilizer::ZX, success_zx(), output_xz()},
        PurificationTable{Stabilizer::XZ, success_xz(), output_zx()},
        PurificationTable{Stabilizer::YY, success_yy(), output_yy()},
    };
    return tables[slot(stab)];
}

double success_prob(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2) {
    return purification_table(stab).success(e1, e2);
}

PurifyOutcome purify(const PurificationTable &table, const ErrorVector &e1, const ErrorVector &e2) {
    std::array<double, 4> numerator{};
    double total = 0.0;
    for (std::size_t k = 0; k < 4; ++k) {
        numerator[k] = table.output[k](e1, e2);
        total += numerator[k];
    }
    if (!(total > 0.0)) {
        return PurifyOutcome{std::nullopt, 0.0};
    }
    return PurifyOutcome{ErrorVector::normalized(numerator), total};
}

PurifyOutcome purify(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2) {
    return purify(purification_table(stab), e1, e2);
}

} // namespace rgspur
