#include "rgspur/belldiag.hpp"

#include <cmath>

#include <fmt/format.h>

namespace rgspur {

namespace {

void require_probability(double p, const char *what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw ParameterError(fmt::format("{} must be in [0, 1], got {}", what, p));
    }
}

// Klein-group index of the error that a single-qubit Pauli on `side` induces
// on the graph state. Order of `paulis`: X, Y, Z.
constexpr std::array<std::size_t, 3> pauli_images(Side side) {
    if (side == Side::A) {
        // X_a acts as Z_b, Y_a as Z_a Z_b, Z_a as itself.
        return {3, 2, 1};
    }
    return {1, 2, 3};
}

ErrorVector shift(const ErrorVector &e, std::size_t by) {
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[compose_index(i, by)] = e[i];
    }
    return ErrorVector(out);
}

} // namespace

std::string_view to_string(DepolarizingConvention convention) {
    switch (convention) {
    case DepolarizingConvention::PauliThirds:
        return "pauli_thirds";
    case DepolarizingConvention::PauliQuarters:
        return "pauli_quarters";
    }
    return "?";
}

DepolarizingConvention parse_depolarizing_convention(std::string_view name) {
    if (name == "pauli_thirds") {
        return DepolarizingConvention::PauliThirds;
    }
    if (name == "pauli_quarters") {
        return DepolarizingConvention::PauliQuarters;
    }
    throw ParameterError(fmt::format("unknown depolarizing convention '{}'", name));
}

ErrorVector::ErrorVector(double w, double x, double y, double z) : c_{w, x, y, z} {
    double total = 0.0;
    for (double &v : c_) {
        if (!std::isfinite(v)) {
            throw ParameterError("error vector component is not finite");
        }
        if (v < 0.0) {
            if (v < -kClampTolerance) {
                throw ParameterError(fmt::format("error vector component {} is negative", v));
            }
            v = 0.0;
        }
        if (v > 1.0 + kSumTolerance) {
            throw ParameterError(fmt::format("error vector component {} exceeds 1", v));
        }
        total += v;
    }
    if (std::abs(total - 1.0) > kSumTolerance) {
        throw ParameterError(fmt::format("error vector sums to {:.17g}, expected 1", total));
    }
}

ErrorVector::ErrorVector(const std::array<double, 4> &components)
    : ErrorVector(components[0], components[1], components[2], components[3]) {}

ErrorVector ErrorVector::normalized(const std::array<double, 4> &weights) {
    const double total = weights[0] + weights[1] + weights[2] + weights[3];
    if (!(total > 0.0)) {
        throw ParameterError("cannot normalize a zero weight vector");
    }
    return ErrorVector(weights[0] / total, weights[1] / total, weights[2] / total, weights[3] / total);
}

bool ErrorVector::approx_equal(const ErrorVector &other, double tol) const {
    for (std::size_t i = 0; i < 4; ++i) {
        if (std::abs(c_[i] - other.c_[i]) > tol) {
            return false;
        }
    }
    return true;
}

std::string to_string(const ErrorVector &e) {
    return fmt::format("[{:.6g}, {:.6g}, {:.6g}, {:.6g}]", e.w(), e.x(), e.y(), e.z());
}

ErrorVector apply_z_channel(const ErrorVector &e, Side side, double q) {
    require_probability(q, "Z-flip probability");
    const std::size_t flip = side == Side::A ? 1 : 3;
    const ErrorVector flipped = shift(e, flip);
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = (1.0 - q) * e[i] + q * flipped[i];
    }
    return ErrorVector(out);
}

ErrorVector depolarize_photon(const ErrorVector &e, Side side, double p, DepolarizingConvention convention) {
    require_probability(p, "depolarizing parameter");
    const double per_pauli = convention == DepolarizingConvention::PauliThirds ? p / 3.0 : p / 4.0;
    const double identity = 1.0 - 3.0 * per_pauli;
    std::array<double, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) {
        out[i] = identity * e[i];
    }
    for (std::size_t image : pauli_images(side)) {
        for (std::size_t i = 0; i < 4; ++i) {
            out[compose_index(i, image)] += per_pauli * e[i];
        }
    }
    return ErrorVector(out);
}

ErrorVector bsm_compose(const ErrorVector &e1, const ErrorVector &e2) {
    const double w1 = e1.w(), x1 = e1.x(), y1 = e1.y(), z1 = e1.z();
    const double w2 = e2.w(), x2 = e2.x(), y2 = e2.y(), z2 = e2.z();
    return ErrorVector(w1 * w2 + x1 * x2 + y1 * y2 + z1 * z2, //
                       w1 * x2 + x1 * w2 + z1 * y2 + y1 * z2, //
                       w1 * y2 + y1 * w2 + x1 * z2 + z1 * x2, //
                       w1 * z2 + z1 * w2 + x1 * y2 + y1 * x2);
}

CharVector CharVector::operator*(const CharVector &o) const {
    return CharVector{{s[0] * o.s[0], s[1] * o.s[1], s[2] * o.s[2], s[3] * o.s[3]}};
}

CharVector CharVector::pow(unsigned n) const {
    CharVector out{{1.0, 1.0, 1.0, 1.0}};
    for (std::size_t i = 0; i < 4; ++i) {
        out.s[i] = std::pow(s[i], static_cast<double>(n));
    }
    return out;
}

std::array<double, 4> signed_sums(const std::array<double, 4> &v) {
    const double w = v[0], x = v[1], y = v[2], z = v[3];
    return {w + x + y + z, w + x - y - z, w - x + y - z, w - x - y + z};
}

CharVector char_transform(const ErrorVector &e) { return CharVector{signed_sums(e.components())}; }

ErrorVector inverse_char_transform(const CharVector &s) {
    const auto back = signed_sums(s.s);
    return ErrorVector(back[0] / 4.0, back[1] / 4.0, back[2] / 4.0, back[3] / 4.0);
}

ErrorVector compose_power(const ErrorVector &e, unsigned n) {
    if (n == 0) {
        throw ParameterError("compose_power needs at least one factor");
    }
    return inverse_char_transform(char_transform(e).pow(n));
}

} // namespace rgspur
