#pragma once

#include <array>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rgspur {

/// Raised when an argument falls outside its documented domain.
class ParameterError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

/// Which end of a pair a single-qubit channel acts on.
enum class Side { A, B };

/// How a single depolarizing parameter is split across the Pauli group.
///
/// `PauliThirds`: with probability p one of X, Y, Z is applied uniformly
/// (p/3 each). `PauliQuarters`: with probability p the qubit is replaced by the
/// maximally mixed state, i.e. p/4 for each of I, X, Y, Z.
enum class DepolarizingConvention { PauliThirds, PauliQuarters };

std::string_view to_string(DepolarizingConvention convention);
DepolarizingConvention parse_depolarizing_convention(std::string_view name);

/// Bell-diagonal error vector of a noisy two-qubit graph state CZ|++>.
///
/// Components are the weights of the graph state hit by II, ZI, ZZ and IZ, in
/// that order. Every Pauli error on the pair folds onto exactly one of these:
/// X on qubit b acts like Z on qubit a, Y on b like ZZ, and so on. Index bits
/// are (a-flip, b-flip) so the group law is XOR on {00, 10, 11, 01}.
class ErrorVector {
  public:
    static constexpr double kSumTolerance = 1e-12;
    static constexpr double kClampTolerance = 1e-15;

    /// Validates and stores [w, x, y, z]. Entries in [-1e-15, 0) are clamped to
    /// zero; anything more negative, or a sum off by more than 1e-12, throws.
    ErrorVector(double w, double x, double y, double z);
    explicit ErrorVector(const std::array<double, 4> &components);

    static ErrorVector perfect() { return ErrorVector(1.0, 0.0, 0.0, 0.0); }
    static ErrorVector maximally_mixed() { return ErrorVector(0.25, 0.25, 0.25, 0.25); }

    /// Builds a vector from unnormalized non-negative weights.
    static ErrorVector normalized(const std::array<double, 4> &weights);

    double w() const { return c_[0]; }
    double x() const { return c_[1]; }
    double y() const { return c_[2]; }
    double z() const { return c_[3]; }
    double operator[](std::size_t i) const { return c_[i]; }
    const std::array<double, 4> &components() const { return c_; }

    double sum() const { return c_[0] + c_[1] + c_[2] + c_[3]; }

    bool approx_equal(const ErrorVector &other, double tol) const;
    friend bool operator==(const ErrorVector &, const ErrorVector &) = default;

  private:
    std::array<double, 4> c_;
};

std::string to_string(const ErrorVector &e);

/// Index of the Klein-group element (a_flip, b_flip) in component order.
constexpr std::size_t component_index(int a_flip, int b_flip) {
    constexpr std::size_t table[2][2] = {{0, 3}, {1, 2}};
    return table[a_flip & 1][b_flip & 1];
}
constexpr int a_flip_of(std::size_t index) { return (index == 1 || index == 2) ? 1 : 0; }
constexpr int b_flip_of(std::size_t index) { return (index == 2 || index == 3) ? 1 : 0; }
/// Group product of two components (XOR of flip bits).
constexpr std::size_t compose_index(std::size_t i, std::size_t j) {
    return component_index(a_flip_of(i) ^ a_flip_of(j), b_flip_of(i) ^ b_flip_of(j));
}

/// Fidelity to the ideal graph state: the II weight.
inline double fidelity(const ErrorVector &e) { return e.w(); }

/// Z flip with probability q on one side of the pair.
ErrorVector apply_z_channel(const ErrorVector &e, Side side, double q);

/// Depolarizing noise on one photon of the pair.
ErrorVector depolarize_photon(const ErrorVector &e, Side side, double p,
                              DepolarizingConvention convention = DepolarizingConvention::PauliThirds);

/// Error vector after a rotated BSM joins the two pairs (Klein-four convolution).
ErrorVector bsm_compose(const ErrorVector &e1, const ErrorVector &e2);

/// Character (signed-sum) transform of an error vector.
///
/// s0 = w+x+y+z, s1 = w+x-y-z, s2 = w-x+y-z, s3 = w-x-y+z. bsm_compose becomes
/// componentwise multiplication of these values, so n-fold compositions are
/// powers.
struct CharVector {
    std::array<double, 4> s{};

    CharVector operator*(const CharVector &o) const;
    CharVector pow(unsigned n) const;
};

CharVector char_transform(const ErrorVector &e);
/// Same signed sums with no normalization: applying it twice returns 4x.
std::array<double, 4> signed_sums(const std::array<double, 4> &v);
ErrorVector inverse_char_transform(const CharVector &s);

/// n-fold bsm_compose of e with itself via the character transform. n >= 1.
ErrorVector compose_power(const ErrorVector &e, unsigned n);

} // namespace rgspur
