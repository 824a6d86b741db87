#include "rgspur/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <random>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace rgspur::oracle {

namespace {

using cd = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;

const cd kI{0.0, 1.0};

Mat2 pauli_x() { return (Mat2() << 0, 1, 1, 0).finished(); }
Mat2 pauli_z() { return (Mat2() << 1, 0, 0, -1).finished(); }
Mat2 hadamard() { return (Mat2() << 1, 1, 1, -1).finished() / std::sqrt(2.0); }
Mat2 phase_s() { return (Mat2() << 1, 0, 0, kI).finished(); }

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

// Single-qubit operator on qubit q of n (q = 0 is most significant).
Matrix embed(const Mat2 &op, int q, int n) {
    Matrix out = Matrix::Identity(1, 1);
    for (int k = 0; k < n; ++k) {
        out = kron(out, k == q ? Matrix(op) : Matrix(Matrix::Identity(2, 2)));
    }
    return out;
}

Matrix cnot(int control, int target, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix out = Matrix::Zero(dim, dim);
    for (Eigen::Index col = 0; col < dim; ++col) {
        Eigen::Index row = col;
        if ((col >> (n - 1 - control)) & 1) {
            row ^= Eigen::Index{1} << (n - 1 - target);
        }
        out(row, col) = 1.0;
    }
    return out;
}

Matrix cz(int q1, int q2, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    Matrix out = Matrix::Identity(dim, dim);
    for (Eigen::Index k = 0; k < dim; ++k) {
        if (((k >> (n - 1 - q1)) & 1) && ((k >> (n - 1 - q2)) & 1)) {
            out(k, k) = -1.0;
        }
    }
    return out;
}

// Projector onto the (-1)^outcome eigenspace of a Pauli on qubit q.
Matrix projector(const Mat2 &pauli, int q, int outcome, int n) {
    const Eigen::Index dim = Eigen::Index{1} << n;
    const double sign = outcome == 0 ? 1.0 : -1.0;
    return (Matrix::Identity(dim, dim) + sign * embed(pauli, q, n)) / 2.0;
}

// Traces out every qubit not listed in `keep` (listed in output order).
Matrix partial_trace(const Matrix &rho, int n, const std::vector<int> &keep) {
    std::vector<int> traced;
    for (int q = 0; q < n; ++q) {
        if (std::find(keep.begin(), keep.end(), q) == keep.end()) {
            traced.push_back(q);
        }
    }
    const int nk = static_cast<int>(keep.size());
    const int nt = static_cast<int>(traced.size());
    const Eigen::Index dk = Eigen::Index{1} << nk;
    auto full_index = [&](Eigen::Index kept_bits, Eigen::Index traced_bits) {
        Eigen::Index idx = 0;
        for (int i = 0; i < nk; ++i) {
            if ((kept_bits >> (nk - 1 - i)) & 1) {
                idx |= Eigen::Index{1} << (n - 1 - keep[i]);
            }
        }
        for (int i = 0; i < nt; ++i) {
            if ((traced_bits >> (nt - 1 - i)) & 1) {
                idx |= Eigen::Index{1} << (n - 1 - traced[i]);
            }
        }
        return idx;
    };
    Matrix out = Matrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        for (Eigen::Index c = 0; c < dk; ++c) {
            cd acc = 0.0;
            for (Eigen::Index t = 0; t < (Eigen::Index{1} << nt); ++t) {
                acc += rho(full_index(r, t), full_index(c, t));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

struct ParityCircuit {
    Matrix unitary;     // 4-qubit, applied before readout
    Mat2 read_a2;       // Pauli read on a2
    Mat2 read_b2;       // Pauli read on b2
    Matrix kept_after;  // 2-qubit, applied to the kept pair after the trace
};

ParityCircuit circuit_for(Stabilizer stab) {
    const Matrix id2 = Matrix::Identity(4, 4);
    switch (stab) {
    case Stabilizer::ZX:
        return {cnot(0, 2, 4) * cnot(3, 1, 4), pauli_z(), pauli_x(), id2};
    case Stabilizer::XZ:
        return {cnot(2, 0, 4) * cnot(1, 3, 4), pauli_x(), pauli_z(), id2};
    case Stabilizer::YY: {
        const Mat2 hsh = hadamard() * phase_s() * hadamard();
        const Matrix local = kron(hsh, phase_s());
        const Matrix local_dag = local.adjoint();
        const Matrix pre = kron(local_dag, local_dag);
        return {cnot(0, 2, 4) * cnot(3, 1, 4) * pre, pauli_z(), pauli_x(), local};
    }
    }
    throw ParameterError("unknown stabilizer");
}

Matrix exchange_frame() {
    const Mat2 h = hadamard();
    return kron(h, h);
}

double real_trace(const Matrix &m) { return m.trace().real(); }

} // namespace

// --- DensityMatrix ----------------------------------------------------------

DensityMatrix::DensityMatrix(Matrix rho) : rho_(std::move(rho)), qubits_(0) {
    if (rho_.rows() != rho_.cols()) {
        throw ParameterError("density matrix must be square");
    }
    Eigen::Index dim = rho_.rows();
    while (dim > 1 && dim % 2 == 0) {
        dim /= 2;
        ++qubits_;
    }
    if (dim != 1 || qubits_ < 1 || qubits_ > 4) {
        throw ParameterError(fmt::format("density matrix dimension {} is not 2^n with 1 <= n <= 4", rho_.rows()));
    }
    if (std::abs(rho_.trace() - cd{1.0, 0.0}) > kTraceTolerance) {
        throw ParameterError("density matrix trace differs from 1");
    }
    if ((rho_ - rho_.adjoint()).cwiseAbs().maxCoeff() > kHermitianTolerance) {
        throw ParameterError("density matrix is not Hermitian");
    }
}

DensityMatrix tensor(const DensityMatrix &lhs, const DensityMatrix &rhs) {
    return DensityMatrix(kron(lhs.rho_, rhs.rho_));
}

Eigen::Vector4cd graph_basis_state(std::size_t k) {
    Eigen::Vector4cd g(0.5, 0.5, 0.5, -0.5);
    // |a b>: Z_a flips sign when a = 1, Z_b when b = 1.
    const int fa = a_flip_of(k), fb = b_flip_of(k);
    for (int idx = 0; idx < 4; ++idx) {
        const int a = (idx >> 1) & 1, b = idx & 1;
        if ((fa && a) != (fb && b)) {
            g(idx) = -g(idx);
        }
    }
    return g;
}

DensityMatrix bell_diagonal_state(const ErrorVector &e) {
    Matrix rho = Matrix::Zero(4, 4);
    for (std::size_t k = 0; k < 4; ++k) {
        const Eigen::Vector4cd psi = graph_basis_state(k);
        rho += e[k] * (psi * psi.adjoint());
    }
    return DensityMatrix(rho);
}

BellWeights extract_weights(const DensityMatrix &rho) {
    if (rho.qubits() != 2) {
        throw ParameterError("graph-basis weights need a two-qubit state");
    }
    BellWeights out;
    std::array<Eigen::Vector4cd, 4> basis;
    for (std::size_t k = 0; k < 4; ++k) {
        basis[k] = graph_basis_state(k);
    }
    for (std::size_t k = 0; k < 4; ++k) {
        for (std::size_t l = 0; l < 4; ++l) {
            const cd amp = basis[k].adjoint() * rho.matrix() * basis[l];
            if (k == l) {
                out.weights[k] = amp.real();
            } else {
                out.max_off_diagonal = std::max(out.max_off_diagonal, std::abs(amp));
            }
        }
    }
    return out;
}

std::string_view to_string(KeptFrame frame) { return frame == KeptFrame::Native ? "native" : "exchanged"; }

KeptFrame reference_frame(Stabilizer stab) {
    return stab == Stabilizer::YY ? KeptFrame::Native : KeptFrame::Exchanged;
}

// --- purification circuit ---------------------------------------------------

ParityResult run_parity_check(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2, KeptFrame frame) {
    const ParityCircuit circuit = circuit_for(stab);
    const Matrix &u = circuit.unitary;

    // Outcome product the ideal input produces; "agree" means matching it.
    const Matrix ideal = tensor(bell_diagonal_state(ErrorVector::perfect()), bell_diagonal_state(ErrorVector::perfect()))
                             .matrix();
    const Matrix parity = embed(circuit.read_a2, 2, 4) * embed(circuit.read_b2, 3, 4);
    const double expected_sign = real_trace(parity * u * ideal * u.adjoint()) >= 0.0 ? 1.0 : -1.0;

    const Matrix rho = tensor(bell_diagonal_state(e1), bell_diagonal_state(e2)).matrix();
    const Matrix evolved = u * rho * u.adjoint();

    Matrix kept = Matrix::Zero(4, 4);
    double p_keep = 0.0;
    double p_discard = 0.0;
    for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
            const Matrix proj = projector(circuit.read_a2, 2, m1, 4) * projector(circuit.read_b2, 3, m2, 4);
            const Matrix branch = proj * evolved * proj;
            const double p = real_trace(branch);
            const double sign = (m1 ^ m2) == 0 ? 1.0 : -1.0;
            if (sign == expected_sign) {
                p_keep += p;
                kept += partial_trace(branch, 4, {0, 1});
            } else {
                p_discard += p;
            }
        }
    }

    ParityResult out;
    out.p_discard = p_discard;
    if (!(p_keep > 0.0)) {
        out.keep = PurifyOutcome{std::nullopt, 0.0};
        return out;
    }
    kept = circuit.kept_after * kept * circuit.kept_after.adjoint();
    if (frame == KeptFrame::Exchanged) {
        const Matrix h = exchange_frame();
        kept = h * kept * h.adjoint();
    }
    kept /= p_keep;
    // Projection round-off can leave an anti-Hermitian residue near 1e-17.
    kept = (kept + kept.adjoint()) / 2.0;
    const BellWeights weights = extract_weights(DensityMatrix(kept));
    out.max_off_diagonal = weights.max_off_diagonal;
    out.keep = PurifyOutcome{ErrorVector::normalized(weights.weights), p_keep};
    return out;
}

PurifyOutcome oracle_purify(Stabilizer stab, const ErrorVector &e1, const ErrorVector &e2) {
    return run_parity_check(stab, e1, e2, reference_frame(stab)).keep;
}

// --- rotated BSM ------------------------------------------------------------

BsmDetail oracle_bsm_detailed(const ErrorVector &e1, const ErrorVector &e2) {
    const Matrix rho = tensor(bell_diagonal_state(e1), bell_diagonal_state(e2)).matrix();
    const Matrix joined = cz(1, 2, 4);
    const Matrix evolved = joined * rho * joined.adjoint();

    BsmDetail out{ErrorVector::perfect(), 0.0, {}};
    Matrix result = Matrix::Zero(4, 4);
    for (int m1 = 0; m1 < 2; ++m1) {
        for (int m2 = 0; m2 < 2; ++m2) {
            const Matrix proj = projector(pauli_x(), 1, m1, 4) * projector(pauli_x(), 2, m2, 4);
            Matrix branch = proj * evolved * proj;
            out.branch_probabilities[static_cast<std::size_t>(2 * m1 + m2)] = real_trace(branch);
            // Outcome m1 on b1 leaves Z on b2, m2 on a2 leaves Z on a1.
            Matrix fix = Matrix::Identity(16, 16);
            if (m2) {
                fix = embed(pauli_z(), 0, 4) * fix;
            }
            if (m1) {
                fix = embed(pauli_z(), 3, 4) * fix;
            }
            branch = fix * branch * fix.adjoint();
            result += partial_trace(branch, 4, {0, 3});
        }
    }
    result = (result + result.adjoint()) / 2.0;
    const BellWeights weights = extract_weights(DensityMatrix(result));
    out.result = ErrorVector::normalized(weights.weights);
    out.max_off_diagonal = weights.max_off_diagonal;
    return out;
}

ErrorVector oracle_bsm(const ErrorVector &e1, const ErrorVector &e2) { return oracle_bsm_detailed(e1, e2).result; }

// --- reconciliation ---------------------------------------------------------

bool Reconciliation::analytic_agrees() const {
    return std::all_of(rows.begin(), rows.end(), [&](const ReconciliationRow &row) {
        return row.analytic_max_deviation <= options.tolerance;
    });
}

namespace {

double max_component_gap(const PurifyOutcome &a, const PurifyOutcome &b) {
    if (a.ok() != b.ok()) {
        return 1.0;
    }
    double gap = std::abs(a.p_success - b.p_success);
    if (a.ok()) {
        for (std::size_t k = 0; k < 4; ++k) {
            gap = std::max(gap, std::abs((*a.kept)[k] - (*b.kept)[k]));
        }
    }
    return gap;
}

} // namespace

Reconciliation reconcile(const ReconcileOptions &options) {
    Reconciliation out;
    out.options = options;
    std::mt19937_64 rng(options.seed);
    std::vector<std::pair<ErrorVector, ErrorVector>> inputs;
    inputs.reserve(options.samples);
    for (std::size_t i = 0; i < options.samples; ++i) {
        ErrorVector a = random_error_vector(rng);
        ErrorVector b = random_error_vector(rng);
        inputs.emplace_back(a, b);
    }

    for (Stabilizer circuit : kAllStabilizers) {
        const std::size_t slot = static_cast<std::size_t>(circuit);
        const PurificationTable &analytic =
            options.analytic[slot] != nullptr ? *options.analytic[slot] : purification_table(circuit);

        std::array<double, 3> success_gap{};
        std::array<std::array<double, 2>, 3> transform_gap{};
        double self_gap = 0.0;
        ReconciliationRow row{circuit, std::nullopt, std::nullopt, std::nullopt, false, 0.0, 0.0};

        for (const auto &[e1, e2] : inputs) {
            const ParityResult native = run_parity_check(circuit, e1, e2, KeptFrame::Native);
            const ParityResult exchanged = run_parity_check(circuit, e1, e2, KeptFrame::Exchanged);
            row.oracle_max_off_diagonal =
                std::max({row.oracle_max_off_diagonal, native.max_off_diagonal, exchanged.max_off_diagonal});

            for (Stabilizer listed : kAllStabilizers) {
                const std::size_t j = static_cast<std::size_t>(listed);
                const PurificationTable &quoted = quoted_table(listed);
                success_gap[j] = std::max(success_gap[j], std::abs(quoted.success(e1, e2) - native.keep.p_success));
                const PurifyOutcome q = purify(quoted, e1, e2);
                transform_gap[j][0] = std::max(transform_gap[j][0], max_component_gap(q, native.keep));
                transform_gap[j][1] = std::max(transform_gap[j][1], max_component_gap(q, exchanged.keep));
            }

            const PurificationTable &same_label = quoted_table(circuit);
            double quoted_sum = 0.0;
            for (const BilinearForm &f : same_label.output) {
                quoted_sum += f(e1, e2);
            }
            self_gap = std::max(self_gap, std::abs(quoted_sum - same_label.success(e1, e2)));

            const ParityResult &reference = reference_frame(circuit) == KeptFrame::Native ? native : exchanged;
            PurifyOutcome analytic_out = purify(analytic, e1, e2);
            double gap = max_component_gap(analytic_out, reference.keep);
            gap = std::max(gap, std::abs(analytic.success(e1, e2) - reference.keep.p_success));
            row.analytic_max_deviation = std::max(row.analytic_max_deviation, gap);
        }

        for (Stabilizer listed : kAllStabilizers) {
            const std::size_t j = static_cast<std::size_t>(listed);
            if (!row.success_match && success_gap[j] <= options.tolerance) {
                row.success_match = listed;
            }
            for (KeptFrame frame : {KeptFrame::Native, KeptFrame::Exchanged}) {
                const std::size_t f = frame == KeptFrame::Native ? 0 : 1;
                if (!row.transform_match && transform_gap[j][f] <= options.tolerance) {
                    row.transform_match = listed;
                    row.transform_frame = frame;
                }
            }
        }
        row.quoted_self_consistent = self_gap <= 1e-12;
        out.rows.push_back(row);
    }
    return out;
}

std::string format_report(const Reconciliation &r) {
    auto label = [](const std::optional<Stabilizer> &s) {
        return s ? std::string(to_string(*s)) : std::string("none");
    };
    std::string out = fmt::format("oracle reconciliation: {} random pairs, seed {}, tolerance {:.0e}\n",
                                  r.options.samples, r.options.seed, r.options.tolerance);
    out += fmt::format("{:<8} {:<10} {:<32} {:<16} {:<14} {}\n", "circuit", "success", "output transform",
                       "quoted labels", "analytic dev", "status");
    for (const ReconciliationRow &row : r.rows) {
        std::string transform = label(row.transform_match);
        if (row.transform_frame) {
            transform += fmt::format(" ({} frame)", to_string(*row.transform_frame));
        }
        const bool ok = row.analytic_max_deviation <= r.options.tolerance;
        out += fmt::format("{:<8} {:<10} {:<32} {:<16} {:<14.3e} {}\n", to_string(row.circuit),
                           "P_" + label(row.success_match), "listed as " + transform,
                           row.quoted_self_consistent ? "self-consistent" : "swapped", row.analytic_max_deviation,
                           ok ? "OK" : "MISMATCH");
    }
    out += r.analytic_agrees() ? "analytic layer agrees with the oracle\n"
                               : "analytic layer DISAGREES with the oracle\n";
    return out;
}

std::string golden_fixtures_json(std::size_t random_per_stabilizer, std::uint64_t seed) {
    using nlohmann::json;
    std::vector<std::tuple<Stabilizer, ErrorVector, ErrorVector, std::string>> cases = {
        {Stabilizer::ZX, ErrorVector(0.9, 0, 0, 0.1), ErrorVector(0.9, 0, 0, 0.1), "zx_iz_biased_pair"},
        {Stabilizer::ZX, ErrorVector(0.9, 0, 0, 0.1), ErrorVector::perfect(), "zx_detects_b_side"},
        {Stabilizer::XZ, ErrorVector(0.9, 0.1, 0, 0), ErrorVector::perfect(), "xz_detects_a_side"},
        {Stabilizer::YY, ErrorVector(0.85, 0.05, 0.05, 0.05), ErrorVector(0.85, 0.05, 0.05, 0.05), "yy_symmetric"},
        {Stabilizer::YY, ErrorVector(0.9, 0.1, 0, 0), ErrorVector::perfect(), "yy_detects_single_flip"},
    };
    std::mt19937_64 rng(seed);
    for (Stabilizer s : kAllStabilizers) {
        for (std::size_t i = 0; i < random_per_stabilizer; ++i) {
            ErrorVector a = random_error_vector(rng);
            ErrorVector b = random_error_vector(rng);
            cases.emplace_back(s, a, b, fmt::format("random_{}_{}", to_string(s), i));
        }
    }
    json doc;
    doc["generator"] = "rgspur oracle validate";
    doc["seed"] = seed;
    doc["cases"] = json::array();
    for (const auto &[stab, e1, e2, name] : cases) {
        const PurifyOutcome o = oracle_purify(stab, e1, e2);
        json c;
        c["name"] = name;
        c["stabilizer"] = std::string(to_string(stab));
        c["e1"] = e1.components();
        c["e2"] = e2.components();
        c["p_success"] = o.p_success;
        c["kept"] = o.ok() ? json(o.kept->components()) : json(nullptr);
        doc["cases"].push_back(c);
    }
    return doc.dump(2) + "\n";
}

} // namespace rgspur::oracle
