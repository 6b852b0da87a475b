#pragma once

// Two-spin simulator for pulse programs under the rotating-frame Hamiltonian
// H = -w1 (cos sx + sin sy)/2 per channel + 2*pi*J ZZ/4. Ideal mode treats
// pulses as delta rotations; finite mode keeps the J term on during a
// rectangular pulse of width flip/(pi/2) * pi2_duration, which is the single
// imperfection studied here. Evolution is unitary; relaxation (T1 ~ 20 s,
// T2 ~ 7.5 s / 0.30 s for hydrogen / carbon) is orders of magnitude slower
// than any sequence here and is not modeled.

#include "optpulse/pulse.hpp"
#include "optpulse/qmat.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace optpulse {

struct MachineConfig {
    double j_hz = 215.5;          // scalar coupling
    double pi2_duration = 25e-6;  // pi/2 pulse width in seconds; 0 = ideal pulses
    double gamma_ratio = 3.98;    // thermal polarization spin2 : spin1
};

struct DeviationState {
    Hermitian4 matrix = Hermitian4::Zero();

    std::array<double, 4> populations() const {
        return {matrix(0, 0).real(), matrix(1, 1).real(), matrix(2, 2).real(), matrix(3, 3).real()};
    }

    DeviationState evolved(const Unitary4& u) const {
        return {u * matrix * u.adjoint()};
    }
};

namespace detail {

inline const Hermitian4& coupling_hamiltonian_unit_j() {
    // 2*pi*J ZZ / 4 with J = 1
    static const Hermitian4 h = 0.5 * pi * pauli_tensor(PauliLabel::Z, PauliLabel::Z);
    return h;
}

inline Hermitian4 drive_hamiltonian(int channel, double w1, double phase) {
    const Unitary2 g = -0.5 * w1 *
        (std::cos(phase) * pauli(PauliLabel::X) + std::sin(phase) * pauli(PauliLabel::Y));
    return channel == 1 ? kron2(g, Unitary2::Identity()) : kron2(Unitary2::Identity(), g);
}

inline Unitary4 exp_minus_i_hermitian(const Hermitian4& h, double t) {
    Eigen::SelfAdjointEigenSolver<Hermitian4> es(h);
    const Eigen::Vector4d w = es.eigenvalues();
    Unitary4 d = Unitary4::Zero();
    for (int k = 0; k < 4; ++k) d(k, k) = std::exp(cd(0, -w(k) * t));
    return es.eigenvectors() * d * es.eigenvectors().adjoint();
}

}  // namespace detail

// Time-ordered propagator of a program. Delay of tau (units 1/J) is exactly
// exp_cartan(0, 0, -pi/2 tau) for any pulse width. A finite-width pulse of
// flip theta runs at constant amplitude w1 = (pi/2)/pi2_duration for
// theta/w1 seconds with the coupling term active; simultaneous pulses of
// different flips share the segment until the shorter one ends.
inline Unitary4 propagator(const PulseProgram& prog, const MachineConfig& cfg) {
    if (cfg.j_hz <= 0) throw std::invalid_argument("MachineConfig.j_hz must be positive");
    if (cfg.pi2_duration < 0) throw std::invalid_argument("MachineConfig.pi2_duration must be >= 0");
    Unitary4 u = Unitary4::Identity();
    for (const PulseEvent& e : prog.events) {
        if (e.kind == PulseEvent::Kind::delay) {
            u = exp_cartan(0, 0, -0.5 * pi * e.duration) * u;
            continue;
        }
        if (cfg.pi2_duration == 0.0) {
            Unitary2 g1 = e.ch1 ? pulse_unitary(*e.ch1) : Unitary2::Identity();
            Unitary2 g2 = e.ch2 ? pulse_unitary(*e.ch2) : Unitary2::Identity();
            u = kron2(g1, g2) * u;
            continue;
        }
        const double w1 = (0.5 * pi) / cfg.pi2_duration;
        const double t1 = e.ch1 ? e.ch1->flip / w1 : 0.0;
        const double t2 = e.ch2 ? e.ch2->flip / w1 : 0.0;
        const double tshort = std::min(t1 > 0 ? t1 : t2, t2 > 0 ? t2 : t1);
        const double tlong = std::max(t1, t2);
        if (tlong <= 0) continue;
        const Hermitian4 hj = cfg.j_hz * detail::coupling_hamiltonian_unit_j();
        Hermitian4 h = hj;
        if (e.ch1 && t1 > 0) h += detail::drive_hamiltonian(1, w1, e.ch1->phase);
        if (e.ch2 && t2 > 0) h += detail::drive_hamiltonian(2, w1, e.ch2->phase);
        u = detail::exp_minus_i_hermitian(h, tshort) * u;
        if (tlong > tshort + 1e-18) {
            Hermitian4 h2 = hj;
            if (t1 > t2 && e.ch1) h2 += detail::drive_hamiltonian(1, w1, e.ch1->phase);
            if (t2 > t1 && e.ch2) h2 += detail::drive_hamiltonian(2, w1, e.ch2->phase);
            u = detail::exp_minus_i_hermitian(h2, tlong - tshort) * u;
        }
    }
    return u;
}

// High-temperature deviation part of the thermal state, a sz x I + b I x sz
// with a : b the polarization ratio, normalized so the largest diagonal
// entry is 1.
inline DeviationState thermal_state(const MachineConfig& cfg) {
    const double a = 1.0, b = cfg.gamma_ratio;
    DeviationState s;
    s.matrix = Hermitian4::Zero();
    s.matrix(0, 0) = (a + b) / (a + b);
    s.matrix(1, 1) = (a - b) / (a + b);
    s.matrix(2, 2) = (-a + b) / (a + b);
    s.matrix(3, 3) = (-a - b) / (a + b);
    return s;
}

// Temporal averaging: one experiment per cyclic-permutation power, summed.
// In ideal mode the result is lambda (|ij><ij| - I/4) with lambda = 4/3 for
// the normalized thermal state, independent of the polarization ratio.
inline DeviationState temporal_average(const std::array<PulseProgram, 3>& programs,
                                       const MachineConfig& cfg) {
    const DeviationState rho = thermal_state(cfg);
    DeviationState out;
    for (const PulseProgram& p : programs) {
        const Unitary4 u = propagator(p, cfg);
        out.matrix += (u * rho.matrix * u.adjoint()) / 3.0;
    }
    return out;
}

// Signed line amplitudes of the two doublets. Carbon lines are population
// differences across the carbon transition at fixed hydrogen state and vice
// versa; negative carbon amplitude means the carbon spin is in |1>.
struct PeakReport {
    double carbon_partner0 = 0.0;    // rho00 - rho10
    double carbon_partner1 = 0.0;    // rho01 - rho11
    double hydrogen_partner0 = 0.0;  // rho00 - rho01
    double hydrogen_partner1 = 0.0;  // rho10 - rho11
    std::array<double, 4> populations{};
    int dominant_index = 0;
    std::string dominant;            // basis label "00".."11"
};

inline PeakReport readout(const DeviationState& s) {
    PeakReport r;
    r.populations = s.populations();
    const auto& p = r.populations;
    r.carbon_partner0 = p[0] - p[2];
    r.carbon_partner1 = p[1] - p[3];
    r.hydrogen_partner0 = p[0] - p[1];
    r.hydrogen_partner1 = p[2] - p[3];
    r.dominant_index = 0;
    for (int k = 1; k < 4; ++k)
        if (p[k] > p[r.dominant_index]) r.dominant_index = k;
    r.dominant = std::string(1, char('0' + (r.dominant_index >> 1))) +
                 std::string(1, char('0' + (r.dominant_index & 1)));
    return r;
}

struct ComparisonRow {
    double pi2_duration = 0.0;  // seconds
    std::array<double, 3> fidelity_optimal{};      // vs each program's own ideal propagator
    std::array<double, 3> fidelity_conventional{};
    double fidelity_optimal_mean = 0.0;
    double fidelity_conventional_mean = 0.0;
    double purity_optimal = 0.0;
    double purity_conventional = 0.0;
    double unwanted_optimal = 0.0;
    double unwanted_conventional = 0.0;
    std::string dominant_optimal, dominant_conventional;
};

struct ComparisonReport {
    int target_index = 0;  // basis index of the intended pseudopure state
    std::vector<ComparisonRow> rows;
};

// Sweep pulse widths for two program triples implementing the same target
// observable. Fidelity is phase-invariant, against each program's own ideal
// propagator; purity is the target population contrast normalized to the
// ideal pseudopure value; "unwanted" is the carbon line that vanishes for
// the ideal target state.
inline ComparisonReport compare_sequences(const std::array<PulseProgram, 3>& optimal,
                                          const std::array<PulseProgram, 3>& conventional,
                                          const std::vector<double>& pi2_durations,
                                          MachineConfig cfg) {
    ComparisonReport report;
    MachineConfig ideal = cfg;
    ideal.pi2_duration = 0.0;
    report.target_index = readout(temporal_average(optimal, ideal)).dominant_index;
    const int j_bit = report.target_index & 1;
    const double lambda_ideal = 4.0 / 3.0;

    std::array<Unitary4, 3> ideal_opt, ideal_conv;
    for (int k = 0; k < 3; ++k) {
        ideal_opt[k] = propagator(optimal[k], ideal);
        ideal_conv[k] = propagator(conventional[k], ideal);
    }

    for (const double tp : pi2_durations) {
        MachineConfig c = cfg;
        c.pi2_duration = tp;
        ComparisonRow row;
        row.pi2_duration = tp;
        for (int k = 0; k < 3; ++k) {
            row.fidelity_optimal[k] = fidelity(propagator(optimal[k], c), ideal_opt[k]);
            row.fidelity_conventional[k] = fidelity(propagator(conventional[k], c), ideal_conv[k]);
            row.fidelity_optimal_mean += row.fidelity_optimal[k] / 3.0;
            row.fidelity_conventional_mean += row.fidelity_conventional[k] / 3.0;
        }
        auto eval = [&](const std::array<PulseProgram, 3>& triple, double& purity, double& unwanted,
                        std::string& dominant) {
            const DeviationState avg = temporal_average(triple, c);
            const PeakReport r = readout(avg);
            dominant = r.dominant;
            const auto& p = r.populations;
            double others = 0.0;
            for (int k = 0; k < 4; ++k)
                if (k != report.target_index) others += p[k];
            purity = (p[report.target_index] - others / 3.0) / lambda_ideal;
            unwanted = std::abs(p[1 - j_bit] - p[2 + (1 - j_bit)]);
        };
        eval(optimal, row.purity_optimal, row.unwanted_optimal, row.dominant_optimal);
        eval(conventional, row.purity_conventional, row.unwanted_conventional,
             row.dominant_conventional);
        report.rows.push_back(row);
    }
    return report;
}

}  // namespace optpulse
