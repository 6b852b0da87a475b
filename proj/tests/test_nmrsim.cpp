#include "optpulse/nmrsim.hpp"

#include "optpulse/compiler.hpp"
#include "optpulse/targets.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <random>

using namespace optpulse;
using namespace optpulse::pulse_text;
using Catch::Matchers::WithinAbs;

namespace {

const MachineConfig ideal{215.5, 0.0, 3.98};

std::array<PulseProgram, 3> optimal_triple() {
    return {optimal_preset("u10"), optimal_preset("u10xcp"), optimal_preset("u10xcp2")};
}

std::array<PulseProgram, 3> conventional_triple() {
    return {conventional_preset("u10"), conventional_preset("u10xcp"),
            conventional_preset("u10xcp2")};
}

}  // namespace

TEST_CASE("empty program propagates to the identity") {
    REQUIRE(propagator(PulseProgram{}, ideal).isApprox(Unitary4::Identity()));
}

TEST_CASE("single half-period delay gives the negative quarter-turn ZZ") {
    PulseProgram p;
    p.events = {PulseEvent::delay(0.5)};
    REQUIRE(propagator(p, ideal).isApprox(exp_cartan(0, 0, -pi / 4), 1e-14));
}

TEST_CASE("propagator is unitary for any width") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> flip(0.1, pi);
    std::uniform_real_distribution<double> phase(0, 2 * pi);
    for (double tp : {0.0, 10e-9, 25e-6, 250e-6}) {
        MachineConfig cfg = ideal;
        cfg.pi2_duration = tp;
        PulseProgram p;
        p.events = {PulseEvent::on1(normalized_pulse(flip(rng), phase(rng))),
                    PulseEvent::delay(0.5),
                    PulseEvent::pair(normalized_pulse(flip(rng), phase(rng)),
                                     normalized_pulse(flip(rng), phase(rng))),
                    PulseEvent::both(tok_Y)};
        REQUIRE(is_unitary(propagator(p, cfg), 1e-10));
    }
}

TEST_CASE("finite-width propagator converges to the ideal one") {
    const PulseProgram p = optimal_preset("u10");
    MachineConfig cfg = ideal;
    cfg.pi2_duration = 10e-9;
    const double f = fidelity(propagator(p, cfg), propagator(p, ideal));
    REQUIRE(f > 1.0 - 1e-6);
}

TEST_CASE("fidelity degrades monotonically with pulse width for every preset") {
    for (const char* kind : {"conventional", "optimal"}) {
        for (const char* name : {"u10", "u10xcp", "u10xcp2"}) {
            const PulseProgram p = std::string(kind) == "conventional" ? conventional_preset(name)
                                                                       : optimal_preset(name);
            const Unitary4 u0 = propagator(p, ideal);
            double prev = 1.0;
            for (double tp : {25e-6, 50e-6, 100e-6, 250e-6}) {
                MachineConfig cfg = ideal;
                cfg.pi2_duration = tp;
                const double f = fidelity(propagator(p, cfg), u0);
                REQUIRE(f < prev);
                prev = f;
            }
        }
    }
}

TEST_CASE("thermal state") {
    MachineConfig cfg = ideal;
    cfg.gamma_ratio = 1.0;
    const DeviationState sym = thermal_state(cfg);
    REQUIRE_THAT(sym.matrix(0, 0).real(), WithinAbs(1.0, 1e-15));
    REQUIRE_THAT(sym.matrix(1, 1).real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(sym.matrix(2, 2).real(), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(sym.matrix(3, 3).real(), WithinAbs(-1.0, 1e-15));

    const DeviationState th = thermal_state(ideal);
    REQUIRE_THAT(th.matrix.trace().real(), WithinAbs(0.0, 1e-15));
    const double a = 1.0, b = 3.98;
    REQUIRE_THAT(th.matrix(1, 1).real(), WithinAbs((a - b) / (a + b), 1e-15));
    REQUIRE(is_hermitian(th.matrix));
}

TEST_CASE("temporal averaging yields the pseudopure |10> state") {
    const double lambda = 4.0 / 3.0;
    for (bool conventional : {false, true}) {
        const auto triple = conventional ? conventional_triple() : optimal_triple();
        const DeviationState avg = temporal_average(triple, ideal);
        Hermitian4 expect = Hermitian4::Zero();
        expect.diagonal() << -lambda / 4, -lambda / 4, 3 * lambda / 4, -lambda / 4;
        REQUIRE((avg.matrix - expect).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("pseudopure structure is independent of the polarization ratio") {
    for (double ratio : {1.0, 2.5, 3.98, 10.0}) {
        MachineConfig cfg = ideal;
        cfg.gamma_ratio = ratio;
        const DeviationState avg = temporal_average(optimal_triple(), cfg);
        const auto p = avg.populations();
        // off-target populations all equal
        REQUIRE_THAT(p[0], WithinAbs(p[1], 1e-9));
        REQUIRE_THAT(p[1], WithinAbs(p[3], 1e-9));
        REQUIRE(p[2] > p[0]);
        // three equal eigenvalues
        Eigen::SelfAdjointEigenSolver<Hermitian4> es(avg.matrix);
        const auto w = es.eigenvalues();
        REQUIRE_THAT(w(0), WithinAbs(w(1), 1e-9));
        REQUIRE_THAT(w(1), WithinAbs(w(2), 1e-9));
    }
}

TEST_CASE("evolution preserves trace and hermiticity") {
    std::mt19937_64 rng(59);
    std::uniform_real_distribution<double> a(-pi, pi);
    const DeviationState th = thermal_state(ideal);
    const Unitary4 u = kron2(exp_su2(a(rng), a(rng), a(rng)), exp_su2(a(rng), a(rng), a(rng))) *
                       exp_cartan(a(rng), a(rng), a(rng));
    const DeviationState ev = th.evolved(u);
    REQUIRE(is_hermitian(ev.matrix, 1e-12));
    REQUIRE_THAT(ev.matrix.trace().real(), WithinAbs(0.0, 1e-12));
}

TEST_CASE("readout of the pseudopure |10> state") {
    const double lambda = 4.0 / 3.0;
    DeviationState s;
    s.matrix = Hermitian4::Zero();
    s.matrix.diagonal() << -lambda / 4, -lambda / 4, 3 * lambda / 4, -lambda / 4;
    const PeakReport r = readout(s);
    // main carbon line negative (carbon in |1>), unwanted carbon line silent
    REQUIRE_THAT(r.carbon_partner0, WithinAbs(-lambda, 1e-12));
    REQUIRE_THAT(r.carbon_partner1, WithinAbs(0.0, 1e-12));
    REQUIRE_THAT(r.hydrogen_partner1, WithinAbs(lambda, 1e-12));
    REQUIRE(r.dominant == "10");

    // pseudopure |00>: main carbon line positive
    DeviationState s00;
    s00.matrix = Hermitian4::Zero();
    s00.matrix.diagonal() << 3 * lambda / 4, -lambda / 4, -lambda / 4, -lambda / 4;
    REQUIRE(readout(s00).carbon_partner0 > 0);
    REQUIRE(readout(s00).dominant == "00");

    // fully mixed deviation: silence
    const PeakReport zero = readout(DeviationState{});
    REQUIRE(zero.carbon_partner0 == 0.0);
    REQUIRE(zero.carbon_partner1 == 0.0);
    REQUIRE(zero.hydrogen_partner0 == 0.0);
    REQUIRE(zero.hydrogen_partner1 == 0.0);
}

TEST_CASE("compare_sequences reproduces the hard-pulse experiment orderings") {
    const std::vector<double> widths{0.0, 25e-6, 50e-6, 100e-6, 250e-6};
    const ComparisonReport rep = compare_sequences(optimal_triple(), conventional_triple(), widths, ideal);
    REQUIRE(rep.target_index == 2);
    REQUIRE(rep.rows.size() == widths.size());

    const ComparisonRow& w0 = rep.rows[0];
    REQUIRE_THAT(w0.fidelity_optimal_mean, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(w0.fidelity_conventional_mean, WithinAbs(1.0, 1e-12));
    REQUIRE_THAT(w0.purity_optimal - w0.purity_conventional, WithinAbs(0.0, 1e-9));

    double prev_opt = 2.0, prev_conv = 2.0;
    for (std::size_t i = 1; i < rep.rows.size(); ++i) {
        const ComparisonRow& r = rep.rows[i];
        REQUIRE(r.fidelity_optimal_mean >= r.fidelity_conventional_mean);
        REQUIRE(r.purity_optimal >= r.purity_conventional);
        REQUIRE(r.fidelity_optimal_mean < prev_opt);
        REQUIRE(r.fidelity_conventional_mean < prev_conv);
        prev_opt = r.fidelity_optimal_mean;
        prev_conv = r.fidelity_conventional_mean;
    }

    const ComparisonRow& last = rep.rows.back();  // 250 us
    REQUIRE(last.fidelity_optimal_mean > last.fidelity_conventional_mean);
    REQUIRE(last.purity_optimal > last.purity_conventional);
    REQUIRE(last.unwanted_optimal < last.unwanted_conventional);
    REQUIRE(last.dominant_optimal == "10");
    REQUIRE(last.dominant_conventional == "10");
}

TEST_CASE("machine config validation") {
    MachineConfig bad = ideal;
    bad.j_hz = 0.0;
    REQUIRE_THROWS_AS(propagator(PulseProgram{}, bad), std::invalid_argument);
    bad = ideal;
    bad.pi2_duration = -1e-6;
    REQUIRE_THROWS_AS(propagator(PulseProgram{}, bad), std::invalid_argument);
}
