#include "optpulse/kak.hpp"

#include "optpulse/cartan.hpp"
#include "optpulse/targets.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace optpulse;
using Catch::Matchers::WithinAbs;

namespace {

ControlParams random_params(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> a(-pi, pi);
    std::uniform_real_distribution<double> t(-2.0, 2.0);
    ControlParams p;
    for (int k = 0; k < 3; ++k) {
        p.k1_left[k] = a(rng);
        p.k1_right[k] = a(rng);
        p.k2_left[k] = a(rng);
        p.k2_right[k] = a(rng);
        p.cartan_times[k] = t(rng);
    }
    return p;
}

}  // namespace

TEST_CASE("magic basis diagonalizes the cartan generators") {
    const Unitary4& m = magic_basis();
    REQUIRE(is_unitary(m, 1e-14));
    const Unitary4 ops[3] = {pauli_tensor(PauliLabel::X, PauliLabel::X),
                             pauli_tensor(PauliLabel::Y, PauliLabel::Y),
                             pauli_tensor(PauliLabel::Z, PauliLabel::Z)};
    for (const auto& op : ops) {
        const Unitary4 d = m.adjoint() * op * m;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) REQUIRE(std::abs(d(i, j)) < 1e-14);
    }
}

TEST_CASE("canonical coordinates of named gates") {
    const KakInfo id = analytic_kak(Unitary4::Identity());
    REQUIRE_THAT(id.canonical[0], WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(id.canonical[1], WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(id.canonical[2], WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(id.minimal_time, WithinAbs(0.0, 1e-9));

    // CNOT class: a single pi/4 interaction angle, minimal time 1/(2J)
    const KakInfo cx = analytic_kak(cnot(1, 2));
    REQUIRE_THAT(cx.canonical[0], WithinAbs(0.25 * pi, 1e-9));
    REQUIRE_THAT(cx.canonical[1], WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(cx.canonical[2], WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(cx.minimal_time, WithinAbs(0.5, 1e-9));
    REQUIRE_THAT(std::abs(cx.g1), WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(cx.g2, WithinAbs(1.0, 1e-9));

    // U10 class: two pi/4 angles, minimal time 1/J
    const KakInfo u10 = analytic_kak(grover_oracle(1, 0));
    REQUIRE_THAT(u10.canonical[0], WithinAbs(0.25 * pi, 1e-9));
    REQUIRE_THAT(u10.canonical[1], WithinAbs(0.25 * pi, 1e-9));
    REQUIRE_THAT(std::abs(u10.canonical[2]), WithinAbs(0.0, 1e-9));
    REQUIRE_THAT(u10.minimal_time, WithinAbs(1.0, 1e-9));

    // composites live in the CNOT class: minimal time 1/(2J)
    for (int power : {1, 2}) {
        const KakInfo k = analytic_kak(grover_oracle(1, 0) * cyclic_permutation(power));
        REQUIRE_THAT(k.minimal_time, WithinAbs(0.5, 1e-9));
    }
}

TEST_CASE("local invariants are invariant under local factors") {
    std::mt19937_64 rng(31);
    for (int i = 0; i < 100; ++i) {
        const ControlParams p = random_params(rng);
        const KakInfo full = analytic_kak(reconstruct(p));
        const KakInfo core = analytic_kak(cartan_core(p.cartan_times));
        REQUIRE(invariant_distance(full, core) < 1e-6);
        for (int k = 0; k < 3; ++k)
            REQUIRE_THAT(full.canonical[k], WithinAbs(core.canonical[k], 1e-6));
    }
}

TEST_CASE("weyl-orbit bound never exceeds the actual coupling time") {
    std::mt19937_64 rng(37);
    for (int i = 0; i < 200; ++i) {
        const ControlParams p = random_params(rng);
        const KakInfo k = analytic_kak(reconstruct(p));
        const double t = p.execution_time();
        REQUIRE(k.minimal_time <= t + 1e-9);
    }
}

TEST_CASE("canonical coordinates sit in the weyl chamber") {
    std::mt19937_64 rng(41);
    for (int i = 0; i < 200; ++i) {
        const KakInfo k = analytic_kak(reconstruct(random_params(rng)));
        REQUIRE(k.canonical[0] <= 0.25 * pi + 1e-9);
        REQUIRE(k.canonical[0] >= k.canonical[1] - 1e-9);
        REQUIRE(k.canonical[1] >= std::abs(k.canonical[2]) - 1e-9);
        REQUIRE(k.canonical[1] >= -1e-9);
        for (int j = 0; j < 3; ++j)
            REQUIRE_THAT(k.canonical_times[j], WithinAbs(k.canonical[j] / (0.5 * pi), 1e-12));
    }
}

TEST_CASE("analytic_kak rejects non-unitary input") {
    Unitary4 bad = Unitary4::Identity();
    bad(0, 0) = 3.0;
    REQUIRE_THROWS_AS(analytic_kak(bad), std::invalid_argument);
}
