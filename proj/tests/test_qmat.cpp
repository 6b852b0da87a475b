#include "optpulse/qmat.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace optpulse;
using Catch::Matchers::WithinAbs;

namespace {

Unitary4 random_su4(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> angle(-pi, pi);
    const Unitary2 a = exp_su2(angle(rng), angle(rng), angle(rng));
    const Unitary2 b = exp_su2(angle(rng), angle(rng), angle(rng));
    const Unitary2 c = exp_su2(angle(rng), angle(rng), angle(rng));
    const Unitary2 d = exp_su2(angle(rng), angle(rng), angle(rng));
    return kron2(a, b) * exp_cartan(angle(rng), angle(rng), angle(rng)) * kron2(c, d);
}

}  // namespace

TEST_CASE("pauli_tensor basics") {
    REQUIRE(pauli_tensor(PauliLabel::I, PauliLabel::I).isApprox(Unitary4::Identity()));

    Unitary4 zz_expect = Unitary4::Zero();
    zz_expect.diagonal() << 1, -1, -1, 1;
    REQUIRE(pauli_tensor(PauliLabel::Z, PauliLabel::Z).isApprox(zz_expect));

    // sx (x) sy antidiagonal entries, top to bottom: -i, i, -i, i
    const Unitary4 xy = pauli_tensor(PauliLabel::X, PauliLabel::Y);
    const cd entries[4] = {xy(0, 3), xy(1, 2), xy(2, 1), xy(3, 0)};
    REQUIRE(std::abs(entries[0] - cd(0, -1)) < 1e-15);
    REQUIRE(std::abs(entries[1] - cd(0, 1)) < 1e-15);
    REQUIRE(std::abs(entries[2] - cd(0, -1)) < 1e-15);
    REQUIRE(std::abs(entries[3] - cd(0, 1)) < 1e-15);
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i + j != 3) REQUIRE(std::abs(xy(i, j)) < 1e-15);

    REQUIRE_THROWS_AS(pauli_label_from_char('q'), std::invalid_argument);
}

TEST_CASE("pauli tensors are trace-orthogonal") {
    const PauliLabel labels[4] = {PauliLabel::I, PauliLabel::X, PauliLabel::Y, PauliLabel::Z};
    for (int a = 0; a < 16; ++a) {
        for (int b = 0; b < 16; ++b) {
            const Unitary4 pa = pauli_tensor(labels[a / 4], labels[a % 4]);
            const Unitary4 pb = pauli_tensor(labels[b / 4], labels[b % 4]);
            const cd tr = (pa.adjoint() * pb).trace();
            const double expect = a == b ? 4.0 : 0.0;
            REQUIRE_THAT(tr.real(), WithinAbs(expect, 1e-14));
            REQUIRE_THAT(tr.imag(), WithinAbs(0.0, 1e-14));
        }
    }
}

TEST_CASE("exp_su2 closed form") {
    REQUIRE(exp_su2(0, 0, 0).isApprox(Unitary2::Identity()));

    const Unitary2 x_half = exp_su2(0.5 * pi, 0, 0);
    REQUIRE(x_half.isApprox((cd(0, 1) * pauli(PauliLabel::X)).eval(), 1e-14));

    // pi pulse along (1,1,0): i (sx + sy) / sqrt(2)
    const double c = pi / (2 * std::sqrt(2.0));
    const Unitary2 p45 = exp_su2(c, c, 0);
    const Unitary2 expect = cd(0, 1) * (pauli(PauliLabel::X) + pauli(PauliLabel::Y)) / std::sqrt(2.0);
    REQUIRE(p45.isApprox(expect, 1e-14));
}

TEST_CASE("exp_su2 is special unitary for random inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < 200; ++i) {
        const Unitary2 u = exp_su2(angle(rng), angle(rng), angle(rng));
        REQUIRE((u.adjoint() * u - Unitary2::Identity()).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(std::abs(u.determinant() - cd(1, 0)) < 1e-12);
    }
    // series guard at the origin
    const Unitary2 tiny = exp_su2(1e-15, -1e-15, 1e-15);
    REQUIRE((tiny - Unitary2::Identity()).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("exp_cartan closed form and commuting family") {
    REQUIRE(exp_cartan(0, 0, 0).isApprox(Unitary4::Identity()));

    Unitary4 zz = Unitary4::Zero();
    zz.diagonal() << std::exp(cd(0, -pi / 4)), std::exp(cd(0, pi / 4)), std::exp(cd(0, pi / 4)),
        std::exp(cd(0, -pi / 4));
    REQUIRE(exp_cartan(0, 0, -pi / 4).isApprox(zz, 1e-14));

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < 50; ++i) {
        const double c1 = angle(rng), c2 = angle(rng), c3 = angle(rng);
        const double d1 = angle(rng), d2 = angle(rng), d3 = angle(rng);
        const Unitary4 lhs = exp_cartan(c1, c2, c3) * exp_cartan(d1, d2, d3);
        const Unitary4 rhs = exp_cartan(c1 + d1, c2 + d2, c3 + d3);
        REQUIRE((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        REQUIRE(is_unitary(lhs, 1e-12));
        REQUIRE(std::abs(lhs.determinant() - cd(1, 0)) < 1e-10);
    }
}

TEST_CASE("distance metrics") {
    const Unitary4 id = Unitary4::Identity();
    REQUIRE_THAT(frobenius_distance(id, id), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(frobenius_distance(id, (-id).eval()), WithinAbs(4.0, 1e-15));

    Unitary4 d = id;
    d(3, 3) = -1;
    REQUIRE_THAT(frobenius_distance(id, d), WithinAbs(2.0, 1e-15));
    REQUIRE_THAT(phase_invariant_distance(id, d), WithinAbs(2.0, 1e-15));

    REQUIRE_THAT(phase_invariant_distance(id, (cd(0, 1) * id).eval()), WithinAbs(0.0, 1e-15));
    REQUIRE_THAT(phase_invariant_distance(id, (-id).eval()), WithinAbs(0.0, 1e-15));
}

TEST_CASE("phase-invariant distance vanishes only up to global phase") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> angle(-pi, pi);
    for (int i = 0; i < 100; ++i) {
        const Unitary4 u = random_su4(rng);
        const double phi = angle(rng);
        const Unitary4 v = std::exp(cd(0, phi)) * u;
        REQUIRE(phase_invariant_distance(u, v) < 1e-12);
        REQUIRE(frobenius_distance(u, v) >= phase_invariant_distance(u, v) - 1e-14);
    }
}

TEST_CASE("fidelity") {
    std::mt19937_64 rng(23);
    const Unitary4 u = random_su4(rng);
    REQUIRE_THAT(fidelity(u, u), WithinAbs(1.0, 1e-14));
    REQUIRE_THAT(fidelity(Unitary4::Identity(), pauli_tensor(PauliLabel::X, PauliLabel::I)),
                 WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(fidelity(Unitary4::Identity(), exp_cartan(0, 0, -pi / 4)),
                 WithinAbs(std::cos(pi / 4), 1e-14));
}
