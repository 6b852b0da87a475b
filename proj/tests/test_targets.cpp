#include "optpulse/targets.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace optpulse;
using Catch::Matchers::WithinAbs;

TEST_CASE("grover oracles are integer SO(4) matrices picking their data") {
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            const Unitary4 u = grover_oracle(i, j);
            // entries in {0, +-1}
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 4; ++c) {
                    const double re = u(r, c).real();
                    REQUIRE(u(r, c).imag() == 0.0);
                    REQUIRE((re == 0.0 || re == 1.0 || re == -1.0));
                }
            REQUIRE((u * u.transpose() - Unitary4::Identity()).cwiseAbs().maxCoeff() < 1e-14);
            REQUIRE_THAT(std::abs(u.determinant() - cd(1, 0)), WithinAbs(0.0, 1e-14));
            // |00> column supported on |ij> only, unit modulus
            const int target_row = 2 * i + j;
            for (int r = 0; r < 4; ++r) {
                if (r == target_row)
                    REQUIRE_THAT(std::abs(u(r, 0)), WithinAbs(1.0, 1e-14));
                else
                    REQUIRE(std::abs(u(r, 0)) == 0.0);
            }
        }
    }
    REQUIRE_THROWS_AS(grover_oracle(2, 0), std::invalid_argument);
}

TEST_CASE("u10 acts on |00> with phase pi") {
    const Unitary4 u = grover_oracle(1, 0);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(0) = 1;
    const Eigen::Vector4cd w = u * v;
    REQUIRE_THAT(std::abs(w(2) - cd(-1, 0)), WithinAbs(0.0, 1e-14));
    REQUIRE_THAT(oracle_phase(1, 0), WithinAbs(pi, 1e-14));
}

TEST_CASE("cnot definitions") {
    const Unitary4 c12 = cnot(1, 2), c21 = cnot(2, 1);
    Eigen::Vector4cd v = Eigen::Vector4cd::Zero();
    v(2) = 1;  // |10>
    REQUIRE_THAT(std::abs((c12 * v)(3) - cd(1, 0)), WithinAbs(0.0, 1e-14));
    v.setZero();
    v(1) = 1;  // |01>
    REQUIRE_THAT(std::abs((c21 * v)(3) - cd(1, 0)), WithinAbs(0.0, 1e-14));
    REQUIRE((c12 * c12).isApprox(Unitary4::Identity()));
    REQUIRE((c21 * c21).isApprox(Unitary4::Identity()));
    REQUIRE_THROWS_AS(cnot(1, 1), std::invalid_argument);
}

TEST_CASE("cyclic permutation identities") {
    const Unitary4 ucp = cyclic_permutation(1);
    REQUIRE(ucp.isApprox(cnot(1, 2) * cnot(2, 1)));
    REQUIRE((ucp * ucp).isApprox(cyclic_permutation(2)));
    REQUIRE(cyclic_permutation(2).isApprox(cnot(2, 1) * cnot(1, 2)));
    REQUIRE((ucp * ucp * ucp).isApprox(Unitary4::Identity()));
    REQUIRE(cyclic_permutation(0).isApprox(Unitary4::Identity()));

    // fixes |00>, cycles |01> -> |10> -> |11> -> |01>
    Eigen::Vector4cd v;
    v.setZero();
    v(1) = 1;
    REQUIRE_THAT(std::abs((ucp * v)(2) - cd(1, 0)), WithinAbs(0.0, 1e-14));
    v.setZero();
    v(2) = 1;
    REQUIRE_THAT(std::abs((ucp * v)(3) - cd(1, 0)), WithinAbs(0.0, 1e-14));
    v.setZero();
    v(3) = 1;
    REQUIRE_THAT(std::abs((ucp * v)(1) - cd(1, 0)), WithinAbs(0.0, 1e-14));

    // population permutation: conjugates diagonals to diagonals
    Unitary4 d = Unitary4::Zero();
    d.diagonal() << 1, 2, 3, 4;
    const Unitary4 cd4 = ucp * d * ucp.adjoint();
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j) REQUIRE(std::abs(cd4(i, j)) < 1e-15);

    REQUIRE_THROWS_AS(cyclic_permutation(3), std::invalid_argument);
    REQUIRE_THROWS_AS(cyclic_permutation(-1), std::invalid_argument);
}

TEST_CASE("target spec parsing and resolution") {
    const TargetSpec s1 = TargetSpec::parse("u10");
    REQUIRE(s1.resolve().isApprox(grover_oracle(1, 0)));
    REQUIRE(s1.spectrum_offset() == 1.0);

    const TargetSpec s2 = TargetSpec::parse("u10xcp");
    REQUIRE(s2.resolve().isApprox(grover_oracle(1, 0) * cyclic_permutation(1)));
    REQUIRE(s2.spectrum_offset() == 0.5);

    const TargetSpec s3 = TargetSpec::parse("u01xcp2");
    REQUIRE(s3.resolve().isApprox(grover_oracle(0, 1) * cyclic_permutation(2)));

    REQUIRE_THROWS_AS(TargetSpec::parse("u12"), std::invalid_argument);
    REQUIRE_THROWS_AS(TargetSpec::parse("u10xcp3"), std::invalid_argument);
    REQUIRE_THROWS_AS(TargetSpec::parse("v10"), std::invalid_argument);

    const TargetSpec raw = TargetSpec::from_matrix(Unitary4::Identity());
    REQUIRE(raw.resolve().isApprox(Unitary4::Identity()));
    REQUIRE_FALSE(raw.spectrum_offset().has_value());

    Unitary4 bad = Unitary4::Identity();
    bad(0, 0) = 2.0;
    REQUIRE_THROWS_AS(TargetSpec::from_matrix(bad), std::invalid_argument);
}
