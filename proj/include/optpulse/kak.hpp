#pragma once

// Analytic KAK oracle, independent of the variational route: conjugate into
// the magic (Bell) basis, read the spectrum of m = M^T M, extract canonical
// Cartan coordinates folded into the Weyl chamber, and the local-equivalence
// (Makhlin) invariants. Also provides the minimal coupling time over the
// Weyl orbit, a lower bound on any decomposition's execution time.

#include "optpulse/qmat.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>

namespace optpulse {

inline const Unitary4& magic_basis() {
    static const Unitary4 m = [] {
        Unitary4 v;
        const double s = 1.0 / std::sqrt(2.0);
        const cd i(0, 1);
        v << s, 0, 0, i * s,
             0, i * s, s, 0,
             0, i * s, -s, 0,
             s, 0, 0, -i * s;
        return v;
    }();
    return m;
}

struct KakInfo {
    cd g1;                               // Makhlin G1 (complex)
    double g2 = 0.0;                     // Makhlin G2 (real)
    std::array<double, 3> canonical;     // exponent coefficients, Weyl chamber
    std::array<double, 3> canonical_times;  // |t_i| <= 1/2, units of 1/J
    double minimal_time = 0.0;           // min sum|t_i| over the Weyl orbit
};

namespace detail {

inline Unitary4 su4_normalize(const Unitary4& u) {
    const cd det = u.determinant();
    if (std::abs(std::abs(det) - 1.0) > 1e-8)
        throw std::invalid_argument("analytic_kak: input is not unitary (|det| != 1)");
    return u * std::pow(det, cd(-0.25, 0.0));
}

// Diagonal patterns of XX, YY, ZZ in the magic basis (rows of the 4x3 pattern
// matrix); fixed by the magic_basis() convention above.
inline const std::array<std::array<double, 3>, 4>& cartan_patterns() {
    static const std::array<std::array<double, 3>, 4> pats = [] {
        std::array<std::array<double, 3>, 4> p{};
        const Unitary4& m = magic_basis();
        const Unitary4 ops[3] = {pauli_tensor(PauliLabel::X, PauliLabel::X),
                                 pauli_tensor(PauliLabel::Y, PauliLabel::Y),
                                 pauli_tensor(PauliLabel::Z, PauliLabel::Z)};
        for (int j = 0; j < 3; ++j) {
            const Unitary4 d = m.adjoint() * ops[j] * m;
            for (int k = 0; k < 4; ++k) p[k][j] = d(k, k).real();
        }
        return p;
    }();
    return pats;
}

// Fold exponent coefficients into the canonical chamber
// pi/4 >= c1 >= c2 >= |c3| using per-coordinate pi/2 shifts, even sign
// flips, and permutations; the lexicographically largest valid triple wins.
inline std::array<double, 3> weyl_fold(const std::array<double, 3>& c) {
    const double half = 0.5 * pi;
    std::array<double, 3> base{};
    for (int i = 0; i < 3; ++i) {
        double x = std::fmod(c[i], half);
        if (x < 0) x += half;
        base[i] = x;
    }
    static const int signsets[4][3] = {{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
    static const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    const double eps = 1e-9;
    std::array<double, 3> best{};
    bool found = false;
    for (int branch = 0; branch < 8; ++branch) {
        std::array<double, 3> v{};
        for (int i = 0; i < 3; ++i)
            v[i] = (branch >> i) & 1 ? base[i] - half : base[i];
        for (const auto& ss : signsets) {
            for (const auto& pp : perms) {
                const std::array<double, 3> w{ss[pp[0]] * v[pp[0]], ss[pp[1]] * v[pp[1]],
                                              ss[pp[2]] * v[pp[2]]};
                if (w[0] > 0.25 * pi + eps) continue;
                if (!(w[0] >= w[1] - eps && w[1] >= std::abs(w[2]) - eps && w[1] >= -eps)) continue;
                if (!found || w > best) {
                    best = w;
                    found = true;
                }
            }
        }
    }
    if (!found) throw std::logic_error("weyl_fold: no chamber representative (unreachable)");
    return best;
}

}  // namespace detail

inline KakInfo analytic_kak(const Unitary4& target) {
    const Unitary4 v = detail::su4_normalize(target);
    const Unitary4& mb = magic_basis();
    const Unitary4 u_b = mb.adjoint() * v * mb;
    const Unitary4 m2 = u_b.transpose() * u_b;

    KakInfo info;
    const cd tr = m2.trace();
    info.g1 = tr * tr / 16.0;
    info.g2 = ((tr * tr - (m2 * m2).trace()) / 4.0).real();

    Eigen::ComplexEigenSolver<Unitary4> solver(m2, /*computeEigenvectors=*/false);
    std::array<double, 4> d{};
    for (int k = 0; k < 3; ++k) d[k] = std::arg(solver.eigenvalues()(k)) / 2.0;
    d[3] = -(d[0] + d[1] + d[2]);

    // Solve d_k = sum_j c_j * pattern[k][j] from the first three rows; any
    // branch/ordering ambiguity lands in the Weyl orbit and folds away.
    const auto& pats = detail::cartan_patterns();
    Eigen::Matrix3d a;
    Eigen::Vector3d rhs;
    for (int k = 0; k < 3; ++k) {
        for (int j = 0; j < 3; ++j) a(k, j) = pats[k][j];
        rhs(k) = d[k];
    }
    const Eigen::Vector3d c = a.fullPivLu().solve(rhs);

    info.canonical = detail::weyl_fold({c(0), c(1), c(2)});
    for (int i = 0; i < 3; ++i) info.canonical_times[i] = info.canonical[i] / (0.5 * pi);

    double tmin = 0.0;
    for (int i = 0; i < 3; ++i) {
        double x = std::fmod(c(i), 0.5 * pi);
        if (x < 0) x += 0.5 * pi;
        tmin += std::min(x, 0.5 * pi - x);
    }
    info.minimal_time = tmin / (0.5 * pi);
    return info;
}

// Invariant agreement between two gates' local-equivalence classes.
inline double invariant_distance(const KakInfo& a, const KakInfo& b) {
    return std::max(std::abs(a.g1 - b.g1), std::abs(a.g2 - b.g2));
}

}  // namespace optpulse
