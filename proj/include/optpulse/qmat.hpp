#pragma once

// Exact-size complex linear algebra for two-qubit operators: Pauli tensor
// basis, closed-form exponentials on SU(2) and on the Cartan subalgebra
// {XX, YY, ZZ}, and the distance metrics used by the variational search.
//
// Basis ordering is |00>, |01>, |10>, |11> with qubit 1 (carbon) the left
// tensor factor. All angles are in radians, hbar = 1.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace optpulse {

using cd = std::complex<double>;
using Unitary2 = Eigen::Matrix2cd;
using Unitary4 = Eigen::Matrix4cd;
using Hermitian4 = Eigen::Matrix4cd;

inline constexpr double pi = 3.14159265358979323846;

enum class PauliLabel { I, X, Y, Z };

inline const Unitary2& pauli(PauliLabel p) {
    static const Unitary2 id = Unitary2::Identity();
    static const Unitary2 sx = (Unitary2() << 0, 1, 1, 0).finished();
    static const Unitary2 sy = (Unitary2() << 0, cd(0, -1), cd(0, 1), 0).finished();
    static const Unitary2 sz = (Unitary2() << 1, 0, 0, -1).finished();
    switch (p) {
        case PauliLabel::I: return id;
        case PauliLabel::X: return sx;
        case PauliLabel::Y: return sy;
        case PauliLabel::Z: return sz;
    }
    throw std::invalid_argument("pauli: bad label");
}

inline PauliLabel pauli_label_from_char(char c) {
    switch (c) {
        case 'I': case 'i': return PauliLabel::I;
        case 'X': case 'x': return PauliLabel::X;
        case 'Y': case 'y': return PauliLabel::Y;
        case 'Z': case 'z': return PauliLabel::Z;
    }
    throw std::invalid_argument(std::string("pauli label must be one of I,X,Y,Z, got '") + c + "'");
}

// Kronecker product of two one-qubit operators, qubit 1 on the left.
inline Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
    Eigen::Matrix4cd out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    return out;
}

inline Unitary4 pauli_tensor(PauliLabel left, PauliLabel right) {
    return kron2(pauli(left), pauli(right));
}

// e^{i (a sx + b sy + c sz)} in closed form; the r -> 0 limit is handled by
// the first-order series so the function is total on finite inputs.
inline Unitary2 exp_su2(double a, double b, double c) {
    const double r = std::sqrt(a * a + b * b + c * c);
    Unitary2 gen = a * pauli(PauliLabel::X) + b * pauli(PauliLabel::Y) + c * pauli(PauliLabel::Z);
    if (r < 1e-12) {
        return Unitary2::Identity() + cd(0, 1) * gen;
    }
    return std::cos(r) * Unitary2::Identity() + cd(0, std::sin(r) / r) * gen;
}

// e^{i (c1 XX + c2 YY + c3 ZZ)}: product of three commuting closed-form
// factors cos(c) I + i sin(c) P. Diagonal in the magic (Bell) basis.
inline Unitary4 exp_cartan(double c1, double c2, double c3) {
    static const Unitary4 xx = pauli_tensor(PauliLabel::X, PauliLabel::X);
    static const Unitary4 yy = pauli_tensor(PauliLabel::Y, PauliLabel::Y);
    static const Unitary4 zz = pauli_tensor(PauliLabel::Z, PauliLabel::Z);
    Unitary4 out = Unitary4::Identity();
    const double cs[3] = {c1, c2, c3};
    const Unitary4* ps[3] = {&xx, &yy, &zz};
    for (int k = 0; k < 3; ++k) {
        if (cs[k] == 0.0) continue;
        out = (std::cos(cs[k]) * Unitary4::Identity() + cd(0, std::sin(cs[k])) * (*ps[k])) * out;
    }
    return out;
}

inline double frobenius_distance(const Unitary4& a, const Unitary4& b) {
    return (a - b).norm();
}

// min over phi of ||A - e^{i phi} B||_F = sqrt(8 - 2|tr(A^dag B)|); zero iff
// A = e^{i phi} B. Evaluated entrywise at the optimal phase rather than via
// the trace identity, which loses half the significant digits near zero.
inline double phase_invariant_distance(const Unitary4& a, const Unitary4& b) {
    const Unitary4 m = a.adjoint() * b;
    const cd t = m.trace();
    const cd phase = std::abs(t) > 1e-300 ? t / std::abs(t) : cd(1, 0);
    return (Unitary4::Identity() - (m / phase).eval()).norm();
}

// |tr(A^dag B)| / 4, the standard gate fidelity for comparisons.
inline double fidelity(const Unitary4& a, const Unitary4& b) {
    return std::abs((a.adjoint() * b).trace()) / 4.0;
}

inline bool is_unitary(const Unitary4& u, double tol = 1e-12) {
    return (u.adjoint() * u - Unitary4::Identity()).cwiseAbs().maxCoeff() < tol;
}

inline bool is_unitary2(const Unitary2& u, double tol = 1e-12) {
    return (u.adjoint() * u - Unitary2::Identity()).cwiseAbs().maxCoeff() < tol;
}

inline bool is_hermitian(const Hermitian4& h, double tol = 1e-12) {
    return (h - h.adjoint()).cwiseAbs().maxCoeff() < tol;
}

// Entrywise-magnitude equality: the observable-equivalence class of footnote-
// level phase differences. Equal magnitudes imply identical population maps
// for any diagonal input state.
inline bool observably_equivalent(const Unitary4& a, const Unitary4& b, double tol = 1e-8) {
    return (a.cwiseAbs() - b.cwiseAbs()).cwiseAbs().maxCoeff() < tol;
}

}  // namespace optpulse
