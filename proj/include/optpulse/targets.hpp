#pragma once

// The concrete gates of the two-qubit Grover setup: the four search oracles
// U_ij, the CNOTs, and the cyclic permutation used for pseudopure state
// preparation by temporal averaging. Built-ins are stored as exact integer
// matrices; the gate-product identities live in the tests.

#include "optpulse/qmat.hpp"

#include <optional>
#include <stdexcept>
#include <string>

namespace optpulse {

// U_ij maps |00> to a phase times |ij>. Entries are exactly 0 or +-1 and
// every U_ij lies in SO(4).
inline Unitary4 grover_oracle(int i, int j) {
    if ((i != 0 && i != 1) || (j != 0 && j != 1))
        throw std::invalid_argument("grover_oracle: bits must be 0 or 1");
    Unitary4 u = Unitary4::Zero();
    if (i == 0 && j == 0) {
        u << -1, 0, 0, 0,
              0, 0, 1, 0,
              0, 1, 0, 0,
              0, 0, 0, 1;
    } else if (i == 0 && j == 1) {
        u <<  0, 0, 1, 0,
             -1, 0, 0, 0,
              0, 0, 0, -1,
              0, -1, 0, 0;
    } else if (i == 1 && j == 0) {
        u <<  0, 1, 0, 0,
              0, 0, 0, -1,
             -1, 0, 0, 0,
              0, 0, -1, 0;
    } else {
        u <<  0, 0, 0, 1,
              0, -1, 0, 0,
              0, 0, -1, 0,
             -1, 0, 0, 0;
    }
    return u;
}

// Phase alpha of U_ij|00> = e^{i alpha}|ij>, read off the |00> column.
inline double oracle_phase(int i, int j) {
    const Unitary4 u = grover_oracle(i, j);
    return std::arg(u(2 * i + j, 0));
}

inline Unitary4 cnot(int control, int target) {
    if (!((control == 1 && target == 2) || (control == 2 && target == 1)))
        throw std::invalid_argument("cnot: {control,target} must be {1,2}");
    Unitary4 u = Unitary4::Zero();
    if (control == 1) {
        u << 1, 0, 0, 0,
             0, 1, 0, 0,
             0, 0, 0, 1,
             0, 0, 1, 0;
    } else {
        u << 1, 0, 0, 0,
             0, 0, 0, 1,
             0, 0, 1, 0,
             0, 1, 0, 0;
    }
    return u;
}

// U_cp fixes |00> and cycles |01> -> |10> -> |11> -> |01>; equals
// CNOT12 * CNOT21. Power 2 is its square, power 0 the identity.
inline Unitary4 cyclic_permutation(int power) {
    if (power < 0 || power > 2)
        throw std::invalid_argument("cyclic_permutation: power must be 0, 1 or 2");
    Unitary4 u = Unitary4::Identity();
    if (power == 1) {
        u << 1, 0, 0, 0,
             0, 0, 0, 1,
             0, 1, 0, 0,
             0, 0, 1, 0;
    } else if (power == 2) {
        u << 1, 0, 0, 0,
             0, 0, 1, 0,
             0, 0, 0, 1,
             0, 1, 0, 0;
    }
    return u;
}

struct TargetSpec {
    std::optional<std::pair<int, int>> oracle;  // (i, j)
    int permutation_power = 0;                  // 0, 1 or 2
    std::optional<Unitary4> raw;
    std::string name;  // original spec string

    // "u00".."u11" with optional "xcp"/"xcp2" suffix; "@file" handled by the
    // caller (the CLI resolves files before calling parse on the rest).
    static TargetSpec parse(const std::string& s) {
        TargetSpec spec;
        spec.name = s;
        if (s.size() < 3 || (s[0] != 'u' && s[0] != 'U'))
            throw std::invalid_argument("target spec must look like u10[xcp|xcp2], got '" + s + "'");
        const char ci = s[1], cj = s[2];
        if ((ci != '0' && ci != '1') || (cj != '0' && cj != '1'))
            throw std::invalid_argument("target spec bits must be 0/1 in '" + s + "'");
        spec.oracle = std::make_pair(ci - '0', cj - '0');
        const std::string rest = s.substr(3);
        if (rest.empty())
            spec.permutation_power = 0;
        else if (rest == "xcp")
            spec.permutation_power = 1;
        else if (rest == "xcp2")
            spec.permutation_power = 2;
        else
            throw std::invalid_argument("unknown target suffix '" + rest + "' in '" + s + "'");
        return spec;
    }

    static TargetSpec from_matrix(const Unitary4& u, std::string name = "raw") {
        if (!is_unitary(u, 1e-8))
            throw std::invalid_argument("raw target matrix is not unitary within 1e-8");
        TargetSpec spec;
        spec.raw = u;
        spec.name = std::move(name);
        return spec;
    }

    // U_ij * U_cp^k (the permutation acts first in time), or the raw matrix.
    Unitary4 resolve() const {
        if (raw) return *raw;
        return grover_oracle(oracle->first, oracle->second) * cyclic_permutation(permutation_power);
    }

    // Offset of the discrete execution-time family (n + offset)/J: 1 for the
    // bare oracles, 1/2 for the U_cp composites. Raw targets deduce it from
    // data, so no value here.
    std::optional<double> spectrum_offset() const {
        if (raw) return std::nullopt;
        return permutation_power == 0 ? 1.0 : 0.5;
    }
};

}  // namespace optpulse
