#pragma once

// The variational Cartan decomposition U_target = K2 * U_J(t) * K1 and the
// deterministic multi-start polytope search over its 15 parameters. Times
// are in units of 1/J throughout; execution time is sum(|t_i|).

#include "optpulse/parallel.hpp"
#include "optpulse/polytope.hpp"
#include "optpulse/qmat.hpp"
#include "optpulse/rng.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <vector>

namespace optpulse {

struct ControlParams {
    std::array<double, 3> k1_left{};   // exp_su2 triple, qubit 1 factor of K1
    std::array<double, 3> k1_right{};
    std::array<double, 3> k2_left{};
    std::array<double, 3> k2_right{};
    std::array<double, 3> cartan_times{};  // signed, units of 1/J

    static constexpr int dimension = 15;

    static ControlParams from_vector(const std::vector<double>& x) {
        ControlParams p;
        for (int i = 0; i < 3; ++i) {
            p.k1_left[i] = x[i];
            p.k1_right[i] = x[3 + i];
            p.k2_left[i] = x[6 + i];
            p.k2_right[i] = x[9 + i];
            p.cartan_times[i] = x[12 + i];
        }
        return p;
    }

    std::vector<double> to_vector() const {
        std::vector<double> x(dimension);
        for (int i = 0; i < 3; ++i) {
            x[i] = k1_left[i];
            x[3 + i] = k1_right[i];
            x[6 + i] = k2_left[i];
            x[9 + i] = k2_right[i];
            x[12 + i] = cartan_times[i];
        }
        return x;
    }

    double execution_time() const {
        return std::abs(cartan_times[0]) + std::abs(cartan_times[1]) + std::abs(cartan_times[2]);
    }
};

// U_J(t) of the decomposition: exponent -(pi/2) t on each Cartan axis, i.e.
// e^{-(i pi J/2)(t1 XX + t2 YY + t3 ZZ)} in units where J = 1.
inline Unitary4 cartan_core(const std::array<double, 3>& t) {
    return exp_cartan(-0.5 * pi * t[0], -0.5 * pi * t[1], -0.5 * pi * t[2]);
}

inline Unitary4 reconstruct(const ControlParams& p) {
    const Unitary4 k1 = kron2(exp_su2(p.k1_left[0], p.k1_left[1], p.k1_left[2]),
                              exp_su2(p.k1_right[0], p.k1_right[1], p.k1_right[2]));
    const Unitary4 k2 = kron2(exp_su2(p.k2_left[0], p.k2_left[1], p.k2_left[2]),
                              exp_su2(p.k2_right[0], p.k2_right[1], p.k2_right[2]));
    return k2 * cartan_core(p.cartan_times) * k1;
}

enum class PhaseMode { exact, phase_invariant };

inline double penalty(const ControlParams& p, const Unitary4& target,
                      PhaseMode mode = PhaseMode::phase_invariant) {
    const Unitary4 u = reconstruct(p);
    return mode == PhaseMode::exact ? frobenius_distance(u, target)
                                    : phase_invariant_distance(u, target);
}

struct SearchConfig {
    int num_starts = 512;
    std::uint64_t seed = 0;
    double penalty_tolerance = 1e-8;
    int max_iterations = 20000;
    PhaseMode phase_mode = PhaseMode::phase_invariant;
    double time_weight = 0.0;
    bool nonnegative_times = false;
    unsigned workers = 0;           // 0 = hardware concurrency
    double initial_step = 0.5;
    double cluster_tolerance = 5e-3;
};

struct SynthesisResult {
    ControlParams params;
    double penalty = 0.0;
    double execution_time = 0.0;
    int winding_index = 0;
    std::uint64_t start_seed = 0;   // start index k
    int iterations = 0;
};

// One row per start, converged or not; feeds the CSV summary.
struct StartRecord {
    std::uint64_t start_seed = 0;
    bool converged = false;
    double penalty = 0.0;
    double execution_time = 0.0;
    int iterations = 0;
    bool aborted = false;
};

struct SynthesisBatch {
    std::vector<SynthesisResult> results;  // converged, sorted by (T, penalty, seed)
    std::vector<StartRecord> starts;       // all starts in index order
    double spectrum_offset = 0.0;          // offset actually used for winding indices
    double best_penalty_seen = 0.0;        // over all starts, for the no-solution report
    bool converged() const { return !results.empty(); }
};

// Start k: twelve angles uniform in [-pi, pi], three times uniform in [-2, 2].
inline std::vector<double> random_start(std::uint64_t seed, std::uint64_t k) {
    SplitMix64 g = stream_for_start(seed, k);
    std::vector<double> x(ControlParams::dimension);
    for (int i = 0; i < 12; ++i) x[i] = g.uniform(-pi, pi);
    for (int i = 12; i < 15; ++i) x[i] = g.uniform(-2.0, 2.0);
    return x;
}

namespace detail {

inline ControlParams params_from_search_vector(std::vector<double> x, bool nonneg) {
    if (nonneg)
        for (int i = 12; i < 15; ++i) x[i] = std::abs(x[i]);
    return ControlParams::from_vector(x);
}

}  // namespace detail

// Deduce the discrete-family offset from the minimal converged time: its
// fractional part, or 1 when the minimum sits on an integer (the bare-oracle
// family T = (n+1)/J), or 0 for zero-time targets.
inline double deduce_spectrum_offset(double minimal_time, double tol = 5e-3) {
    if (minimal_time < tol) return 0.0;
    const double frac = minimal_time - std::floor(minimal_time + tol);
    if (frac < tol) return 1.0;
    return frac;
}

inline SynthesisBatch synthesize(const Unitary4& target, const SearchConfig& config,
                                 std::optional<double> spectrum_offset = std::nullopt) {
    const unsigned workers = config.workers == 0 ? default_workers() : config.workers;
    const int n = config.num_starts;

    struct Slot {
        StartRecord rec;
        ControlParams params;
    };
    std::vector<Slot> slots(static_cast<std::size_t>(n));

    PolytopeOptions popt;
    popt.value_tolerance = config.penalty_tolerance / 10.0;
    popt.max_iterations = config.max_iterations;
    popt.initial_step = config.initial_step;

    parallel_for_index(static_cast<std::size_t>(n), workers, [&](std::size_t k) {
        auto objective = [&](const std::vector<double>& x) {
            const ControlParams p = detail::params_from_search_vector(x, config.nonnegative_times);
            double v = penalty(p, target, config.phase_mode);
            if (config.time_weight > 0.0) v += config.time_weight * p.execution_time();
            return v;
        };
        const PolytopeResult r = polytope_minimize(objective, random_start(config.seed, k), popt);
        const ControlParams p = detail::params_from_search_vector(r.point, config.nonnegative_times);
        // record the pure penalty, not the weighted objective
        const double pen = penalty(p, target, config.phase_mode);
        Slot& s = slots[k];
        s.params = p;
        s.rec.start_seed = k;
        s.rec.penalty = pen;
        s.rec.execution_time = p.execution_time();
        s.rec.iterations = r.iterations;
        s.rec.aborted = r.aborted;
        s.rec.converged = !r.aborted && pen < config.penalty_tolerance;
    });

    SynthesisBatch batch;
    batch.best_penalty_seen = std::numeric_limits<double>::infinity();
    batch.starts.reserve(slots.size());
    for (const Slot& s : slots) {
        batch.starts.push_back(s.rec);
        batch.best_penalty_seen = std::min(batch.best_penalty_seen, s.rec.penalty);
        if (s.rec.converged) {
            SynthesisResult r;
            r.params = s.params;
            r.penalty = s.rec.penalty;
            r.execution_time = s.rec.execution_time;
            r.start_seed = s.rec.start_seed;
            r.iterations = s.rec.iterations;
            batch.results.push_back(r);
        }
    }

    std::stable_sort(batch.results.begin(), batch.results.end(),
                     [](const SynthesisResult& a, const SynthesisResult& b) {
                         if (a.execution_time != b.execution_time) return a.execution_time < b.execution_time;
                         if (a.penalty != b.penalty) return a.penalty < b.penalty;
                         return a.start_seed < b.start_seed;
                     });

    if (!batch.results.empty()) {
        batch.spectrum_offset = spectrum_offset
                                    ? *spectrum_offset
                                    : deduce_spectrum_offset(batch.results.front().execution_time,
                                                             config.cluster_tolerance);
        for (SynthesisResult& r : batch.results) {
            const long n_idx = std::lround(r.execution_time - batch.spectrum_offset);
            r.winding_index = static_cast<int>(std::max(0L, n_idx));
        }
    } else if (spectrum_offset) {
        batch.spectrum_offset = *spectrum_offset;
    }
    return batch;
}

struct TimeCluster {
    int winding = 0;
    int count = 0;
    double center = 0.0;  // mean execution time of the cluster
};

struct TimeSpectrum {
    double offset = 0.0;
    std::vector<TimeCluster> clusters;               // sorted by winding index
    std::vector<const SynthesisResult*> outliers;    // |T - (n+offset)| >= tolerance
};

inline TimeSpectrum time_spectrum(const std::vector<SynthesisResult>& results, double offset,
                                  double cluster_tolerance = 5e-3) {
    TimeSpectrum spec;
    spec.offset = offset;
    std::map<int, std::pair<int, double>> acc;  // winding -> (count, sum T)
    for (const SynthesisResult& r : results) {
        const long n = std::lround(r.execution_time - offset);
        const double center = static_cast<double>(n) + offset;
        if (n < 0 || std::abs(r.execution_time - center) >= cluster_tolerance) {
            spec.outliers.push_back(&r);
            continue;
        }
        auto& slot = acc[static_cast<int>(n)];
        slot.first += 1;
        slot.second += r.execution_time;
    }
    for (const auto& [n, cs] : acc)
        spec.clusters.push_back({n, cs.first, cs.second / cs.first});
    return spec;
}

}  // namespace optpulse
