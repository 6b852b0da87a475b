#pragma once

// JSON and CSV serialization for matrices, synthesis batches and simulation
// reports. Matrices are row-major arrays of [re, im] pairs.

#include "optpulse/cartan.hpp"
#include "optpulse/manifest.hpp"
#include "optpulse/nmrsim.hpp"
#include "optpulse/qmat.hpp"

#include "json.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>

namespace optpulse {

inline nlohmann::json matrix_to_json(const Unitary4& u) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < 4; ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < 4; ++j) row.push_back({u(i, j).real(), u(i, j).imag()});
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Unitary4 matrix_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.size() != 4)
        throw std::invalid_argument("matrix JSON must be a 4x4 array of [re, im] pairs");
    Unitary4 u;
    for (int i = 0; i < 4; ++i) {
        const auto& row = j.at(i);
        if (!row.is_array() || row.size() != 4)
            throw std::invalid_argument("matrix JSON row " + std::to_string(i) + " must have 4 entries");
        for (int k = 0; k < 4; ++k) {
            const auto& e = row.at(k);
            if (!e.is_array() || e.size() != 2)
                throw std::invalid_argument("matrix entries must be [re, im] pairs");
            u(i, k) = cd(e.at(0).get<double>(), e.at(1).get<double>());
        }
    }
    return u;
}

inline nlohmann::json params_to_json(const ControlParams& p) {
    auto arr = [](const std::array<double, 3>& a) { return nlohmann::json{a[0], a[1], a[2]}; };
    return {{"k1_left", arr(p.k1_left)},
            {"k1_right", arr(p.k1_right)},
            {"k2_left", arr(p.k2_left)},
            {"k2_right", arr(p.k2_right)},
            {"cartan_times", arr(p.cartan_times)}};
}

inline ControlParams params_from_json(const nlohmann::json& j) {
    auto arr = [&](const char* key) {
        const auto& a = j.at(key);
        return std::array<double, 3>{a.at(0).get<double>(), a.at(1).get<double>(),
                                     a.at(2).get<double>()};
    };
    ControlParams p;
    p.k1_left = arr("k1_left");
    p.k1_right = arr("k1_right");
    p.k2_left = arr("k2_left");
    p.k2_right = arr("k2_right");
    p.cartan_times = arr("cartan_times");
    return p;
}

inline nlohmann::json result_to_json(const SynthesisResult& r) {
    return {{"params", params_to_json(r.params)},
            {"penalty", r.penalty},
            {"execution_time", r.execution_time},
            {"winding_index", r.winding_index},
            {"start_seed", r.start_seed},
            {"iterations", r.iterations}};
}

inline SynthesisResult result_from_json(const nlohmann::json& j) {
    SynthesisResult r;
    r.params = params_from_json(j.at("params"));
    r.penalty = j.value("penalty", 0.0);
    r.execution_time = j.contains("execution_time") ? j.at("execution_time").get<double>()
                                                    : r.params.execution_time();
    r.winding_index = j.value("winding_index", 0);
    r.start_seed = j.value("start_seed", std::uint64_t{0});
    r.iterations = j.value("iterations", 0);
    return r;
}

inline nlohmann::json spectrum_to_json(const TimeSpectrum& s) {
    nlohmann::json clusters = nlohmann::json::array();
    for (const auto& c : s.clusters)
        clusters.push_back({{"winding", c.winding}, {"count", c.count}, {"center", c.center}});
    return {{"offset", s.offset}, {"clusters", std::move(clusters)},
            {"num_outliers", s.outliers.size()}};
}

inline nlohmann::json batch_to_json(const SynthesisBatch& batch, const RunManifest& manifest,
                                    const std::string& target_name, const Unitary4& target) {
    nlohmann::json results = nlohmann::json::array();
    for (const auto& r : batch.results) results.push_back(result_to_json(r));
    const TimeSpectrum spec = time_spectrum(batch.results, batch.spectrum_offset);
    nlohmann::json j;
    j["manifest"] = manifest.to_json();
    j["target"] = {{"spec", target_name}, {"matrix", matrix_to_json(target)}};
    j["spectrum_offset"] = batch.spectrum_offset;
    j["summary"] = {{"num_starts", batch.starts.size()},
                    {"num_converged", batch.results.size()},
                    {"best_penalty", batch.best_penalty_seen},
                    {"minimal_time", batch.results.empty() ? nlohmann::json()
                                                           : nlohmann::json(batch.results.front().execution_time)}};
    j["time_spectrum"] = spectrum_to_json(spec);
    j["results"] = std::move(results);
    return j;
}

inline std::string starts_to_csv(const SynthesisBatch& batch) {
    std::string out = "start_seed,converged,penalty,execution_time,iterations\n";
    char buf[160];
    for (const StartRecord& s : batch.starts) {
        std::snprintf(buf, sizeof buf, "%llu,%d,%.17g,%.17g,%d\n",
                      static_cast<unsigned long long>(s.start_seed), s.converged ? 1 : 0, s.penalty,
                      s.execution_time, s.iterations);
        out += buf;
    }
    return out;
}

inline nlohmann::json comparison_to_json(const ComparisonReport& rep) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : rep.rows) {
        rows.push_back({{"pi2_duration", r.pi2_duration},
                        {"fidelity_optimal", {r.fidelity_optimal[0], r.fidelity_optimal[1], r.fidelity_optimal[2]}},
                        {"fidelity_conventional",
                         {r.fidelity_conventional[0], r.fidelity_conventional[1], r.fidelity_conventional[2]}},
                        {"fidelity_optimal_mean", r.fidelity_optimal_mean},
                        {"fidelity_conventional_mean", r.fidelity_conventional_mean},
                        {"purity_optimal", r.purity_optimal},
                        {"purity_conventional", r.purity_conventional},
                        {"unwanted_optimal", r.unwanted_optimal},
                        {"unwanted_conventional", r.unwanted_conventional},
                        {"dominant_optimal", r.dominant_optimal},
                        {"dominant_conventional", r.dominant_conventional}});
    }
    return {{"target_index", rep.target_index}, {"rows", std::move(rows)}};
}

inline std::string comparison_to_csv(const ComparisonReport& rep) {
    std::string out =
        "pi2_duration_s,fidelity_optimal_mean,fidelity_conventional_mean,"
        "purity_optimal,purity_conventional,unwanted_optimal,unwanted_conventional\n";
    char buf[256];
    for (const auto& r : rep.rows) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                      r.pi2_duration, r.fidelity_optimal_mean, r.fidelity_conventional_mean,
                      r.purity_optimal, r.purity_conventional, r.unwanted_optimal,
                      r.unwanted_conventional);
        out += buf;
    }
    return out;
}

inline nlohmann::json peaks_to_json(const PeakReport& r) {
    return {{"carbon_partner0", r.carbon_partner0},
            {"carbon_partner1", r.carbon_partner1},
            {"hydrogen_partner0", r.hydrogen_partner0},
            {"hydrogen_partner1", r.hydrogen_partner1},
            {"populations", {r.populations[0], r.populations[1], r.populations[2], r.populations[3]}},
            {"dominant", r.dominant}};
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
    f << content;
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + path + "' for reading");
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
}

}  // namespace optpulse
