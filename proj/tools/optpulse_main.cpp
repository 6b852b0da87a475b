// Command-line front end: target -> synthesis -> compilation -> simulation
// with reproducible configuration and machine-readable outputs.
//
// Exit codes: 0 success, 1 scientific failure (no convergence, failed
// verification), 2 usage or input error.

#include "optpulse/cartan.hpp"
#include "optpulse/compiler.hpp"
#include "optpulse/kak.hpp"
#include "optpulse/manifest.hpp"
#include "optpulse/nmrsim.hpp"
#include "optpulse/serialize.hpp"
#include "optpulse/targets.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <array>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace optpulse;
using nlohmann::json;

std::string sanitize(std::string s) {
    for (char& c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') c = '_';
    return s;
}

// Manifest command string; worker count is an execution detail and omitted.
std::string manifest_command(int argc, char** argv) {
    std::string cmd;
    for (int i = 0; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--workers") {
            ++i;
            continue;
        }
        if (a.rfind("--workers=", 0) == 0) continue;
        if (!cmd.empty()) cmd += ' ';
        cmd += a;
    }
    return cmd;
}

TargetSpec load_target(const std::string& arg) {
    if (!arg.empty() && arg[0] == '@') {
        const json j = json::parse(read_text_file(arg.substr(1)));
        const Unitary4 m = matrix_from_json(j.contains("matrix") ? j.at("matrix") : j);
        return TargetSpec::from_matrix(m, arg);
    }
    return TargetSpec::parse(arg);
}

struct LoadedResults {
    TargetSpec target;
    std::vector<SynthesisResult> results;
};

// Accepts either a synth batch file or a standalone {target, params} file.
LoadedResults load_results_file(const std::string& path) {
    const json j = json::parse(read_text_file(path));
    LoadedResults out;
    json tgt = j.at("target");
    if (tgt.is_string()) {
        out.target = TargetSpec::parse(tgt.get<std::string>());
    } else if (tgt.contains("spec") && tgt.at("spec").is_string() &&
               tgt.at("spec").get<std::string>().rfind("@", 0) != 0 &&
               !tgt.at("spec").get<std::string>().empty() &&
               tgt.at("spec").get<std::string>()[0] == 'u') {
        out.target = TargetSpec::parse(tgt.at("spec").get<std::string>());
    } else if (tgt.contains("matrix")) {
        out.target = TargetSpec::from_matrix(matrix_from_json(tgt.at("matrix")),
                                             tgt.value("spec", std::string("raw")));
    } else {
        out.target = TargetSpec::from_matrix(matrix_from_json(tgt), "raw");
    }
    if (j.contains("results")) {
        for (const auto& r : j.at("results")) out.results.push_back(result_from_json(r));
    } else if (j.contains("params")) {
        SynthesisResult r;
        r.params = params_from_json(j.at("params"));
        r.execution_time = r.params.execution_time();
        r.penalty = j.value("penalty", 0.0);
        out.results.push_back(r);
    } else {
        throw std::runtime_error("result file needs a 'results' array or a 'params' object");
    }
    return out;
}

PulseProgram load_program_file(const std::string& path) {
    const std::string text = read_text_file(path);
    if (path.size() > 5 && path.substr(path.size() - 5) == ".json") {
        const json j = json::parse(text);
        return program_from_json(j.contains("program") ? j.at("program") : j);
    }
    return parse_program(text, path);
}

std::array<PulseProgram, 3> load_triple(const std::string& spec, bool optimal) {
    if (spec == "preset") {
        if (optimal)
            return {optimal_preset("u10"), optimal_preset("u10xcp"), optimal_preset("u10xcp2")};
        return {conventional_preset("u10"), conventional_preset("u10xcp"),
                conventional_preset("u10xcp2")};
    }
    std::array<PulseProgram, 3> out;
    std::size_t pos = 0;
    for (int k = 0; k < 3; ++k) {
        const std::size_t comma = spec.find(',', pos);
        const std::string part =
            comma == std::string::npos ? spec.substr(pos) : spec.substr(pos, comma - pos);
        if (part.empty()) throw std::runtime_error("triple spec needs three comma-separated files");
        out[k] = load_program_file(part);
        pos = comma == std::string::npos ? spec.size() : comma + 1;
    }
    return out;
}

int cmd_synth(const std::string& target_arg, SearchConfig cfg, const std::string& offset_arg,
              std::string out_prefix, RunManifest manifest) {
    const TargetSpec target = load_target(target_arg);
    std::optional<double> offset = target.spectrum_offset();
    if (offset_arg != "auto") offset = std::stod(offset_arg);

    manifest.config = {{"target", target.name},
                       {"num_starts", cfg.num_starts},
                       {"penalty_tolerance", cfg.penalty_tolerance},
                       {"max_iterations", cfg.max_iterations},
                       {"phase_mode", cfg.phase_mode == PhaseMode::exact ? "exact" : "phase_invariant"},
                       {"time_weight", cfg.time_weight},
                       {"nonnegative_times", cfg.nonnegative_times},
                       {"initial_step", cfg.initial_step}};
    manifest.seed = cfg.seed;

    const SynthesisBatch batch = synthesize(target.resolve(), cfg, offset);

    if (out_prefix.empty()) out_prefix = "synth_" + sanitize(target.name);
    write_text_file(out_prefix + ".json",
                    batch_to_json(batch, manifest, target.name, target.resolve()).dump(2) + "\n");
    write_text_file(out_prefix + ".csv", starts_to_csv(batch));

    std::printf("target          %s\n", target.name.c_str());
    std::printf("starts          %d (converged %zu)\n", cfg.num_starts, batch.results.size());
    if (!batch.converged()) {
        std::printf("no solution found; best penalty %.3e\n", batch.best_penalty_seen);
        std::printf("wrote %s.json, %s.csv\n", out_prefix.c_str(), out_prefix.c_str());
        return 1;
    }
    const SynthesisResult& best = batch.results.front();
    std::printf("minimal T       %.6f (units 1/J), penalty %.3e, start %llu\n", best.execution_time,
                best.penalty, static_cast<unsigned long long>(best.start_seed));
    const TimeSpectrum spec = time_spectrum(batch.results, batch.spectrum_offset);
    std::printf("time spectrum   offset %.3g:", batch.spectrum_offset);
    for (const auto& c : spec.clusters)
        std::printf("  T=%.4f x%d", c.center, c.count);
    if (!spec.outliers.empty()) std::printf("  (%zu outliers)", spec.outliers.size());
    std::printf("\nwrote %s.json, %s.csv\n", out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

int cmd_compile(const std::string& input, const std::string& preset, bool do_merge, bool min_pulses,
                std::string out_prefix, RunManifest manifest) {
    PulseProgram prog;
    json source;
    std::optional<TargetSpec> target;

    if (!preset.empty()) {
        const std::size_t colon = preset.find(':');
        if (colon == std::string::npos)
            throw CLI::ValidationError("--preset", "expected kind:name, e.g. conventional:u10");
        const std::string kind = preset.substr(0, colon), name = preset.substr(colon + 1);
        if (kind == "conventional")
            prog = conventional_preset(name);
        else if (kind == "optimal")
            prog = optimal_preset(name);
        else
            throw CLI::ValidationError("--preset", "kind must be conventional or optimal");
        source = {{"preset", preset}};
        target = TargetSpec::parse(name);
    } else {
        const LoadedResults loaded = load_results_file(input);
        if (loaded.results.empty()) throw std::runtime_error("result file holds no results");
        std::size_t pick = 0;
        if (min_pulses) {
            const double tmin = loaded.results.front().execution_time;
            int best_count = -1;
            for (std::size_t i = 0; i < loaded.results.size(); ++i) {
                if (loaded.results[i].execution_time > tmin + 5e-3) continue;
                const int count =
                    compile(loaded.results[i].params, MergePolicy::fuse_drop_z).pulse_count();
                if (best_count < 0 || count < best_count) {
                    best_count = count;
                    pick = i;
                }
            }
        }
        const SynthesisResult& chosen = loaded.results[pick];
        prog = compile(chosen.params, do_merge ? MergePolicy::fuse_drop_z : MergePolicy::none,
                       loaded.target.name);
        source = {{"file", input}, {"result_index", pick}, {"params", params_to_json(chosen.params)}};
        target = loaded.target;
    }

    const MachineConfig ideal{215.5, 0.0, 3.98};
    json checks;
    if (target) {
        const Unitary4 u = propagator(prog, ideal);
        const Unitary4 t = target->resolve();
        checks["phase_invariant_fidelity_vs_target"] = fidelity(u, t);
        checks["observably_equivalent_to_target"] = observably_equivalent(u, t, 1e-8);
    }

    manifest.config = {{"merge", do_merge}, {"min_pulses", min_pulses}};
    const std::string text = render(prog);
    if (out_prefix.empty())
        out_prefix = "compile_" + sanitize(preset.empty() ? target->name : preset);
    json j;
    j["manifest"] = manifest.to_json();
    j["source"] = source;
    j["program"] = to_json(prog);
    j["checks"] = checks;
    write_text_file(out_prefix + ".json", j.dump(2) + "\n");
    write_text_file(out_prefix + ".txt", text);

    std::printf("%s", text.c_str());
    std::printf("pulses          %d\n", prog.pulse_count());
    std::printf("coupling time   %.6g (units 1/J)\n", prog.coupling_time());
    std::printf("wrote %s.json, %s.txt\n", out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

int cmd_simulate(const std::string& optimal_spec, const std::string& conventional_spec,
                 const std::string& readout_file, std::vector<double> pi2_us, MachineConfig cfg,
                 std::string out_prefix, RunManifest manifest) {
    manifest.config = {{"j_hz", cfg.j_hz}, {"gamma_ratio", cfg.gamma_ratio}, {"pi2_us", pi2_us}};
    if (out_prefix.empty()) out_prefix = "simulate";

    if (!readout_file.empty()) {
        const PulseProgram prog = load_program_file(readout_file);
        cfg.pi2_duration = pi2_us.empty() ? 0.0 : pi2_us.front() * 1e-6;
        const Unitary4 u = propagator(prog, cfg);
        // ideal pseudopure |00> input
        DeviationState s;
        s.matrix = Hermitian4::Zero();
        const double lambda = 4.0 / 3.0;
        s.matrix.diagonal() << 3 * lambda / 4, -lambda / 4, -lambda / 4, -lambda / 4;
        const PeakReport r = readout(s.evolved(u));
        json j;
        j["manifest"] = manifest.to_json();
        j["readout"] = peaks_to_json(r);
        write_text_file(out_prefix + ".json", j.dump(2) + "\n");
        std::printf("dominant state  |%s>\n", r.dominant.c_str());
        std::printf("carbon lines    partner|0> %+.6f   partner|1> %+.6f\n", r.carbon_partner0,
                    r.carbon_partner1);
        std::printf("hydrogen lines  partner|0> %+.6f   partner|1> %+.6f\n", r.hydrogen_partner0,
                    r.hydrogen_partner1);
        std::printf("wrote %s.json\n", out_prefix.c_str());
        return 0;
    }

    const auto opt = load_triple(optimal_spec, true);
    const auto conv = load_triple(conventional_spec, false);
    std::vector<double> widths;
    widths.reserve(pi2_us.size());
    for (double w : pi2_us) widths.push_back(w * 1e-6);
    const ComparisonReport rep = compare_sequences(opt, conv, widths, cfg);

    json j;
    j["manifest"] = manifest.to_json();
    j["comparison"] = comparison_to_json(rep);
    write_text_file(out_prefix + ".json", j.dump(2) + "\n");
    write_text_file(out_prefix + ".csv", comparison_to_csv(rep));

    std::printf("%8s  %10s %10s  %9s %9s  %10s %10s\n", "pi2[us]", "fid(opt)", "fid(conv)",
                "pur(opt)", "pur(conv)", "unw(opt)", "unw(conv)");
    for (const auto& r : rep.rows)
        std::printf("%8.1f  %10.7f %10.7f  %9.6f %9.6f  %10.3e %10.3e\n", r.pi2_duration * 1e6,
                    r.fidelity_optimal_mean, r.fidelity_conventional_mean, r.purity_optimal,
                    r.purity_conventional, r.unwanted_optimal, r.unwanted_conventional);
    std::printf("wrote %s.json, %s.csv\n", out_prefix.c_str(), out_prefix.c_str());
    return 0;
}

int cmd_verify(const std::string& input, double tol) {
    const LoadedResults loaded = load_results_file(input);
    if (loaded.results.empty()) throw std::runtime_error("result file holds no results");
    const Unitary4 target = loaded.target.resolve();
    const MachineConfig ideal{215.5, 0.0, 3.98};
    bool ok = true;

    int index = 0;
    for (const SynthesisResult& r : loaded.results) {
        const Unitary4 rec = reconstruct(r.params);
        const double pen = phase_invariant_distance(rec, target);
        const bool pen_ok = pen < std::max(tol * 10, 1e-7);
        const double inv = invariant_distance(analytic_kak(rec), analytic_kak(target));
        const bool inv_ok = inv < 1e-6;
        const double fid =
            fidelity(propagator(compile(r.params, MergePolicy::none), ideal), rec);
        const bool fid_ok = fid > 1.0 - 1e-9;
        const double bound = analytic_kak(target).minimal_time;
        const bool bound_ok = r.params.execution_time() >= bound - 1e-6;
        std::printf("result %d: penalty %.3e [%s]  kak-invariants %.3e [%s]  "
                    "ideal-sim fidelity %.12f [%s]  time bound %.6f>=%.6f [%s]\n",
                    index, pen, pen_ok ? "ok" : "FAIL", inv, inv_ok ? "ok" : "FAIL", fid,
                    fid_ok ? "ok" : "FAIL", r.params.execution_time(), bound,
                    bound_ok ? "ok" : "FAIL");
        ok = ok && pen_ok && inv_ok && fid_ok && bound_ok;
        ++index;
    }
    std::printf(ok ? "verify: PASS\n" : "verify: FAIL\n");
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Time-optimal two-qubit NMR gate synthesis, compilation and simulation"};
    app.require_subcommand(1);
    app.set_config("--config", "", "flat key=value configuration file");

    RunManifest manifest;
    manifest.command = manifest_command(argc, argv);
    manifest.timestamp = RunManifest::now_utc();

    unsigned workers = 0;
    app.add_option("--workers", workers, "worker threads for multi-start search (0 = all cores)")
        ->capture_default_str();

    // synth
    auto* synth = app.add_subcommand("synth", "variational multi-start synthesis for a target gate");
    std::string target_arg;
    SearchConfig cfg;
    std::string offset_arg = "auto";
    std::string out_prefix;
    std::string phase_mode = "phase-invariant";
    synth->add_option("target", target_arg, "u00..u11[xcp|xcp2] or @matrix.json")->required();
    synth->add_option("--starts", cfg.num_starts, "number of random starts")->capture_default_str();
    synth->add_option("--seed", cfg.seed, "seed of the counter-based start generator")
        ->capture_default_str();
    synth->add_option("--tol", cfg.penalty_tolerance, "convergence threshold on the penalty")
        ->capture_default_str();
    synth->add_option("--max-iter", cfg.max_iterations, "polytope iteration cap per start")
        ->capture_default_str();
    synth->add_option("--phase-mode", phase_mode, "exact | phase-invariant")->capture_default_str();
    synth->add_option("--time-weight", cfg.time_weight, "weight of sum|t_i| added to the penalty")
        ->capture_default_str();
    synth->add_flag("--nonneg-times", cfg.nonnegative_times, "constrain coupling times to t_i >= 0");
    synth->add_option("--initial-step", cfg.initial_step, "initial simplex edge length")
        ->capture_default_str();
    synth->add_option("--offset", offset_arg, "time-spectrum offset (auto = by target class)")
        ->capture_default_str();
    synth->add_option("--out", out_prefix, "output file prefix");

    // compile
    auto* comp = app.add_subcommand("compile", "turn a decomposition into a pulse program");
    std::string comp_input, comp_preset;
    bool do_merge = false, min_pulses = false;
    std::string comp_out;
    comp->add_option("result", comp_input, "synthesis result JSON file");
    comp->add_option("--preset", comp_preset, "conventional:NAME or optimal:NAME");
    comp->add_flag("--merge", do_merge, "fuse rotations and drop trailing z rotations");
    comp->add_flag("--min-pulses", min_pulses,
                   "pick the minimal-time result with the fewest merged pulses");
    comp->add_option("--out", comp_out, "output file prefix");

    // simulate
    auto* sim = app.add_subcommand("simulate", "ideal and finite-width pulse simulation");
    std::string opt_spec = "preset", conv_spec = "preset", readout_file;
    std::vector<double> pi2_us{0.0, 25.0, 50.0, 100.0, 250.0};
    MachineConfig mc;
    std::string sim_out;
    sim->add_option("--optimal", opt_spec, "'preset' or three comma-separated program files")
        ->capture_default_str();
    sim->add_option("--conventional", conv_spec, "'preset' or three comma-separated program files")
        ->capture_default_str();
    sim->add_option("--readout", readout_file, "simulate one program on the pseudopure |00> state");
    sim->add_option("--pi2-us", pi2_us, "pi/2 pulse widths in microseconds")
        ->delimiter(',')
        ->capture_default_str();
    sim->add_option("--j-hz", mc.j_hz, "scalar coupling in Hz")->capture_default_str();
    sim->add_option("--gamma-ratio", mc.gamma_ratio, "thermal polarization ratio spin2:spin1")
        ->capture_default_str();
    sim->add_option("--out", sim_out, "output file prefix");

    // verify
    auto* ver = app.add_subcommand("verify", "recheck a synthesis result file");
    std::string ver_input;
    double ver_tol = 1e-8;
    ver->add_option("result", ver_input, "result JSON file")->required();
    ver->add_option("--tol", ver_tol, "penalty tolerance the result claims")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.workers = workers;
    if (phase_mode == "exact")
        cfg.phase_mode = PhaseMode::exact;
    else if (phase_mode == "phase-invariant")
        cfg.phase_mode = PhaseMode::phase_invariant;
    else {
        std::fprintf(stderr, "error: --phase-mode must be exact or phase-invariant\n");
        return 2;
    }

    try {
        if (synth->parsed()) return cmd_synth(target_arg, cfg, offset_arg, out_prefix, manifest);
        if (comp->parsed()) {
            if (comp_input.empty() == comp_preset.empty()) {
                std::fprintf(stderr, "error: compile needs a result file or --preset (not both)\n");
                return 2;
            }
            return cmd_compile(comp_input, comp_preset, do_merge, min_pulses, comp_out, manifest);
        }
        if (sim->parsed())
            return cmd_simulate(opt_spec, conv_spec, readout_file, pi2_us, mc, sim_out, manifest);
        if (ver->parsed()) return cmd_verify(ver_input, ver_tol);
    } catch (const CLI::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 2;
}
