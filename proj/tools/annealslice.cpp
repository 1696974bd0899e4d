// Copyright 2026 annealslice contributors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

// annealslice: instance generation, GA search, slicing runs and freezeout
// analysis from the command line.
//
//   annealslice gen       --rows 4 --cols 4 --out run/
//   annealslice ga        --mode ising --generations 200 --out run/
//   annealslice slice     --model run/model.txt --anneal-time 1000 --slices 1000 --out run/
//   annealslice freezeout --model run/model.txt --backend boltzmann_exact --out run/
//   annealslice qfp       --trace run/trace.csv --out run/
//   annealslice qubit-qfp --bitstrings run/best_bitstrings.csv --out run/
//
// Any option may also come from --config FILE (flat key=value lines, '#'
// comments, keys are long option names); command-line flags win.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "annealslice/clique.hpp"
#include "annealslice/common.hpp"
#include "annealslice/csv.hpp"
#include "annealslice/evolver.hpp"
#include "annealslice/freezeout.hpp"
#include "annealslice/model.hpp"
#include "annealslice/sampler.hpp"
#include "annealslice/schedule.hpp"
#include "annealslice/slicer.hpp"
#include "annealslice/svg.hpp"

namespace fs = std::filesystem;
using namespace annealslice;

namespace {

struct Common {
    std::uint64_t seed = 0;
    std::string out = ".";
    std::string curves;
    std::uint64_t reads = 1000;
    std::string backend = "svmc";
    int sweeps_per_us = 10;
    double temperature_k = kDefaultTemperatureK;
    unsigned threads = 1;

    void add_to(CLI::App* app, bool sampling) {
        app->add_option("--seed", seed, "Base random seed");
        app->add_option("--out", out, "Output directory");
        if (!sampling) return;
        app->add_option("--curves", curves, "A(s)/B(s) table (CSV s,A_GHz,B_GHz); default analytic curves");
        app->add_option("--reads", reads, "Reads per schedule");
        app->add_option("--backend", backend, "svmc | thermal | boltzmann_exact");
        app->add_option("--sweeps-per-us", sweeps_per_us, "Monte Carlo sweeps per microsecond");
        app->add_option("--temperature", temperature_k, "Physical temperature in kelvin");
        app->add_option("--threads", threads, "Worker threads (0 = all cores)");
    }

    SamplerConfig sampler(double beta = 1.0) const {
        SamplerConfig c;
        c.backend = parse_backend(backend);
        c.sweeps_per_us = sweeps_per_us;
        c.temperature_k = temperature_k;
        c.seed = seed;
        c.beta = beta;
        c.threads = threads;
        c.validate();
        return c;
    }

    EnergyCurves energy_curves() const { return curves.empty() ? default_curves() : load_curves(curves); }
};

fs::path output_dir(const std::string& out) {
    fs::path dir(out);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw ValidationError("cannot create output directory " + out + ": " + ec.message());
    return dir;
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream f(path);
    if (!f) throw ValidationError("cannot write " + path.string());
    return f;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        char* end = nullptr;
        double v = std::strtod(item.c_str(), &end);
        if (end == item.c_str() || *end != '\0') throw ValidationError("bad number '" + item + "' in list");
        out.push_back(v);
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    for (double v : parse_list(text)) {
        if (v != static_cast<int>(v)) throw ValidationError("expected integers in list");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

// ---------------------------------------------------------------------------

struct GenArgs {
    Common common;
    int rows = 16, cols = 16, shore = 4;
    std::string dead;
    double linear_lo = kDefaultLinearRange.lo, linear_hi = kDefaultLinearRange.hi;
    double quad_lo = kDefaultQuadraticRange.lo, quad_hi = kDefaultQuadraticRange.hi;
};

void add_topology(CLI::App* app, int& rows, int& cols, int& shore, std::string& dead) {
    app->add_option("--rows", rows, "Chimera rows");
    app->add_option("--cols", cols, "Chimera columns");
    app->add_option("--shore", shore, "Chimera shore size");
    app->add_option("--dead", dead, "Comma-separated dead hardware ids");
}

std::shared_ptr<const ChimeraTopology> make_topology(int rows, int cols, int shore, const std::string& dead) {
    if (rows < 1 || cols < 1 || shore < 1) throw ValidationError("topology dimensions must be >= 1");
    return std::make_shared<const ChimeraTopology>(chimera(rows, cols, shore, parse_int_list(dead)));
}

void run_gen(const GenArgs& a) {
    auto topo = make_topology(a.rows, a.cols, a.shore, a.dead);
    ProblemModel m = random_instance(topo, {a.linear_lo, a.linear_hi}, {a.quad_lo, a.quad_hi}, a.common.seed);
    fs::path dir = output_dir(a.common.out);
    save_model((dir / "model.txt").string(), m);
    std::cout << "wrote " << (dir / "model.txt").string() << " (" << m.num_variables() << " variables, "
              << m.quadratic().size() << " couplers)\n";
}

// ---------------------------------------------------------------------------

struct GaArgs {
    Common common;
    std::string mode = "ising";
    int rows = 16, cols = 16, shore = 4;
    std::string dead;
    int population = 100;
    double p_cross = 0.1;
    std::optional<double> p_mut;
    int generations = 200;
    double t_short = 1.0, t_long = 1000.0;
    int vertices = 64;
    double chain_strength = kDefaultChainStrength;
};

void write_history_plot(const fs::path& path, std::span<const GenerationStats> history) {
    svg::Plot plot;
    plot.title = "Fitness per generation";
    plot.x_label = "generation";
    plot.y_label = "fitness";
    svg::Series mx{"max", {}, {}, "#d62728"}, mean{"mean", {}, {}, "#1f77b4"};
    for (const GenerationStats& g : history) {
        mx.x.push_back(g.generation);
        mx.y.push_back(g.max_fitness);
        mean.x.push_back(g.generation);
        mean.y.push_back(g.mean_fitness);
    }
    plot.series = {mx, mean};
    auto f = open_out(path);
    svg::write_line_plot(f, plot);
}

void run_ga(const GaArgs& a) {
    auto topo = make_topology(a.rows, a.cols, a.shore, a.dead);
    GAConfig ga;
    ga.population = a.population;
    ga.p_cross = a.p_cross;
    ga.generations = a.generations;
    ga.reads = a.common.reads;
    ga.t_short = a.t_short;
    ga.t_long = a.t_long;
    ga.threads = a.common.threads;
    const SamplerConfig sampler = a.common.sampler();
    const EnergyCurves curves = a.common.energy_curves();
    fs::path dir = output_dir(a.common.out);

    if (a.mode == "ising") {
        ga.p_mut = a.p_mut.value_or(0.001);
        ga.validate();
        EvolveResult r = evolve(topo, ga, sampler, a.common.seed, curves);
        save_model((dir / "best_model.txt").string(), r.best);
        auto h = open_out(dir / "history.csv");
        write_history_csv(h, r.history);
        write_history_plot(dir / "history.svg", r.history);
        std::cout << "best fitness " << csv::number(r.best_fitness) << '\n';
    } else if (a.mode == "maxclique") {
        ga.p_mut = a.p_mut.value_or(kMaxCliqueMutation);
        ga.validate();
        MaxCliqueResult r = evolve_maxclique(a.vertices, topo, ga, sampler, a.common.seed, a.chain_strength, curves);
        save_model((dir / "best_model.txt").string(), r.best_model);
        const EmbeddedModel physical = embed(r.best_model, r.embedding, topo, a.chain_strength);
        save_model((dir / "best_embedded_model.txt").string(), physical.model);
        auto g = open_out(dir / "best_graph.txt");
        write_graph(g, r.best_graph);
        auto e = open_out(dir / "embedding.txt");
        write_embedding(e, r.embedding);
        auto h = open_out(dir / "history.csv");
        write_history_csv(h, r.history);
        write_history_plot(dir / "history.svg", r.history);
        std::cout << "best fitness " << csv::number(r.best_fitness) << '\n';
    } else {
        throw ValidationError("mode must be 'ising' or 'maxclique'");
    }
}

// ---------------------------------------------------------------------------

struct SliceArgs {
    Common common;
    std::string model;
    std::string embedding;
    double anneal_time = 1000.0;
    int slices = 1000;
    std::optional<double> pause_start;
    double pause_len = 0.0;
    double quench_width = 1.0;
    bool fractional = false;
    bool save_samples = false;
};

void trace_plot(const fs::path& path, const SliceTrace& trace, const std::string& title, const std::string& y_label,
                std::vector<svg::Series> series) {
    svg::Plot plot;
    plot.title = title;
    plot.x_label = "slice time (us)";
    plot.y_label = y_label;
    plot.series = std::move(series);
    if (trace.pause) plot.shaded.emplace_back(trace.pause->start, trace.pause->start + trace.pause->length);
    auto f = open_out(path);
    svg::write_line_plot(f, plot);
}

void run_slice(const SliceArgs& a) {
    if (a.model.empty()) throw ValidationError("--model is required");
    ProblemModel model = load_model(a.model);
    SliceOptions o;
    o.total_time = a.anneal_time;
    o.n_slices = a.slices;
    o.reads = a.common.reads;
    o.quench_width = a.quench_width;
    o.fractional = a.fractional;
    o.keep_samples = a.save_samples;
    o.threads = a.common.threads;
    if (a.pause_start) o.pause = PauseSpec{*a.pause_start, a.pause_len};
    if (!a.embedding.empty()) {
        std::ifstream in(a.embedding);
        if (!in) throw ValidationError("cannot read " + a.embedding);
        o.embedding = read_embedding(in);
    }
    o.validate();
    const SamplerConfig sampler = a.common.sampler();
    const EnergyCurves curves = a.common.energy_curves();
    SliceTrace trace = run_slicing(model, o, sampler, curves);

    fs::path dir = output_dir(a.common.out);
    {
        auto f = open_out(dir / "trace.csv");
        write_trace_csv(f, trace);
        auto b = open_out(dir / "best_bitstrings.csv");
        write_best_bitstrings_csv(b, trace);
    }
    if (a.save_samples) {
        fs::create_directories(dir / "samples");
        for (std::size_t s = 0; s < trace.samples.size(); ++s) {
            char name[32];
            std::snprintf(name, sizeof name, "slice_%05zu.csv", s + 1);
            auto f = open_out(dir / "samples" / name);
            write_sampleset_csv(f, trace.samples[s]);
        }
    }
    trace_plot(dir / "energy.svg", trace, "Energy per slice", "energy",
               {{"mean", trace.slice_times, trace.mean_energy, "#1f77b4"},
                {"best 1%", trace.slice_times, trace.best_mean, "#d62728"}});
    std::vector<double> ht(trace.slice_times.begin() + 1, trace.slice_times.end());
    trace_plot(dir / "hamming.svg", trace, "Hamming distance between adjacent slices", "mean distance",
               {{"", ht, trace.hamming, "#1f77b4"}});
    if (!trace.chain_unbroken.empty())
        trace_plot(dir / "chains.svg", trace, "Unbroken chains per slice", "proportion unbroken",
                   {{"", trace.slice_times, trace.chain_unbroken, "#2ca02c"}});
    std::cout << "wrote " << trace.size() << " slices to " << (dir / "trace.csv").string() << '\n';
}

// ---------------------------------------------------------------------------

struct FreezeoutArgs {
    Common common;
    std::string model;
    std::string x_grid;
    double anneal_time = 1000.0;
    double beta = 1.0;
    int bins = 0;
    double r2_min = kDefaultR2Min;
};

void run_freezeout(const FreezeoutArgs& a) {
    if (a.model.empty()) throw ValidationError("--model is required");
    ProblemModel model = load_model(a.model);
    std::vector<double> grid = a.x_grid.empty() ? default_x_grid() : parse_list(a.x_grid);
    const SamplerConfig sampler = a.common.sampler(a.beta);
    const EnergyCurves curves = a.common.energy_curves();
    ScanResult scan = scan_x(model, sampler, grid, a.common.reads, standard(a.anneal_time), curves, a.bins, a.r2_min);

    fs::path dir = output_dir(a.common.out);
    auto f = open_out(dir / "beta_fit.csv");
    write_beta_fits_csv(f, scan, &curves, a.common.temperature_k);

    nlohmann::json summary;
    summary["valid"] = scan.chosen.has_value();
    if (scan.chosen) {
        const BetaFit& fit = scan.fits[*scan.chosen];
        summary["x"] = fit.x;
        summary["beta_eff"] = fit.beta_eff;
        summary["r2"] = fit.r2;
        try {
            summary["s_star"] = freezeout_point(fit.beta_eff, curves, a.common.temperature_k);
        } catch (const RuntimeError& e) {
            summary["s_star"] = nullptr;
            summary["note"] = e.what();
        }
    }
    std::cout << summary.dump() << '\n';
}

// ---------------------------------------------------------------------------

struct QfpArgs {
    Common common;
    std::string trace;
    std::string column = "best1pct_mean";
    std::string label = "trace";
    double threshold = kFrozenThresholdDeg;
    int max_segments = 5;
};

void run_qfp(const QfpArgs& a) {
    if (a.trace.empty()) throw ValidationError("--trace is required");
    std::ifstream in(a.trace);
    if (!in) throw ValidationError("cannot read " + a.trace);
    TraceTable t = read_trace_csv(in);
    std::vector<double> xs(t.slice.begin(), t.slice.end());
    std::vector<double> ys;
    if (a.column == "best1pct_mean") ys = t.best_mean;
    else if (a.column == "mean_energy") ys = t.mean_energy;
    else throw ValidationError("column must be best1pct_mean or mean_energy");

    PolylineFit fit = fit_polyline(xs, ys, a.max_segments);
    const FrozenDecision d = classify_frozen(fit, a.threshold);
    fit.frozen = d.frozen;
    fit.qfp = d.qfp;

    fs::path dir = output_dir(a.common.out);
    {
        auto f = open_out(dir / "polyline.csv");
        write_polyline_csv(f, fit);
        auto p = open_out(dir / "phase_table.csv");
        p << "problem,slices,phase1_deg,phase2_deg,phase3_deg,frozen,qfp\n";
        p << a.label << ',' << xs.size() << ',' << csv::number(fit.slopes_deg[0]) << ',' << csv::number(fit.slopes_deg[1])
          << ',' << csv::number(fit.slopes_deg[2]) << ',' << (fit.frozen ? 1 : 0) << ',';
        if (fit.qfp) p << csv::number(*fit.qfp);
        p << '\n';
    }
    svg::Plot plot;
    plot.title = "Polyline fit";
    plot.x_label = "slice";
    plot.y_label = a.column;
    svg::Series data{"data", xs, ys, "#1f77b4"}, line{"fit", {}, {}, "#d62728"};
    line.x.push_back(fit.x_min);
    for (double b : fit.breakpoints) line.x.push_back(fit.x_min + b * (fit.x_max - fit.x_min));
    line.x.push_back(fit.x_max);
    for (double x : line.x) line.y.push_back(fit.evaluate(x));
    plot.series = {data, line};
    if (fit.qfp) plot.markers.emplace_back(*fit.qfp, "QFP");
    auto f = open_out(dir / "qfp.svg");
    svg::write_line_plot(f, plot);

    nlohmann::json summary;
    summary["frozen"] = fit.frozen;
    summary["qfp"] = fit.qfp ? nlohmann::json(*fit.qfp) : nlohmann::json(nullptr);
    summary["slopes_deg"] = fit.slopes_deg;
    std::cout << summary.dump() << '\n';
}

// ---------------------------------------------------------------------------

struct QubitQfpArgs {
    Common common;
    std::string bitstrings;
    int bins = 20;
};

void run_qubit_qfp(const QubitQfpArgs& a) {
    if (a.bitstrings.empty()) throw ValidationError("--bitstrings is required");
    std::ifstream in(a.bitstrings);
    if (!in) throw ValidationError("cannot read " + a.bitstrings);
    const std::vector<Assignment> best = read_best_bitstrings_csv(in);
    const std::vector<int> qfp = per_qubit_qfp(best);
    const int n_slices = static_cast<int>(best.size());
    const int bins = std::min(a.bins, n_slices);
    const std::vector<std::uint64_t> hist = qfp_histogram(qfp, n_slices, bins);

    fs::path dir = output_dir(a.common.out);
    {
        auto f = open_out(dir / "qubit_qfp.csv");
        f << "qubit,qfp_slice\n";
        for (std::size_t q = 0; q < qfp.size(); ++q) f << q << ',' << qfp[q] << '\n';
        auto h = open_out(dir / "qubit_qfp_hist.csv");
        h << "bin,first_slice,last_slice,count\n";
        for (int b = 0; b < bins; ++b) {
            // Slices q with floor((q - 1) * bins / n) == b.
            const long long first = (static_cast<long long>(b) * n_slices + bins - 1) / bins + 1;
            const long long last = (static_cast<long long>(b + 1) * n_slices + bins - 1) / bins;
            h << b << ',' << first << ',' << last << ',' << hist[static_cast<std::size_t>(b)] << '\n';
        }
    }
    auto f = open_out(dir / "qubit_qfp.svg");
    svg::write_histogram(f, "Qubits frozen out per slice", "slice", 1.0, n_slices + 1.0, hist);
    std::cout << "wrote QFP for " << qfp.size() << " qubits\n";
}

// ---------------------------------------------------------------------------

// Config entries are spliced in right after the subcommand so later
// command-line flags override them (options take the last value).
std::vector<std::string> expand_config(int argc, char** argv) {
    std::vector<std::string> args(argv, argv + argc);
    std::string path;
    for (std::size_t i = 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[i + 1];
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i), args.begin() + static_cast<std::ptrdiff_t>(i + 2));
            break;
        }
        if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            args.erase(args.begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    if (path.empty()) return args;
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read config " + path);
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ValidationError("config line " + std::to_string(lineno) + ": expected key=value");
        auto trim = [](std::string s) {
            const auto a = s.find_first_not_of(" \t\r");
            const auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::replace(key.begin(), key.end(), '_', '-');
        injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    const std::size_t at = args.size() > 1 ? 2 : 1;
    args.insert(args.begin() + static_cast<std::ptrdiff_t>(at), injected.begin(), injected.end());
    return args;
}

int fail(const char* kind, const std::string& message, int code) {
    nlohmann::json j;
    j["error"] = kind;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slicing experiments on simulated annealing schedules"};
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

    GenArgs gen;
    auto* gen_cmd = app.add_subcommand("gen", "Write a random Chimera Ising instance");
    gen.common.add_to(gen_cmd, false);
    add_topology(gen_cmd, gen.rows, gen.cols, gen.shore, gen.dead);
    gen_cmd->add_option("--linear-lo", gen.linear_lo);
    gen_cmd->add_option("--linear-hi", gen.linear_hi);
    gen_cmd->add_option("--quad-lo", gen.quad_lo);
    gen_cmd->add_option("--quad-hi", gen.quad_hi);

    GaArgs ga;
    auto* ga_cmd = app.add_subcommand("ga", "Genetic search for slicing-friendly instances");
    ga.common.add_to(ga_cmd, true);
    add_topology(ga_cmd, ga.rows, ga.cols, ga.shore, ga.dead);
    ga_cmd->add_option("--mode", ga.mode, "ising | maxclique");
    ga_cmd->add_option("--population", ga.population);
    ga_cmd->add_option("--p-cross", ga.p_cross);
    ga_cmd->add_option("--p-mut", ga.p_mut, "Default 0.001 (ising) or 0.01 (maxclique)");
    ga_cmd->add_option("--generations", ga.generations);
    ga_cmd->add_option("--t-short", ga.t_short);
    ga_cmd->add_option("--t-long", ga.t_long);
    ga_cmd->add_option("--vertices", ga.vertices, "Graph size for maxclique mode");
    ga_cmd->add_option("--chain-strength", ga.chain_strength);

    SliceArgs sl;
    auto* slice_cmd = app.add_subcommand("slice", "Run a slicing experiment");
    sl.common.add_to(slice_cmd, true);
    slice_cmd->add_option("--model", sl.model, "Model file");
    slice_cmd->add_option("--embedding", sl.embedding, "Embedding file for chain accounting");
    slice_cmd->add_option("--anneal-time", sl.anneal_time, "Active anneal time T (us)");
    slice_cmd->add_option("--slices", sl.slices);
    slice_cmd->add_option("--pause-start", sl.pause_start);
    slice_cmd->add_option("--pause-len", sl.pause_len);
    slice_cmd->add_option("--quench-width", sl.quench_width);
    slice_cmd->add_flag("--fractional", sl.fractional, "Allow non-integer slice times");
    slice_cmd->add_flag("--save-samples", sl.save_samples, "Write every slice's sample set");

    FreezeoutArgs fo;
    auto* fo_cmd = app.add_subcommand("freezeout", "Effective temperature scan and freezeout point");
    fo.common.add_to(fo_cmd, true);
    fo_cmd->add_option("--model", fo.model, "Model file");
    fo_cmd->add_option("--x-grid", fo.x_grid, "Comma-separated rescale factors");
    fo_cmd->add_option("--anneal-time", fo.anneal_time);
    fo_cmd->add_option("--beta", fo.beta, "Inverse temperature for boltzmann_exact");
    fo_cmd->add_option("--bins", fo.bins, "Histogram bins (0 = ceil(sqrt(2R)))");
    fo_cmd->add_option("--r2-min", fo.r2_min);

    QfpArgs qf;
    auto* qfp_cmd = app.add_subcommand("qfp", "Polyline quasi-freezeout point of a trace");
    qf.common.add_to(qfp_cmd, false);
    qfp_cmd->add_option("--trace", qf.trace, "Trace CSV");
    qfp_cmd->add_option("--column", qf.column);
    qfp_cmd->add_option("--label", qf.label, "Problem name for the phase table");
    qfp_cmd->add_option("--threshold", qf.threshold, "Frozen threshold in degrees");
    qfp_cmd->add_option("--max-segments", qf.max_segments);

    QubitQfpArgs qq;
    auto* qq_cmd = app.add_subcommand("qubit-qfp", "Per-qubit quasi-freezeout histogram");
    qq.common.add_to(qq_cmd, false);
    qq_cmd->add_option("--bitstrings", qq.bitstrings, "best_bitstrings.csv from slice");
    qq_cmd->add_option("--bins", qq.bins);

    try {
        std::vector<std::string> args = expand_config(argc, argv);
        std::vector<char*> raw;
        for (auto& s : args) raw.push_back(s.data());
        app.parse(static_cast<int>(raw.size()), raw.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("usage", e.what(), 2);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), 2);
    }

    try {
        if (*gen_cmd) run_gen(gen);
        else if (*ga_cmd) run_ga(ga);
        else if (*slice_cmd) run_slice(sl);
        else if (*fo_cmd) run_freezeout(fo);
        else if (*qfp_cmd) run_qfp(qf);
        else if (*qq_cmd) run_qubit_qfp(qq);
    } catch (const ValidationError& e) {
        return fail("validation", e.what(), 2);
    } catch (const RuntimeError& e) {
        return fail("runtime", e.what(), 3);
    } catch (const std::exception& e) {
        return fail("runtime", e.what(), 3);
    }
    return 0;
}
