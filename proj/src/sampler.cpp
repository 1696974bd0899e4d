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

#include "annealslice/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <numbers>
#include <numeric>
#include <ostream>

#include "annealslice/csv.hpp"

namespace annealslice {

std::string to_string(Backend b) {
    switch (b) {
        case Backend::svmc: return "svmc";
        case Backend::thermal: return "thermal";
        case Backend::boltzmann_exact: return "boltzmann_exact";
    }
    return "unknown";
}

Backend parse_backend(const std::string& name) {
    if (name == "svmc") return Backend::svmc;
    if (name == "thermal") return Backend::thermal;
    if (name == "boltzmann_exact" || name == "exact") return Backend::boltzmann_exact;
    throw ValidationError("unknown backend '" + name + "'");
}

void SamplerConfig::validate() const {
    if (sweeps_per_us < 1) throw ValidationError("sweeps_per_us must be >= 1");
    if (!(temperature_k > 0.0) || !std::isfinite(temperature_k)) throw ValidationError("temperature must be > 0");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
}

// ---------------------------------------------------------------------------
// SampleSet

namespace {

bool record_less(const SampleRecord& a, const SampleRecord& b) {
    if (a.energy != b.energy) return a.energy < b.energy;
    return a.bits < b.bits;
}

}  // namespace

SampleSet::SampleSet(Domain domain, int num_variables, std::vector<SampleRecord> records, std::uint64_t seed)
    : domain_(domain), n_(num_variables), records_(std::move(records)), seed_(seed) {
    for (const SampleRecord& r : records_) {
        if (r.count == 0) throw ValidationError("sample record with zero count");
        if (static_cast<int>(r.bits.size()) != n_) throw ValidationError("sample bitstring length mismatch");
        reads_ += r.count;
    }
    std::stable_sort(records_.begin(), records_.end(), record_less);
}

SampleSet SampleSet::from_reads(const ProblemModel& model, std::vector<Assignment> reads, std::uint64_t seed) {
    std::sort(reads.begin(), reads.end());
    std::vector<SampleRecord> records;
    for (std::size_t r = 0; r < reads.size();) {
        std::size_t end = r + 1;
        while (end < reads.size() && reads[end] == reads[r]) ++end;
        const double e = energy(model, reads[r]);
        records.push_back({std::move(reads[r]), e, end - r});
        r = end;
    }
    return SampleSet(model.domain(), model.num_variables(), std::move(records), seed);
}

double SampleSet::mean_energy() const {
    if (reads_ == 0) throw ValidationError("empty sample set");
    double sum = 0.0;
    for (const SampleRecord& r : records_) sum += r.energy * static_cast<double>(r.count);
    return sum / static_cast<double>(reads_);
}

std::vector<double> SampleSet::energies() const {
    std::vector<double> out;
    out.reserve(reads_);
    for (const SampleRecord& r : records_) out.insert(out.end(), r.count, r.energy);
    return out;
}

bool SampleSet::operator==(const SampleSet& other) const {
    if (domain_ != other.domain_ || n_ != other.n_ || reads_ != other.reads_ || seed_ != other.seed_) return false;
    if (records_.size() != other.records_.size()) return false;
    for (std::size_t r = 0; r < records_.size(); ++r) {
        const auto& a = records_[r];
        const auto& b = other.records_[r];
        if (a.bits != b.bits || a.energy != b.energy || a.count != b.count) return false;
    }
    return true;
}

std::uint64_t best_fraction_count(std::uint64_t reads, double fraction) {
    if (!(fraction > 0.0 && fraction <= 1.0)) throw ValidationError("fraction must lie in (0, 1]");
    // Guard against products like 0.07 * 100 = 7.000000000000001.
    const double raw = fraction * static_cast<double>(reads);
    auto k = static_cast<std::uint64_t>(std::ceil(raw - 1e-9 * std::max(1.0, raw)));
    return std::clamp<std::uint64_t>(k, 1, reads);
}

double best_fraction_mean(const SampleSet& samples, double fraction) {
    if (samples.empty()) throw ValidationError("empty sample set");
    std::uint64_t want = best_fraction_count(samples.reads(), fraction);
    double sum = 0.0;
    std::uint64_t taken = 0;
    for (const SampleRecord& r : samples.records()) {
        std::uint64_t take = std::min(r.count, want - taken);
        sum += r.energy * static_cast<double>(take);
        taken += take;
        if (taken == want) break;
    }
    return sum / static_cast<double>(want);
}

std::vector<Assignment> best_fraction_set(const SampleSet& samples, double fraction) {
    if (samples.empty()) throw ValidationError("empty sample set");
    std::uint64_t want = best_fraction_count(samples.reads(), fraction);
    std::vector<Assignment> out;
    out.reserve(want);
    for (const SampleRecord& r : samples.records()) {
        for (std::uint64_t c = 0; c < r.count && out.size() < want; ++c) out.push_back(r.bits);
        if (out.size() == want) break;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Spin dynamics

SpinGraph::SpinGraph(const ProblemModel& model) {
    if (model.domain() != Domain::spin) throw ValidationError("SpinGraph expects a spin model");
    const auto n = static_cast<std::size_t>(model.num_variables());
    h.assign(model.linear().begin(), model.linear().end());
    std::vector<std::size_t> degree(n, 0);
    for (const Coupling& c : model.quadratic()) {
        ++degree[static_cast<std::size_t>(c.i)];
        ++degree[static_cast<std::size_t>(c.j)];
    }
    offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets[i + 1] = offsets[i] + degree[i];
    neighbors.resize(offsets[n]);
    weights.resize(offsets[n]);
    std::vector<std::size_t> fill(offsets.begin(), offsets.end() - 1);
    for (const Coupling& c : model.quadratic()) {
        auto i = static_cast<std::size_t>(c.i), j = static_cast<std::size_t>(c.j);
        neighbors[fill[i]] = static_cast<std::uint32_t>(j);
        weights[fill[i]++] = c.value;
        neighbors[fill[j]] = static_cast<std::uint32_t>(i);
        weights[fill[j]++] = c.value;
    }
}

SvmcEngine::SvmcEngine(std::shared_ptr<const SpinGraph> graph, double kt_ghz, std::uint64_t seed)
    : graph_(std::move(graph)), kt_(kt_ghz), rng_(seed) {
    if (!(kt_ > 0.0)) throw ValidationError("SVMC temperature must be positive");
    reset();
}

SvmcEngine::SvmcEngine(const ProblemModel& model, double kt_ghz, std::uint64_t seed)
    : SvmcEngine(std::make_shared<const SpinGraph>(model), kt_ghz, seed) {}

void SvmcEngine::reset() {
    const std::size_t n = graph_->size();
    theta_.assign(n, std::numbers::pi / 2.0);
    cos_.assign(n, 0.0);
    sin_.assign(n, 1.0);
}

void SvmcEngine::set_angles(std::span<const double> theta) {
    if (theta.size() != graph_->size()) throw ValidationError("angle count mismatch");
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta_[i] = theta[i];
        cos_[i] = std::cos(theta[i]);
        sin_[i] = std::sin(theta[i]);
    }
}

void SvmcEngine::sweep(double a_ghz, double b_ghz) {
    const SpinGraph& g = *graph_;
    const double half_a = 0.5 * a_ghz;
    const double half_b = 0.5 * b_ghz;
    const double inv_kt = 1.0 / kt_;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double proposal = std::numbers::pi * rng_.uniform();
        const double c = std::cos(proposal);
        const double s = std::sin(proposal);
        const double delta = -half_a * (s - sin_[i]) + half_b * g.field(i, cos_) * (c - cos_[i]);
        if (delta <= 0.0 || rng_.uniform() < std::exp(-delta * inv_kt)) {
            theta_[i] = proposal;
            cos_[i] = c;
            sin_[i] = s;
        }
    }
}

Assignment SvmcEngine::readout() const {
    Assignment out(cos_.size());
    for (std::size_t i = 0; i < cos_.size(); ++i) out[i] = cos_[i] >= 0.0 ? 1 : -1;
    return out;
}

double SvmcEngine::effective_energy(double a_ghz, double b_ghz) const {
    const SpinGraph& g = *graph_;
    double transverse = 0.0, problem = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        transverse += sin_[i];
        problem += g.h[i] * cos_[i];
        for (std::size_t e = g.offsets[i]; e < g.offsets[i + 1]; ++e) {
            if (g.neighbors[e] > i) problem += g.weights[e] * cos_[i] * cos_[g.neighbors[e]];
        }
    }
    return -0.5 * a_ghz * transverse + 0.5 * b_ghz * problem;
}

namespace {

struct SweepPlan {
    std::vector<double> a, b;
};

// Sweep k runs at the end of its time step, so the last sweep sees s = 1.
SweepPlan plan_sweeps(const AnnealSchedule& schedule, const EnergyCurves& curves, int sweeps_per_us) {
    const double total = schedule.total_time();
    const auto count = static_cast<std::size_t>(std::max<long long>(1, std::llround(total * sweeps_per_us)));
    SweepPlan plan;
    plan.a.resize(count);
    plan.b.resize(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double t = std::min(total, total * static_cast<double>(k + 1) / static_cast<double>(count));
        const double s = schedule.s_at(t);
        plan.a[k] = curves.a(s);
        plan.b[k] = curves.b(s);
    }
    return plan;
}

void check_inputs(const AnnealSchedule& schedule, std::uint64_t reads, const SamplerConfig& cfg) {
    cfg.validate();
    if (reads == 0) throw ValidationError("reads must be positive");
    // Structural checks only; hardware slope and point limits belong to the builders.
    require_valid(schedule, ScheduleLimits{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()});
}

// Runs `reads` independent spin trajectories on the Ising form of `model` and
// maps readouts back to the model's own domain.
template <typename Trajectory>
SampleSet run_reads(const ProblemModel& model, std::uint64_t reads, const SamplerConfig& cfg, Trajectory&& trajectory) {
    const bool binary = model.domain() == Domain::binary;
    const ProblemModel spin_model = binary ? to_ising(model).model : model;
    auto graph = std::make_shared<const SpinGraph>(spin_model);
    std::vector<Assignment> out(reads);
    parallel_for(reads, cfg.threads, [&](std::size_t r) {
        Assignment spins = trajectory(graph, derive_seed(cfg.seed, r));
        out[r] = binary ? spins_to_binary(spins) : std::move(spins);
    });
    return SampleSet::from_reads(model, std::move(out), cfg.seed);
}

}  // namespace

SampleSet svmc_sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                      std::uint64_t reads, const SamplerConfig& cfg) {
    check_inputs(schedule, reads, cfg);
    const SweepPlan plan = plan_sweeps(schedule, curves, cfg.sweeps_per_us);
    const double kt = cfg.kt_ghz();
    return run_reads(model, reads, cfg, [&](const std::shared_ptr<const SpinGraph>& graph, std::uint64_t seed) {
        SvmcEngine engine(graph, kt, seed);
        for (std::size_t k = 0; k < plan.a.size(); ++k) engine.sweep(plan.a[k], plan.b[k]);
        return engine.readout();
    });
}

SampleSet thermal_sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                         std::uint64_t reads, const SamplerConfig& cfg) {
    check_inputs(schedule, reads, cfg);
    const SweepPlan plan = plan_sweeps(schedule, curves, cfg.sweeps_per_us);
    const double two_kt = 2.0 * cfg.kt_ghz();
    return run_reads(model, reads, cfg, [&](const std::shared_ptr<const SpinGraph>& graph, std::uint64_t seed) {
        const SpinGraph& g = *graph;
        Rng rng(seed);
        // B(0) = 0 means infinite temperature: start from a uniform random state.
        std::vector<double> spins(g.size());
        for (double& s : spins) s = rng.bernoulli(0.5) ? 1.0 : -1.0;
        for (std::size_t k = 0; k < plan.b.size(); ++k) {
            const double beta = plan.b[k] / two_kt;
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double delta = -2.0 * spins[i] * g.field(i, spins);
                if (delta <= 0.0 || rng.uniform() < std::exp(-beta * delta)) spins[i] = -spins[i];
            }
        }
        Assignment out(g.size());
        for (std::size_t i = 0; i < g.size(); ++i) out[i] = spins[i] > 0 ? 1 : -1;
        return out;
    });
}

Assignment state_from_index(const ProblemModel& model, std::uint64_t index) {
    const int n = model.num_variables();
    const std::int8_t low = model.domain() == Domain::spin ? -1 : 0;
    Assignment a(static_cast<std::size_t>(n));
    for (int v = 0; v < n; ++v) a[static_cast<std::size_t>(v)] = ((index >> (n - 1 - v)) & 1) ? 1 : low;
    return a;
}

std::vector<double> boltzmann_probabilities(const ProblemModel& model, double beta) {
    const int n = model.num_variables();
    if (n > kExactSamplerLimit) throw ValidationError("exact Boltzmann sampling limited to " + std::to_string(kExactSamplerLimit) + " variables");
    if (!(beta >= 0.0) || !std::isfinite(beta)) throw ValidationError("beta must be finite and >= 0");
    const std::uint64_t states = std::uint64_t{1} << n;
    std::vector<double> e(states);
    for (std::uint64_t k = 0; k < states; ++k) e[k] = energy(model, state_from_index(model, k));
    const double e_min = *std::min_element(e.begin(), e.end());
    double z = 0.0;
    for (double& v : e) {
        v = std::exp(-beta * (v - e_min));
        z += v;
    }
    for (double& v : e) v /= z;
    return e;
}

SampleSet boltzmann_exact_sample(const ProblemModel& model, double beta, std::uint64_t reads, std::uint64_t seed) {
    if (reads == 0) throw ValidationError("reads must be positive");
    std::vector<double> cdf = boltzmann_probabilities(model, beta);
    std::partial_sum(cdf.begin(), cdf.end(), cdf.begin());
    const double total = cdf.back();
    Rng rng(seed);
    std::vector<Assignment> out;
    out.reserve(reads);
    for (std::uint64_t r = 0; r < reads; ++r) {
        const double u = rng.uniform() * total;
        auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        if (it == cdf.end()) --it;
        out.push_back(state_from_index(model, static_cast<std::uint64_t>(it - cdf.begin())));
    }
    return SampleSet::from_reads(model, std::move(out), seed);
}

SampleSet sample(const ProblemModel& model, const AnnealSchedule& schedule, const EnergyCurves& curves,
                 std::uint64_t reads, const SamplerConfig& cfg) {
    switch (cfg.backend) {
        case Backend::svmc: return svmc_sample(model, schedule, curves, reads, cfg);
        case Backend::thermal: return thermal_sample(model, schedule, curves, reads, cfg);
        case Backend::boltzmann_exact:
            cfg.validate();
            return boltzmann_exact_sample(model, cfg.beta, reads, cfg.seed);
    }
    throw ValidationError("unknown backend");
}

// ---------------------------------------------------------------------------
// CSV

void write_sampleset_csv(std::ostream& out, const SampleSet& samples) {
    out << "energy,count,bitstring\n";
    for (const SampleRecord& r : samples.records()) {
        out << csv::number(r.energy) << ',' << r.count << ',';
        for (std::int8_t v : r.bits) out << (v > 0 ? '1' : '0');
        out << '\n';
    }
}

SampleSet read_sampleset_csv(std::istream& in, Domain domain) {
    csv::Table t = csv::read(in);
    const std::size_t ce = t.column("energy"), cc = t.column("count"), cb = t.column("bitstring");
    std::vector<SampleRecord> records;
    int n = -1;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& text = t.text(r, cb);
        if (n < 0) n = static_cast<int>(text.size());
        Assignment bits;
        bits.reserve(text.size());
        for (char c : text) {
            if (c != '0' && c != '1') throw ValidationError("bitstring must be 0/1");
            bits.push_back(c == '1' ? 1 : (domain == Domain::spin ? -1 : 0));
        }
        const double count = t.number(r, cc);
        if (!(count >= 1.0) || count != std::floor(count)) throw ValidationError("count must be a positive integer");
        records.push_back({std::move(bits), t.number(r, ce), static_cast<std::uint64_t>(count)});
    }
    return SampleSet(domain, std::max(n, 0), std::move(records), 0);
}

}  // namespace annealslice
