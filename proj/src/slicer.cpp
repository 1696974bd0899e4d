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

#include "annealslice/slicer.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>

#include "annealslice/common.hpp"
#include "annealslice/csv.hpp"

namespace annealslice {

void SliceOptions::validate() const {
    if (!(total_time >= 1.0) || !std::isfinite(total_time)) throw ValidationError("anneal time must be >= 1 us");
    if (n_slices < 2) throw ValidationError("need at least 2 slices");
    if (reads == 0) throw ValidationError("reads must be positive");
    if (!(quench_width > 0.0)) throw ValidationError("quench width must be positive");
    if (!(best_fraction > 0.0 && best_fraction <= 1.0)) throw ValidationError("best fraction must lie in (0, 1]");
    if (pause) {
        if (!(pause->start > 0.0 && pause->start < total_time))
            throw ValidationError("pause start must lie strictly inside the active anneal");
        if (!(pause->length >= 0.0)) throw ValidationError("pause length must be non-negative");
    }
    if (!fractional) {
        for (int i = 1; i <= n_slices; ++i) {
            const double t = schedule_time() * i / n_slices;
            if (std::abs(t - std::round(t)) > 1e-9)
                throw ValidationError("slice time " + csv::number(t) + " is not a whole microsecond; enable fractional slicing");
        }
    }
}

namespace {

double slice_time(const SliceOptions& o, int index) {
    const double t = o.schedule_time() * index / o.n_slices;
    return o.fractional ? t : std::round(t);
}

AnnealSchedule base_schedule(const SliceOptions& o) {
    if (o.pause) return with_pause(o.pause->start, o.pause->length, o.total_time);
    return standard(o.total_time);
}

}  // namespace

AnnealSchedule slice_schedule(const SliceOptions& options, int index) {
    if (index < 1 || index > options.n_slices) throw ValidationError("slice index out of range");
    AnnealSchedule base = base_schedule(options);
    if (index == options.n_slices) return base;
    return sliced_with_pause(base, slice_time(options, index), options.quench_width);
}

SliceTrace run_slicing(const ProblemModel& model, const SliceOptions& options, const SamplerConfig& cfg,
                       const EnergyCurves& curves) {
    options.validate();
    cfg.validate();
    if (options.embedding) {
        // Models read from text carry no topology; then only the qubit ids are checked.
        if (model.topology()) check_embedding(*options.embedding, *model.topology());
        for (const auto& chain : options.embedding->chains) {
            if (chain.empty()) throw ValidationError("empty chain");
            for (int q : chain)
                if (q < 0 || q >= model.num_variables()) throw ValidationError("chain qubit outside the model");
        }
    }

    const auto n = static_cast<std::size_t>(options.n_slices);
    // Build every schedule first so an infeasible quench fails before any sampling.
    std::vector<AnnealSchedule> schedules;
    schedules.reserve(n);
    for (int i = 1; i <= options.n_slices; ++i) schedules.push_back(slice_schedule(options, i));

    SamplerConfig inner = cfg;
    if (resolve_threads(options.threads) > 1) inner.threads = 1;

    SliceTrace trace;
    trace.pause = options.pause;
    trace.slice_times.resize(n);
    trace.mean_energy.resize(n);
    trace.best_mean.resize(n);
    trace.best_set.resize(n);
    trace.best_bitstring.resize(n);
    if (options.embedding) trace.chain_unbroken.resize(n);
    std::vector<SampleSet> samples(options.keep_samples ? n : 0);

    parallel_for(n, options.threads, [&](std::size_t s) {
        SamplerConfig c = inner;
        c.seed = derive_seed(cfg.seed, s + 1);
        SampleSet set = sample(model, schedules[s], curves, options.reads, c);
        trace.slice_times[s] = slice_time(options, static_cast<int>(s + 1));
        trace.mean_energy[s] = set.mean_energy();
        trace.best_mean[s] = best_fraction_mean(set, options.best_fraction);
        trace.best_set[s] = best_fraction_set(set, options.best_fraction);
        trace.best_bitstring[s] = set.records().front().bits;
        if (options.embedding) trace.chain_unbroken[s] = chain_break_fraction(set, *options.embedding).unbroken();
        if (options.keep_samples) samples[s] = std::move(set);
    });
    trace.samples = std::move(samples);
    for (std::size_t s = 0; s + 1 < n; ++s) trace.hamming.push_back(adjacent_hamming(trace.best_set[s], trace.best_set[s + 1]));
    return trace;
}

double adjacent_hamming(std::span<const Assignment> a, std::span<const Assignment> b) {
    if (a.empty() || b.empty()) throw ValidationError("hamming needs non-empty sets");
    const std::size_t len = a.front().size();
    // Per-position value counts turn the all-pairs sum into O((|a| + |b|) n).
    std::vector<double> ones_a(len, 0.0), ones_b(len, 0.0);
    for (const Assignment& u : a) {
        if (u.size() != len) throw ValidationError("bitstring length mismatch");
        for (std::size_t i = 0; i < len; ++i) ones_a[i] += u[i] > 0 ? 1.0 : 0.0;
    }
    for (const Assignment& v : b) {
        if (v.size() != len) throw ValidationError("bitstring length mismatch");
        for (std::size_t i = 0; i < len; ++i) ones_b[i] += v[i] > 0 ? 1.0 : 0.0;
    }
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    double total = 0.0;
    for (std::size_t i = 0; i < len; ++i) total += ones_a[i] * (nb - ones_b[i]) + (na - ones_a[i]) * ones_b[i];
    return total / (na * nb);
}

std::vector<int> per_qubit_qfp(std::span<const Assignment> best) {
    if (best.empty()) throw ValidationError("no slices");
    const std::size_t len = best.back().size();
    std::vector<int> out(len);
    for (std::size_t q = 0; q < len; ++q) {
        std::size_t j = best.size() - 1;
        while (j > 0 && best[j - 1].at(q) == best.back()[q]) --j;
        out[q] = static_cast<int>(j + 1);
    }
    return out;
}

std::vector<int> per_qubit_qfp(const SliceTrace& trace) { return per_qubit_qfp(trace.best_bitstring); }

std::vector<std::uint64_t> qfp_histogram(std::span<const int> qfp, int n_slices, int n_bins) {
    if (n_slices < 1 || n_bins < 1) throw ValidationError("histogram needs positive slice and bin counts");
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n_bins), 0);
    for (int q : qfp) {
        if (q < 1 || q > n_slices) throw ValidationError("QFP slice index out of range");
        const auto bin = static_cast<std::size_t>(static_cast<long long>(q - 1) * n_bins / n_slices);
        ++counts[bin];
    }
    return counts;
}

void write_trace_csv(std::ostream& out, const SliceTrace& trace) {
    out << "slice,t_us,mean_energy,best1pct_mean,hamming_prev,chain_unbroken\n";
    for (std::size_t s = 0; s < trace.size(); ++s) {
        out << s + 1 << ',' << csv::number(trace.slice_times[s]) << ',' << csv::number(trace.mean_energy[s]) << ','
            << csv::number(trace.best_mean[s]) << ',';
        if (s > 0) out << csv::number(trace.hamming[s - 1]);
        out << ',';
        if (!trace.chain_unbroken.empty()) out << csv::number(trace.chain_unbroken[s]);
        out << '\n';
    }
}

TraceTable read_trace_csv(std::istream& in) {
    csv::Table t = csv::read(in);
    const std::size_t cs = t.column("slice"), ct = t.column("t_us"), cm = t.column("mean_energy"),
                      cb = t.column("best1pct_mean"), ch = t.column("hamming_prev"), cc = t.column("chain_unbroken");
    TraceTable out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const double slice = t.number(r, cs);
        if (slice != std::floor(slice) || slice < 1) throw ValidationError("slice must be a positive integer");
        out.slice.push_back(static_cast<int>(slice));
        out.t_us.push_back(t.number(r, ct));
        out.mean_energy.push_back(t.number(r, cm));
        out.best_mean.push_back(t.number(r, cb));
        out.hamming_prev.push_back(t.optional_number(r, ch));
        out.chain_unbroken.push_back(t.optional_number(r, cc));
    }
    if (out.slice.empty()) throw ValidationError("trace has no rows");
    return out;
}

void write_best_bitstrings_csv(std::ostream& out, const SliceTrace& trace) {
    out << "slice,bitstring\n";
    for (std::size_t s = 0; s < trace.size(); ++s) {
        out << s + 1 << ',';
        for (std::int8_t v : trace.best_bitstring[s]) out << (v > 0 ? '1' : '0');
        out << '\n';
    }
}

std::vector<Assignment> read_best_bitstrings_csv(std::istream& in) {
    csv::Table t = csv::read(in);
    const std::size_t cb = t.column("bitstring");
    std::vector<Assignment> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const std::string& text = t.text(r, cb);
        if (!out.empty() && text.size() != out.front().size()) throw ValidationError("bitstring length mismatch");
        Assignment a;
        for (char c : text) {
            if (c != '0' && c != '1') throw ValidationError("bitstring must be 0/1");
            a.push_back(c == '1' ? 1 : 0);
        }
        out.push_back(std::move(a));
    }
    if (out.empty()) throw ValidationError("no bitstrings");
    return out;
}

}  // namespace annealslice
