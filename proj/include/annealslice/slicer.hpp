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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "annealslice/clique.hpp"
#include "annealslice/model.hpp"
#include "annealslice/sampler.hpp"
#include "annealslice/schedule.hpp"

namespace annealslice {

struct PauseSpec {
    double start;
    double length;
};

struct SliceOptions {
    /// Active anneal time T (a pause adds to it).
    double total_time = 1000.0;
    int n_slices = 1000;
    std::uint64_t reads = 1000;
    std::optional<PauseSpec> pause;
    double quench_width = 1.0;
    /// Allow slice times that are not whole microseconds.
    bool fractional = false;
    double best_fraction = 0.01;
    /// When set, chain_unbroken is recorded per slice.
    std::optional<Embedding> embedding;
    /// Keep every slice's SampleSet in the trace.
    bool keep_samples = false;
    /// Slices sampled concurrently; 0 = hardware concurrency.
    unsigned threads = 1;

    void validate() const;
    /// Length of the full schedule, pause included.
    double schedule_time() const { return total_time + (pause ? pause->length : 0.0); }
};

struct SliceTrace {
    std::vector<double> slice_times;
    std::vector<double> mean_energy;
    std::vector<double> best_mean;
    std::vector<std::vector<Assignment>> best_set;
    /// Lowest-energy read per slice (ties lexicographic).
    std::vector<Assignment> best_bitstring;
    /// hamming[i] compares slices i and i + 1.
    std::vector<double> hamming;
    std::vector<double> chain_unbroken;
    std::vector<SampleSet> samples;
    /// Pause interval of the schedule, if any, for plotting.
    std::optional<PauseSpec> pause;

    std::size_t size() const { return slice_times.size(); }
};

/// Slice i (1-based) quenches the anneal at t_i = i * L / n_slices, where L is
/// the full schedule length; the last slice runs the unquenched schedule. Slice
/// i samples with seed derive_seed(cfg.seed, i).
SliceTrace run_slicing(const ProblemModel& model, const SliceOptions& options, const SamplerConfig& cfg,
                       const EnergyCurves& curves = default_curves());

/// Schedule sampled by slice `index` (1-based).
AnnealSchedule slice_schedule(const SliceOptions& options, int index);

/// Mean Hamming distance over all cross pairs (u in a, v in b).
double adjacent_hamming(std::span<const Assignment> a, std::span<const Assignment> b);

/// Per qubit, the first slice (1-based) from which its best-bitstring value
/// never changes again.
std::vector<int> per_qubit_qfp(std::span<const Assignment> best_bitstrings);
std::vector<int> per_qubit_qfp(const SliceTrace& trace);

/// Counts of QFP slice indices in n_bins equal-width bins over 1..n_slices.
std::vector<std::uint64_t> qfp_histogram(std::span<const int> qfp, int n_slices, int n_bins);

// Trace CSV: "slice,t_us,mean_energy,best1pct_mean,hamming_prev,chain_unbroken";
// absent values are empty fields.
void write_trace_csv(std::ostream& out, const SliceTrace& trace);

struct TraceTable {
    std::vector<int> slice;
    std::vector<double> t_us;
    std::vector<double> mean_energy;
    std::vector<double> best_mean;
    std::vector<std::optional<double>> hamming_prev;
    std::vector<std::optional<double>> chain_unbroken;
};

TraceTable read_trace_csv(std::istream& in);

// "slice,bitstring" with 0/1 per variable (spin -1 -> 0).
void write_best_bitstrings_csv(std::ostream& out, const SliceTrace& trace);
/// Values come back as 0/1.
std::vector<Assignment> read_best_bitstrings_csv(std::istream& in);

}  // namespace annealslice
