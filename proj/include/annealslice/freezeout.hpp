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
#include <string>
#include <vector>

#include "annealslice/model.hpp"
#include "annealslice/sampler.hpp"
#include "annealslice/schedule.hpp"

namespace annealslice {

inline constexpr double kDefaultR2Min = 0.5;

/// k_B T in GHz.
constexpr double thermal_energy_ghz(double temperature_k = kDefaultTemperatureK) {
    return kBoltzmannGHzPerK * temperature_k;
}

/// ceil(sqrt(2 R)).
int recommended_bins(std::uint64_t reads);

struct BetaFit {
    double x = 0.0;
    double beta_eff = 0.0;
    double slope = 0.0;
    double r2 = 0.0;
    std::size_t n_pairs = 0;
    int n_bins = 0;
    bool valid = false;
    std::string reason;
};

/// Effective inverse temperature from an original and a rescaled sample set.
///
/// Both energy lists are binned on one grid over their joint range. Every pair
/// of bins occupied in both histograms gives a point
///   (E_a - E_b, log[P(E_a) P'(E_b) / (P(E_b) P'(E_a))]),
/// and a line through the origin is fitted with weights 1 / (sum of inverse
/// bin counts), the delta-method variance of the log ratio. beta_eff is the
/// slope over (x - 1). `scaled_energies` must be on the original model's scale
/// (the rescaled model's energies divided by x). n_bins = 0 picks
/// recommended_bins of the original read count.
BetaFit estimate_beta_eff(std::span<const double> energies, std::span<const double> scaled_energies, double x,
                          int n_bins = 0, double r2_min = kDefaultR2Min);

/// Same, from sample sets: `scaled` holds reads of rescale(model, x).
BetaFit estimate_beta_eff(const SampleSet& original, const SampleSet& scaled, double x, int n_bins = 0,
                          double r2_min = kDefaultR2Min);

/// s* with B(s*) = beta_eff * k_B * T. RuntimeError when out of range.
double freezeout_point(double beta_eff, const EnergyCurves& curves, double temperature_k = kDefaultTemperatureK);

/// 8 evenly spaced points on [0.6, 0.95].
std::vector<double> default_x_grid();

struct ScanResult {
    std::vector<BetaFit> fits;
    /// Index of the valid fit with the largest x, if any.
    std::optional<std::size_t> chosen;
};

/// For each x, samples the original and rescaled model with fresh seeds and
/// fits beta_eff. The schedule is ignored by the boltzmann_exact backend.
ScanResult scan_x(const ProblemModel& model, const SamplerConfig& cfg, std::span<const double> grid,
                  std::uint64_t reads, const AnnealSchedule& schedule, const EnergyCurves& curves,
                  int n_bins = 0, double r2_min = kDefaultR2Min);

inline constexpr double kFrozenThresholdDeg = 10.0;
inline constexpr double kConnectorExtent = 0.05;

/// Continuous piecewise-linear fit on axes normalized to [0, 1].
struct PolylineFit {
    /// Segment boundaries in normalized x, strictly inside (0, 1).
    std::vector<double> breakpoints;
    /// Fitted normalized y at 0, each breakpoint, and 1.
    std::vector<double> knots;
    /// Slope of every segment in degrees.
    std::vector<double> segment_slopes_deg;
    /// Segment indices of Phases 1, 2, 3.
    std::vector<int> phases;
    /// Slopes of the three phases in degrees.
    std::vector<double> slopes_deg;
    double sse = 0.0;
    double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;
    /// Constant input; every phase is flat.
    bool flat = false;
    bool frozen = false;
    std::optional<double> qfp;

    /// Phase-3 start in input x units.
    double phase3_start() const;
    /// Fitted value at input x.
    double evaluate(double x) const;
};

/// Fits 3 main segments plus up to max_segments - 3 short connectors
/// (x-extent below 5%) by grid search over breakpoints and local refinement,
/// then applies classify_frozen with the default threshold.
PolylineFit fit_polyline(std::span<const double> xs, std::span<const double> ys, int max_segments = 5);

struct FrozenDecision {
    bool frozen = false;
    std::optional<double> qfp;
};

/// Frozen iff |Phase-3 slope| < threshold_deg; the QFP is then the Phase-3 start.
FrozenDecision classify_frozen(const PolylineFit& fit, double threshold_deg = kFrozenThresholdDeg);

// CSV rows. BetaFit: "x,beta_eff,slope,r2,n_pairs,n_bins,valid,s_star".
// PolylineFit: "key,value" pairs.
void write_beta_fits_csv(std::ostream& out, const ScanResult& scan, const EnergyCurves* curves,
                         double temperature_k = kDefaultTemperatureK);
void write_polyline_csv(std::ostream& out, const PolylineFit& fit);

}  // namespace annealslice
