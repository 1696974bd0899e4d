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

#include "annealslice/freezeout.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "annealslice/common.hpp"
#include "annealslice/csv.hpp"

namespace annealslice {

int recommended_bins(std::uint64_t reads) {
    if (reads == 0) throw ValidationError("reads must be positive");
    // sqrt of an exact square is exact, so the ceil is safe.
    return static_cast<int>(std::ceil(std::sqrt(2.0 * static_cast<double>(reads))));
}

BetaFit estimate_beta_eff(std::span<const double> energies, std::span<const double> scaled_energies, double x,
                          int n_bins, double r2_min) {
    if (!(x > 0.0 && x <= 1.0)) throw ValidationError("rescale factor must lie in (0, 1)");
    if (energies.empty() || scaled_energies.empty()) throw ValidationError("empty energy list");
    if (n_bins == 0) n_bins = recommended_bins(energies.size());
    if (n_bins < 2) throw ValidationError("need at least 2 bins");

    BetaFit fit;
    fit.x = x;
    fit.n_bins = n_bins;

    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double e : energies) lo = std::min(lo, e), hi = std::max(hi, e);
    for (double e : scaled_energies) lo = std::min(lo, e), hi = std::max(hi, e);
    const double width = (hi - lo) / n_bins;

    const auto k = static_cast<std::size_t>(n_bins);
    std::vector<double> h1(k, 0.0), h2(k, 0.0);
    auto bin_of = [&](double e) {
        if (!(width > 0.0)) return std::size_t{0};
        auto b = static_cast<std::size_t>((e - lo) / width);
        return std::min(b, k - 1);
    };
    for (double e : energies) h1[bin_of(e)] += 1.0;
    for (double e : scaled_energies) h2[bin_of(e)] += 1.0;

    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
        if (h1[a] == 0.0 || h2[a] == 0.0) continue;
        for (std::size_t b = a + 1; b < k; ++b) {
            if (h1[b] == 0.0 || h2[b] == 0.0) continue;
            // Normalizations cancel in the ratio.
            const double dl = std::log(h1[a] * h2[b] / (h1[b] * h2[a]));
            const double de = width * (static_cast<double>(a) - static_cast<double>(b));
            const double w = 1.0 / (1.0 / h1[a] + 1.0 / h1[b] + 1.0 / h2[a] + 1.0 / h2[b]);
            sxy += w * de * dl;
            sxx += w * de * de;
            syy += w * dl * dl;
            ++fit.n_pairs;
        }
    }
    if (fit.n_pairs < 3) {
        fit.beta_eff = std::numeric_limits<double>::quiet_NaN();
        fit.reason = "fewer than 3 usable bin pairs";
        return fit;
    }
    fit.slope = sxy / sxx;
    const double residual = syy - fit.slope * sxy;
    fit.r2 = syy > 0.0 ? 1.0 - residual / syy : 0.0;
    if (x == 1.0) {
        fit.beta_eff = std::numeric_limits<double>::quiet_NaN();
        fit.reason = "x = 1 leaves the distribution unchanged";
        return fit;
    }
    fit.beta_eff = fit.slope / (x - 1.0);
    if (fit.r2 < r2_min) {
        fit.reason = "r2 below threshold";
    } else if (!(fit.beta_eff > 0.0)) {
        fit.reason = "non-positive beta";
    } else {
        fit.valid = true;
    }
    return fit;
}

BetaFit estimate_beta_eff(const SampleSet& original, const SampleSet& scaled, double x, int n_bins, double r2_min) {
    if (original.empty() || scaled.empty()) throw ValidationError("empty sample set");
    if (!(x > 0.0 && x <= 1.0)) throw ValidationError("rescale factor must lie in (0, 1)");
    std::vector<double> e2 = scaled.energies();
    for (double& e : e2) e /= x;
    return estimate_beta_eff(original.energies(), e2, x, n_bins, r2_min);
}

double freezeout_point(double beta_eff, const EnergyCurves& curves, double temperature_k) {
    if (!(beta_eff > 0.0) || !std::isfinite(beta_eff)) throw ValidationError("beta_eff must be positive");
    const double target = beta_eff * thermal_energy_ghz(temperature_k);
    try {
        return curves.invert_b(target);
    } catch (const RuntimeError&) {
        throw RuntimeError("no freezeout in schedule: B target " + csv::number(target) + " GHz outside curve range");
    }
}

std::vector<double> default_x_grid() {
    std::vector<double> grid;
    for (int i = 0; i < 8; ++i) grid.push_back(0.6 + 0.05 * i);
    grid.back() = 0.95;
    return grid;
}

ScanResult scan_x(const ProblemModel& model, const SamplerConfig& cfg, std::span<const double> grid,
                  std::uint64_t reads, const AnnealSchedule& schedule, const EnergyCurves& curves, int n_bins,
                  double r2_min) {
    if (grid.empty()) throw ValidationError("empty x grid");
    for (double x : grid) {
        if (!(x > 0.0 && x < 1.0)) throw ValidationError("x grid must lie in (0, 1)");
    }
    ScanResult result;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        SamplerConfig c1 = cfg, c2 = cfg;
        c1.seed = derive_seed(cfg.seed, 2 * g);
        c2.seed = derive_seed(cfg.seed, 2 * g + 1);
        SampleSet original = sample(model, schedule, curves, reads, c1);
        SampleSet scaled = sample(rescale(model, grid[g]), schedule, curves, reads, c2);
        result.fits.push_back(estimate_beta_eff(original, scaled, grid[g], n_bins, r2_min));
    }
    for (std::size_t g = 0; g < result.fits.size(); ++g) {
        if (!result.fits[g].valid) continue;
        if (!result.chosen || result.fits[g].x > result.fits[*result.chosen].x) result.chosen = g;
    }
    return result;
}

// ---------------------------------------------------------------------------
// Polyline

namespace {

constexpr int kCoarseGrid = 50;
constexpr int kRefineRounds = 3;
constexpr double kMinGap = 1e-6;

double degrees(double slope) { return std::atan(slope) * 180.0 / std::numbers::pi; }

struct Candidate {
    std::vector<double> breaks;
    std::vector<double> knots;
    double sse = std::numeric_limits<double>::infinity();
};

class PiecewiseLs {
  public:
    PiecewiseLs(std::span<const double> xs, std::span<const double> ys) : xs_(xs), ys_(ys) {}

    // Continuous least squares on the hinge basis 1, x, (x - b_k)+.
    Candidate fit(const std::vector<double>& breaks) const {
        const std::size_t p = breaks.size() + 2;
        std::array<std::array<double, 8>, 8> a{};
        std::array<double, 8> rhs{};
        std::array<double, 8> row{};
        for (std::size_t r = 0; r < xs_.size(); ++r) {
            basis(xs_[r], breaks, row);
            for (std::size_t i = 0; i < p; ++i) {
                rhs[i] += row[i] * ys_[r];
                for (std::size_t j = 0; j < p; ++j) a[i][j] += row[i] * row[j];
            }
        }
        for (std::size_t i = 0; i < p; ++i) a[i][i] += 1e-12;
        std::array<double, 8> coef = solve(a, rhs, p);

        Candidate c;
        c.breaks = breaks;
        c.sse = 0.0;
        for (std::size_t r = 0; r < xs_.size(); ++r) {
            basis(xs_[r], breaks, row);
            double y = 0.0;
            for (std::size_t i = 0; i < p; ++i) y += coef[i] * row[i];
            c.sse += (ys_[r] - y) * (ys_[r] - y);
        }
        auto value = [&](double x) {
            basis(x, breaks, row);
            double y = 0.0;
            for (std::size_t i = 0; i < p; ++i) y += coef[i] * row[i];
            return y;
        };
        c.knots.push_back(value(0.0));
        for (double b : breaks) c.knots.push_back(value(b));
        c.knots.push_back(value(1.0));
        return c;
    }

  private:
    static void basis(double x, const std::vector<double>& breaks, std::array<double, 8>& row) {
        row[0] = 1.0;
        row[1] = x;
        for (std::size_t k = 0; k < breaks.size(); ++k) row[k + 2] = std::max(0.0, x - breaks[k]);
    }

    static std::array<double, 8> solve(std::array<std::array<double, 8>, 8> a, std::array<double, 8> b, std::size_t p) {
        for (std::size_t col = 0; col < p; ++col) {
            std::size_t pivot = col;
            for (std::size_t r = col + 1; r < p; ++r)
                if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
            std::swap(a[col], a[pivot]);
            std::swap(b[col], b[pivot]);
            if (a[col][col] == 0.0) continue;
            for (std::size_t r = col + 1; r < p; ++r) {
                const double f = a[r][col] / a[col][col];
                for (std::size_t c = col; c < p; ++c) a[r][c] -= f * a[col][c];
                b[r] -= f * b[col];
            }
        }
        std::array<double, 8> x{};
        for (std::size_t i = p; i-- > 0;) {
            double s = b[i];
            for (std::size_t c = i + 1; c < p; ++c) s -= a[i][c] * x[c];
            x[i] = a[i][i] == 0.0 ? 0.0 : s / a[i][i];
        }
        return x;
    }

    std::span<const double> xs_, ys_;
};

bool ordered(const std::vector<double>& breaks) {
    double prev = 0.0;
    for (double b : breaks) {
        if (!(b > prev + kMinGap)) return false;
        prev = b;
    }
    return prev < 1.0 - kMinGap;
}

// Coordinate-wise search on a shrinking local grid.
Candidate refine(const PiecewiseLs& ls, Candidate best) {
    double step = 1.0 / (kCoarseGrid + 1);
    for (int round = 0; round < kRefineRounds; ++round) {
        for (std::size_t idx = 0; idx < best.breaks.size(); ++idx) {
            const double centre = best.breaks[idx];
            for (int j = -10; j <= 10; ++j) {
                if (j == 0) continue;
                std::vector<double> trial = best.breaks;
                trial[idx] = centre + step * j / 10.0;
                if (!ordered(trial)) continue;
                Candidate c = ls.fit(trial);
                if (c.sse < best.sse) best = std::move(c);
            }
        }
        step /= 5.0;
    }
    return best;
}

std::vector<double> extents(const std::vector<double>& breaks) {
    std::vector<double> out;
    double prev = 0.0;
    for (double b : breaks) {
        out.push_back(b - prev);
        prev = b;
    }
    out.push_back(1.0 - prev);
    return out;
}

// Every segment beyond the first three must be a connector.
bool connectors_ok(const std::vector<double>& breaks) {
    std::vector<double> e = extents(breaks);
    std::sort(e.begin(), e.end());
    const std::size_t extra = e.size() - 3;
    for (std::size_t i = 0; i < extra; ++i)
        if (!(e[i] < kConnectorExtent)) return false;
    return true;
}

// Replaces main breakpoints with short connector segments.
Candidate with_connectors(const PiecewiseLs& ls, const Candidate& base, const std::vector<std::size_t>& at) {
    static constexpr std::array<double, 5> kWidths{0.01, 0.02, 0.03, 0.04, 0.049};
    static constexpr std::array<double, 5> kShifts{0.0, 0.25, 0.5, 0.75, 1.0};
    Candidate best;
    const std::size_t combos = kWidths.size() * kShifts.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < at.size(); ++i) total *= combos;
    for (std::size_t code = 0; code < total; ++code) {
        std::vector<double> breaks;
        std::size_t rest = code;
        for (std::size_t b = 0; b < base.breaks.size(); ++b) {
            if (std::find(at.begin(), at.end(), b) == at.end()) {
                breaks.push_back(base.breaks[b]);
                continue;
            }
            const std::size_t pick = rest % combos;
            rest /= combos;
            const double w = kWidths[pick / kShifts.size()];
            const double start = base.breaks[b] - kShifts[pick % kShifts.size()] * w;
            breaks.push_back(start);
            breaks.push_back(start + w);
        }
        if (!ordered(breaks)) continue;
        Candidate c = ls.fit(breaks);
        if (c.sse < best.sse) best = std::move(c);
    }
    if (best.breaks.empty()) return best;
    Candidate refined = refine(ls, best);
    return connectors_ok(refined.breaks) ? refined : best;
}

}  // namespace

double PolylineFit::phase3_start() const {
    if (flat) return x_min;
    const int seg = phases.at(2);
    const double start = seg == 0 ? 0.0 : breakpoints.at(static_cast<std::size_t>(seg - 1));
    return x_min + start * (x_max - x_min);
}

double PolylineFit::evaluate(double x) const {
    const double xn = (x - x_min) / (x_max - x_min);
    std::size_t seg = 0;
    while (seg < breakpoints.size() && xn > breakpoints[seg]) ++seg;
    const double left = seg == 0 ? 0.0 : breakpoints[seg - 1];
    const double right = seg == breakpoints.size() ? 1.0 : breakpoints[seg];
    const double w = (xn - left) / (right - left);
    const double yn = knots[seg] + w * (knots[seg + 1] - knots[seg]);
    return y_min + yn * (y_max - y_min);
}

PolylineFit fit_polyline(std::span<const double> xs, std::span<const double> ys, int max_segments) {
    if (xs.size() != ys.size()) throw ValidationError("xs and ys differ in length");
    if (xs.size() < 10) throw ValidationError("polyline fit needs at least 10 points");
    if (max_segments < 3 || max_segments > 5) throw ValidationError("max_segments must be 3, 4 or 5");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!std::isfinite(xs[i]) || !std::isfinite(ys[i])) throw ValidationError("non-finite input");
        if (i > 0 && !(xs[i] > xs[i - 1])) throw ValidationError("xs must be strictly increasing");
    }

    PolylineFit fit;
    fit.x_min = xs.front();
    fit.x_max = xs.back();
    auto [ymin, ymax] = std::minmax_element(ys.begin(), ys.end());
    fit.y_min = *ymin;
    fit.y_max = *ymax;

    if (fit.y_max == fit.y_min) {
        fit.flat = true;
        fit.breakpoints = {1.0 / 3.0, 2.0 / 3.0};
        fit.knots = {0.0, 0.0, 0.0, 0.0};
        fit.segment_slopes_deg = {0.0, 0.0, 0.0};
        fit.phases = {0, 1, 2};
        fit.slopes_deg = {0.0, 0.0, 0.0};
        FrozenDecision d = classify_frozen(fit);
        fit.frozen = d.frozen;
        fit.qfp = d.qfp;
        return fit;
    }

    std::vector<double> xn(xs.size()), yn(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        xn[i] = (xs[i] - fit.x_min) / (fit.x_max - fit.x_min);
        yn[i] = (ys[i] - fit.y_min) / (fit.y_max - fit.y_min);
    }
    PiecewiseLs ls(xn, yn);

    Candidate best;
    for (int i = 1; i <= kCoarseGrid; ++i) {
        for (int j = i + 1; j <= kCoarseGrid; ++j) {
            Candidate c = ls.fit({static_cast<double>(i) / (kCoarseGrid + 1), static_cast<double>(j) / (kCoarseGrid + 1)});
            if (c.sse < best.sse) best = std::move(c);
        }
    }
    best = refine(ls, std::move(best));

    const Candidate three = best;
    if (max_segments >= 4) {
        for (std::size_t b = 0; b < three.breaks.size(); ++b) {
            Candidate c = with_connectors(ls, three, {b});
            if (c.sse < best.sse) best = std::move(c);
        }
    }
    if (max_segments >= 5) {
        Candidate c = with_connectors(ls, three, {0, 1});
        if (c.sse < best.sse) best = std::move(c);
    }

    fit.breakpoints = best.breaks;
    fit.knots = best.knots;
    fit.sse = best.sse;
    std::vector<double> bounds{0.0};
    bounds.insert(bounds.end(), best.breaks.begin(), best.breaks.end());
    bounds.push_back(1.0);
    for (std::size_t s = 0; s + 1 < bounds.size(); ++s)
        fit.segment_slopes_deg.push_back(degrees((best.knots[s + 1] - best.knots[s]) / (bounds[s + 1] - bounds[s])));

    std::vector<int> order(fit.segment_slopes_deg.size());
    for (std::size_t s = 0; s < order.size(); ++s) order[s] = static_cast<int>(s);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return bounds[a + 1] - bounds[a] > bounds[b + 1] - bounds[b];
    });
    fit.phases.assign(order.begin(), order.begin() + 3);
    std::sort(fit.phases.begin(), fit.phases.end());
    for (int p : fit.phases) fit.slopes_deg.push_back(fit.segment_slopes_deg[static_cast<std::size_t>(p)]);

    FrozenDecision d = classify_frozen(fit);
    fit.frozen = d.frozen;
    fit.qfp = d.qfp;
    return fit;
}

FrozenDecision classify_frozen(const PolylineFit& fit, double threshold_deg) {
    if (fit.slopes_deg.size() != 3) throw ValidationError("fit must have three phases");
    FrozenDecision d;
    d.frozen = std::abs(fit.slopes_deg[2]) < threshold_deg;
    if (d.frozen && (fit.flat || fit.phases.size() == 3)) d.qfp = fit.phase3_start();
    return d;
}

// ---------------------------------------------------------------------------
// CSV

void write_beta_fits_csv(std::ostream& out, const ScanResult& scan, const EnergyCurves* curves, double temperature_k) {
    out << "x,beta_eff,slope,r2,n_pairs,n_bins,valid,chosen,s_star\n";
    for (std::size_t g = 0; g < scan.fits.size(); ++g) {
        const BetaFit& f = scan.fits[g];
        out << csv::number(f.x) << ',';
        if (std::isfinite(f.beta_eff)) out << csv::number(f.beta_eff);
        out << ',' << csv::number(f.slope) << ',' << csv::number(f.r2) << ',' << f.n_pairs << ',' << f.n_bins << ','
            << (f.valid ? 1 : 0) << ',' << (scan.chosen == g ? 1 : 0) << ',';
        if (f.valid && curves) {
            try {
                out << csv::number(freezeout_point(f.beta_eff, *curves, temperature_k));
            } catch (const RuntimeError&) {
            }
        }
        out << '\n';
    }
}

void write_polyline_csv(std::ostream& out, const PolylineFit& fit) {
    out << "key,value\n";
    for (std::size_t b = 0; b < fit.breakpoints.size(); ++b)
        out << "breakpoint_" << b + 1 << ',' << csv::number(fit.x_min + fit.breakpoints[b] * (fit.x_max - fit.x_min)) << '\n';
    for (std::size_t p = 0; p < fit.slopes_deg.size(); ++p)
        out << "phase" << p + 1 << "_slope_deg," << csv::number(fit.slopes_deg[p]) << '\n';
    out << "sse," << csv::number(fit.sse) << '\n';
    out << "frozen," << (fit.frozen ? 1 : 0) << '\n';
    out << "qfp,";
    if (fit.qfp) out << csv::number(*fit.qfp);
    out << '\n';
}

}  // namespace annealslice
