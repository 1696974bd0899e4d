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

#include <catch2/catch_amalgamated.hpp>

#include <sstream>

#include "annealslice/freezeout.hpp"
#include "support.hpp"

using namespace annealslice;
using namespace annealslice::testing;

namespace {

std::vector<double> repeat(std::initializer_list<std::pair<double, int>> levels) {
    std::vector<double> out;
    for (auto [e, n] : levels) out.insert(out.end(), static_cast<std::size_t>(n), e);
    return out;
}

/// Flat at 1 on [0, a], linear down to 0 on [a, b], flat at 0 after.
double three_phase(double x, double a, double b) {
    if (x <= a) return 1.0;
    if (x >= b) return 0.0;
    return 1.0 - (x - a) / (b - a);
}

struct Series {
    std::vector<double> xs, ys;
};

Series synthetic(std::uint64_t seed, double a, double b, double sigma, int n = 200) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> noise(0.0, sigma);
    Series s;
    for (int i = 0; i < n; ++i) {
        const double x = static_cast<double>(i) / (n - 1);
        s.xs.push_back(x);
        s.ys.push_back(three_phase(x, a, b) + noise(gen));
    }
    return s;
}

PolylineFit with_phase_slopes(double p1, double p2, double p3) {
    PolylineFit f;
    f.breakpoints = {0.3, 0.5};
    f.knots = {1.0, 1.0, 0.0, 0.0};
    f.segment_slopes_deg = {p1, p2, p3};
    f.phases = {0, 1, 2};
    f.slopes_deg = {p1, p2, p3};
    f.x_min = 1.0;
    f.x_max = 1001.0;
    return f;
}

std::vector<double> exact_energies(const ProblemModel& m, double beta, std::uint64_t reads, std::uint64_t seed) {
    return boltzmann_exact_sample(m, beta, reads, seed).energies();
}

}  // namespace

TEST_CASE("bin count rule") {
    CHECK(recommended_bins(1000) == 45);
    CHECK(recommended_bins(10000) == 142);
    CHECK(recommended_bins(2) == 2);
    CHECK(recommended_bins(50) == 10);
}

TEST_CASE("thermal energy constant") {
    CHECK(thermal_energy_ghz() == 20.83661 * 0.015);
    CHECK(thermal_energy_ghz() == Catch::Approx(0.3125).margin(1e-4));
}

TEST_CASE("freezeout point on a linear curve") {
    EnergyCurves lin({{0.0, 1.0, 0.0}, {1.0, 0.0, 16.0}});
    const double target = 2.0 * 20.83661 * 0.015;
    CHECK(freezeout_point(2.0, lin) == Catch::Approx(target / 16.0).margin(1e-9));
    CHECK(freezeout_point(2.0, lin) == Catch::Approx(0.0391).margin(1e-4));
    CHECK_THROWS_AS(freezeout_point(60.0, lin), RuntimeError);
    CHECK_THROWS_AS(freezeout_point(-1.0, lin), ValidationError);
}

TEST_CASE("geometric histogram ratios give an exact slope") {
    // Levels 0..3 on 4 bins of width 0.75; h1/h2 falls by 5/6 per bin, so
    // log[h1a h2b / (h1b h2a)] = (b - a) log(6/5) against dE = 0.75 (a - b).
    std::vector<double> e1 = repeat({{0, 1296}, {1, 1080}, {2, 900}, {3, 750}});
    std::vector<double> e2 = repeat({{0, 1296}, {1, 1296}, {2, 1296}, {3, 1296}});
    const double x = 0.5;
    BetaFit f = estimate_beta_eff(e1, e2, x, 4, 0.5);
    const double slope = -std::log(6.0 / 5.0) / 0.75;
    CHECK(f.n_pairs == 6);
    CHECK(f.slope == Catch::Approx(slope).epsilon(1e-12));
    CHECK(f.r2 == Catch::Approx(1.0).epsilon(1e-12));
    CHECK(f.beta_eff == Catch::Approx(slope / (x - 1.0)).epsilon(1e-12));
    CHECK(f.valid);
}

TEST_CASE("identical distributions at x = 1 are invalid") {
    std::mt19937_64 gen(1);
    ProblemModel m = random_dense(gen, Domain::spin, 8).build();
    std::vector<double> e = exact_energies(m, 1.0, 2000, 3);
    BetaFit f = estimate_beta_eff(e, e, 1.0);
    CHECK(!f.valid);
    CHECK(f.slope == 0.0);
    CHECK(std::isnan(f.beta_eff));
}

TEST_CASE("too few bin pairs is an invalid fit") {
    std::vector<double> e = repeat({{-1.0, 10}, {1.0, 10}});
    BetaFit f = estimate_beta_eff(e, e, 0.8, 4);
    CHECK(!f.valid);
    CHECK(f.n_pairs < 3);
    std::vector<double> flat(100, 2.0);
    CHECK(!estimate_beta_eff(flat, flat, 0.8).valid);
}

TEST_CASE("beta recovery from exact Boltzmann samples") {
    ProblemModel m = pm_spin_glass(6, 77);
    const double x = 0.8;
    int good = 0;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        SampleSet a = boltzmann_exact_sample(m, 1.0, 10000, derive_seed(seed, 0));
        SampleSet b = boltzmann_exact_sample(rescale(m, x), 1.0, 10000, derive_seed(seed, 1));
        BetaFit f = estimate_beta_eff(a, b, x);
        CHECK(f.n_bins == 142);
        if (f.valid && std::abs(f.beta_eff - 1.0) <= 0.1) ++good;
    }
    CHECK(good >= 4);
}

TEST_CASE("beta estimate is invariant under an energy shift") {
    std::mt19937_64 gen(5);
    std::vector<double> e1, e2;
    std::uniform_int_distribution<int> level(0, 40);
    for (int i = 0; i < 3000; ++i) e1.push_back(0.25 * level(gen));
    for (int i = 0; i < 3000; ++i) e2.push_back(0.25 * std::min(level(gen), level(gen)));
    BetaFit f = estimate_beta_eff(e1, e2, 0.7);
    for (double& e : e1) e += 16.0;
    for (double& e : e2) e += 16.0;
    BetaFit g = estimate_beta_eff(e1, e2, 0.7);
    CHECK(g.n_pairs == f.n_pairs);
    CHECK(g.slope == Catch::Approx(f.slope).epsilon(1e-9));
    CHECK(g.r2 == Catch::Approx(f.r2).epsilon(1e-9));
}

TEST_CASE("beta error shrinks as reads grow") {
    ProblemModel m = pm_spin_glass(5, 91);
    const double x = 0.8;
    auto mean_error = [&](std::uint64_t reads) {
        double total = 0.0;
        for (std::uint64_t seed = 0; seed < 8; ++seed) {
            SampleSet a = boltzmann_exact_sample(m, 1.0, reads, derive_seed(seed, 2 * reads));
            SampleSet b = boltzmann_exact_sample(rescale(m, x), 1.0, reads, derive_seed(seed, 2 * reads + 1));
            total += std::abs(estimate_beta_eff(a, b, x).beta_eff - 1.0);
        }
        return total / 8.0;
    };
    const double coarse = mean_error(1000);
    const double fine = mean_error(16000);
    // Two quadruplings: the error should drop about fourfold; allow noise.
    CHECK(fine <= 0.5 * coarse);
}

TEST_CASE("x grid scan") {
    std::vector<double> grid = default_x_grid();
    REQUIRE(grid.size() == 8);
    CHECK(grid.front() == 0.6);
    CHECK(grid.back() == 0.95);
    for (std::size_t i = 1; i < grid.size(); ++i) CHECK(grid[i] - grid[i - 1] == Catch::Approx(0.05));

    std::mt19937_64 gen(8);
    ProblemModel m = random_dense(gen, Domain::spin, 10, 0.5).build();
    SamplerConfig c;
    c.backend = Backend::boltzmann_exact;
    c.beta = 1.0;
    c.seed = 4;
    ScanResult r = scan_x(m, c, grid, 10000, standard(1), default_curves());
    REQUIRE(r.fits.size() == 8);
    REQUIRE(r.chosen.has_value());
    const std::size_t chosen = *r.chosen;
    CHECK(r.fits[chosen].valid);
    for (std::size_t g = chosen + 1; g < 8; ++g) CHECK(!r.fits[g].valid);

    ScanResult none = scan_x(ProblemModel::zeros(Domain::spin, 4), c, grid, 1000, standard(1), default_curves());
    CHECK(!none.chosen.has_value());
    for (const BetaFit& f : none.fits) CHECK(!f.valid);

    std::stringstream ss;
    write_beta_fits_csv(ss, r, nullptr);
    CHECK(ss.str().rfind("x,beta_eff,slope,r2,n_pairs,n_bins,valid,chosen,s_star\n", 0) == 0);
}

TEST_CASE("polyline recovers the steep-to-flat breakpoint") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        Series s = synthetic(seed, 0.3, 0.5, 0.01);
        PolylineFit f = fit_polyline(s.xs, s.ys);
        REQUIRE(f.slopes_deg.size() == 3);
        CHECK(std::abs(f.phase3_start() - 0.5) <= 0.05);
        CHECK(std::abs(f.slopes_deg[0]) < 10.0);
        CHECK(f.slopes_deg[1] < -45.0);
        CHECK(f.frozen);
    }
}

TEST_CASE("polyline on rescaled axes reports input units") {
    Series s = synthetic(3, 0.3, 0.5, 0.01);
    for (double& x : s.xs) x = 1.0 + 999.0 * x;
    for (double& y : s.ys) y = -500.0 + 100.0 * y;
    PolylineFit f = fit_polyline(s.xs, s.ys);
    REQUIRE(f.qfp.has_value());
    CHECK(std::abs(*f.qfp - 500.5) <= 0.05 * 999.0);
    CHECK(f.evaluate(1.0) == Catch::Approx(-400.0).margin(3.0));
}

TEST_CASE("constant and linear inputs") {
    std::vector<double> xs, flat(30, 4.0), line;
    for (int i = 0; i < 30; ++i) xs.push_back(10.0 + i), line.push_back(2.0 - 0.5 * i);
    PolylineFit f = fit_polyline(xs, flat);
    CHECK(f.flat);
    for (double d : f.slopes_deg) CHECK(d == 0.0);
    CHECK(f.frozen);
    REQUIRE(f.qfp.has_value());
    CHECK(*f.qfp == 10.0);

    PolylineFit g = fit_polyline(xs, line);
    for (double d : g.segment_slopes_deg) CHECK(d == Catch::Approx(-45.0).margin(1e-6));
    CHECK(g.sse <= 1e-20);
}

TEST_CASE("polyline input validation") {
    std::vector<double> xs{0, 1, 2, 3, 4, 5, 6, 7, 8}, ys(9, 0.0);
    CHECK_THROWS_AS(fit_polyline(xs, ys), ValidationError);
    xs.push_back(8);
    ys.push_back(0.0);
    CHECK_THROWS_AS(fit_polyline(xs, ys), ValidationError);
    xs.back() = 9;
    CHECK_THROWS_AS(fit_polyline(xs, ys, 2), ValidationError);
    CHECK_NOTHROW(fit_polyline(xs, ys, 3));
}

TEST_CASE("residual does not grow with more segments") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Series s = synthetic(100 + seed, 0.25, 0.6, 0.03, 120);
        const double e3 = fit_polyline(s.xs, s.ys, 3).sse;
        const double e4 = fit_polyline(s.xs, s.ys, 4).sse;
        const double e5 = fit_polyline(s.xs, s.ys, 5).sse;
        CHECK(e4 <= e3 + 1e-12);
        CHECK(e5 <= e4 + 1e-12);
    }
}

TEST_CASE("refitting a polyline's own samples recovers its breakpoints") {
    Series s = synthetic(9, 0.35, 0.55, 0.02);
    PolylineFit f = fit_polyline(s.xs, s.ys, 3);
    std::vector<double> ys;
    for (double x : s.xs) ys.push_back(f.evaluate(x));
    PolylineFit g = fit_polyline(s.xs, ys, 3);
    REQUIRE(g.breakpoints.size() == f.breakpoints.size());
    for (std::size_t i = 0; i < f.breakpoints.size(); ++i) CHECK(std::abs(g.breakpoints[i] - f.breakpoints[i]) <= 1.0 / 51);
}

TEST_CASE("frozen classification on published slopes") {
    for (double p3 : {-7.07, -9.71, -2.32, -1.31}) {
        FrozenDecision d = classify_frozen(with_phase_slopes(3.0, -84.3, p3));
        CHECK(d.frozen);
        REQUIRE(d.qfp.has_value());
        CHECK(*d.qfp == Catch::Approx(1.0 + 0.5 * 1000.0));
    }
    FrozenDecision hot = classify_frozen(with_phase_slopes(3.0, -84.3, -15.0));
    CHECK(!hot.frozen);
    CHECK(!hot.qfp.has_value());
    PolylineFit bad = with_phase_slopes(0, 0, 0);
    bad.slopes_deg.pop_back();
    CHECK_THROWS_AS(classify_frozen(bad), ValidationError);
}

TEST_CASE("frozen classification is monotone in the threshold") {
    std::mt19937_64 gen(6);
    std::uniform_real_distribution<double> slope(-90.0, 90.0), thr(0.0, 45.0);
    for (int i = 0; i < 500; ++i) {
        PolylineFit f = with_phase_slopes(slope(gen), slope(gen), slope(gen));
        const double t1 = thr(gen), t2 = t1 + thr(gen);
        if (classify_frozen(f, t1).frozen) CHECK(classify_frozen(f, t2).frozen);
    }
}

TEST_CASE("polyline CSV lists the fit") {
    Series s = synthetic(1, 0.3, 0.5, 0.01);
    std::stringstream ss;
    write_polyline_csv(ss, fit_polyline(s.xs, s.ys));
    const std::string text = ss.str();
    CHECK(text.find("frozen") != std::string::npos);
    CHECK(text.find("qfp") != std::string::npos);
}
