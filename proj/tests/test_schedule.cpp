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

#include <random>
#include <sstream>

#include "annealslice/common.hpp"
#include "annealslice/schedule.hpp"

using namespace annealslice;

namespace {

bool has_violation(const AnnealSchedule& s, const std::string& needle) {
    for (const auto& v : validate(s)) {
        if (v.message.find(needle) != std::string::npos) return true;
    }
    return false;
}

double slope(const SchedulePoint& a, const SchedulePoint& b) { return (b.s - a.s) / (b.t - a.t); }

}  // namespace

TEST_CASE("standard schedule geometry") {
    AnnealSchedule s = standard(1000);
    REQUIRE(s.size() == 2);
    CHECK(s.points()[0] == SchedulePoint{0, 0});
    CHECK(s.points()[1] == SchedulePoint{1000, 1});
    CHECK(slope(s.points()[0], s.points()[1]) == Catch::Approx(0.001));
    CHECK(validate(standard(1)).empty());
    CHECK(validate(standard(2000)).empty());
    CHECK(s_of_t(s, 250) == Catch::Approx(0.25));
    CHECK_THROWS_AS(standard(0.5), ValidationError);
}

TEST_CASE("sliced schedule quench points") {
    AnnealSchedule s = sliced(1000, 500);
    REQUIRE(s.size() == 3);
    CHECK(s.points()[1] == SchedulePoint{500, 0.5});
    CHECK(s.points()[2] == SchedulePoint{501, 1});
    CHECK(slope(s.points()[1], s.points()[2]) == Catch::Approx(0.5));
    CHECK(s.total_time() == 501);

    AnnealSchedule late = sliced(1000, 999);
    CHECK(slope(late.points()[1], late.points()[2]) == Catch::Approx(0.001));
    CHECK(validate(late).empty());

    CHECK_THROWS_AS(sliced(1000, 300, 0.2), ValidationError);
    CHECK_THROWS_AS(sliced(1000, 0.5), ValidationError);
    CHECK_THROWS_AS(sliced(1000, 1000), ValidationError);
}

TEST_CASE("paused schedule holds s over the pause") {
    AnnealSchedule p = with_pause(500, 1000, 1000);
    CHECK(p.total_time() == 2000);
    for (double t = 500; t <= 1500; t += 50) CHECK(s_of_t(p, t) == 0.5);
    CHECK(with_pause(500, 0, 1000) == standard(1000));
    AnnealSchedule q = sliced_with_pause(p, 1000);
    CHECK(q.points().back() == SchedulePoint{1001, 1});
    CHECK(q.points()[q.size() - 2] == SchedulePoint{1000, 0.5});
    CHECK_THROWS_AS(with_pause(0, 10, 1000), ValidationError);
    CHECK_THROWS_AS(with_pause(1000, 10, 1000), ValidationError);
}

TEST_CASE("validate reports point count, monotonicity and slope") {
    std::vector<SchedulePoint> pts;
    for (int i = 0; i <= 50; ++i) pts.push_back({i * 10.0, i / 50.0});
    AnnealSchedule many(pts);
    REQUIRE(many.size() == 51);
    CHECK(has_violation(many, "too many points"));
    pts.pop_back();
    pts.back() = {490, 1};
    CHECK(validate(AnnealSchedule(pts)).empty());

    AnnealSchedule down({{0, 0}, {10, 0.6}, {20, 0.4}, {30, 1}});
    auto v = validate(down);
    REQUIRE(!v.empty());
    CHECK(v.front().segment == 1);
    CHECK(has_violation(down, "non-monotone"));

    AnnealSchedule steep({{0, 0}, {10, 0.1}, {10.5, 1}});
    CHECK(has_violation(steep, "slope"));
    CHECK(validate(steep, {50, 2.0}).empty());

    CHECK(has_violation(AnnealSchedule({{0, 0}, {10, 0.5}}), "s = 1"));
    CHECK(has_violation(AnnealSchedule({{1, 0}, {10, 1}}), "(0, 0)"));
}

TEST_CASE("builder outputs validate over a grid of times") {
    for (double total : {1.0, 1000.0, 2000.0}) {
        CHECK(validate(standard(total)).empty());
        for (double t_i : {1.0, 500.0, 999.0}) {
            if (t_i > total - 1.0) continue;
            CHECK(validate(sliced(total, t_i)).empty());
        }
        if (total > 1.0) {
            AnnealSchedule p = with_pause(total / 2, 100, total);
            CHECK(validate(p).empty());
            for (double t_i : {1.0, total / 2 + 50, total + 99}) CHECK(validate(sliced_with_pause(p, t_i)).empty());
        }
    }
}

TEST_CASE("sliced agrees with standard before the quench and s is monotone") {
    std::mt19937_64 gen(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double total = 1.0 + std::floor(u(gen) * 2000.0);
        if (total < 2.0) continue;
        const double t_i = 1.0 + u(gen) * (total - 2.0);
        AnnealSchedule base = standard(total);
        AnnealSchedule s = sliced(total, t_i);
        for (int k = 0; k <= 20; ++k) {
            const double t = t_i * (k / 20.0);
            CHECK(s_of_t(s, t) == Catch::Approx(s_of_t(base, t)).margin(1e-12));
        }
        double prev = 0.0;
        for (int k = 0; k <= 50; ++k) {
            const double t = s.total_time() * (k / 50.0);
            const double v = s_of_t(s, t);
            CHECK(v >= prev);
            prev = v;
        }
        CHECK(s_of_t(s, s.total_time()) == 1.0);
    }
}

TEST_CASE("pause schedule is continuous") {
    AnnealSchedule p = with_pause(300, 700, 1000);
    for (double t = 0; t < p.total_time(); t += 0.5) {
        CHECK(std::abs(s_of_t(p, t + 0.5) - s_of_t(p, t)) <= 0.5 * 0.001 + 1e-12);
    }
}

TEST_CASE("energy curves interpolation and inversion") {
    EnergyCurves lin({{0.0, 1.0, 0.0}, {1.0, 0.0, 16.0}});
    CHECK(invert_b(lin, 8.0) == Catch::Approx(0.5).margin(1e-9));
    CHECK(invert_b(lin, 0.0) == 0.0);
    CHECK_THROWS_AS(invert_b(lin, 17.0), RuntimeError);
    CHECK(curve_a(lin, 0.25) == Catch::Approx(0.75));
    CHECK(curve_b(lin, 0.25) == Catch::Approx(4.0));

    EnergyCurves d = default_curves();
    CHECK(d.table().size() == 33);
    CHECK(d.a(1.0) == 0.0);
    CHECK(d.b(1.0) == Catch::Approx(16.0));
    CHECK(d.a(0.0) == Catch::Approx(8.0));
    for (double target : {0.5, 2.0, 7.3, 15.9}) CHECK(d.b(d.invert_b(target)) == Catch::Approx(target).epsilon(1e-9));

    CHECK_THROWS_AS(EnergyCurves({{0.0, 1.0, 0.0}, {1.0, 0.5, 16.0}}), ValidationError);
    CHECK_THROWS_AS(EnergyCurves({{0.0, 1.0, 2.0}, {1.0, 0.0, 1.0}}), ValidationError);
    CHECK_THROWS_AS(EnergyCurves({{0.0, 1.0, 0.0}, {0.0, 0.5, 1.0}, {1.0, 0.0, 2.0}}), ValidationError);
}

TEST_CASE("curves CSV round trip") {
    std::stringstream ss;
    write_curves_csv(ss, default_curves());
    EnergyCurves back = read_curves_csv(ss);
    REQUIRE(back.table().size() == 33);
    for (std::size_t i = 0; i < 33; ++i) {
        CHECK(back.table()[i].s == default_curves().table()[i].s);
        CHECK(back.table()[i].b_ghz == default_curves().table()[i].b_ghz);
    }
    std::stringstream out;
    write_schedule_csv(out, sliced(1000, 500));
    CHECK(out.str() == "t_us,s\n0,0\n500,0.5\n501,1\n");
}
