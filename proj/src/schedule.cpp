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

#include "annealslice/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "annealslice/common.hpp"
#include "annealslice/csv.hpp"

namespace annealslice {

namespace {

// Slopes are compared with a relative slack so that a segment built to be
// exactly max_slope (e.g. standard(1)) is not rejected by rounding.
constexpr double kSlopeSlack = 1e-12;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

}  // namespace

double AnnealSchedule::s_at(double t) const {
    if (points_.empty()) throw ValidationError("empty schedule");
    if (t < 0.0 || t > total_time()) throw ValidationError("time " + fmt(t) + " outside schedule");
    if (t >= points_.back().t) return points_.back().s;
    auto it = std::upper_bound(points_.begin(), points_.end(), t,
                               [](double value, const SchedulePoint& p) { return value < p.t; });
    const SchedulePoint& hi = *it;
    const SchedulePoint& lo = *(it - 1);
    const double w = (t - lo.t) / (hi.t - lo.t);
    return lo.s + w * (hi.s - lo.s);
}

double s_of_t(const AnnealSchedule& schedule, double t) { return schedule.s_at(t); }

std::vector<ScheduleViolation> validate(const AnnealSchedule& schedule, const ScheduleLimits& limits) {
    std::vector<ScheduleViolation> out;
    auto pts = schedule.points();
    if (pts.size() < 2) {
        out.push_back({-1, "fewer than 2 points"});
        return out;
    }
    if (pts.size() > limits.max_points)
        out.push_back({-1, "too many points (" + std::to_string(pts.size()) + " > " + std::to_string(limits.max_points) + ")"});
    if (pts.front().t != 0.0 || pts.front().s != 0.0) out.push_back({0, "first point must be (0, 0)"});
    if (pts.back().s != 1.0) out.push_back({static_cast<int>(pts.size()) - 1, "last point must have s = 1"});
    for (std::size_t p = 0; p < pts.size(); ++p) {
        if (!std::isfinite(pts[p].t) || !std::isfinite(pts[p].s) || pts[p].s < 0.0 || pts[p].s > 1.0 || pts[p].t < 0.0)
            out.push_back({static_cast<int>(p), "point out of range"});
    }
    for (std::size_t p = 0; p + 1 < pts.size(); ++p) {
        const int seg = static_cast<int>(p);
        const double dt = pts[p + 1].t - pts[p].t;
        const double ds = pts[p + 1].s - pts[p].s;
        if (!(dt > 0.0)) {
            out.push_back({seg, "time not strictly increasing"});
            continue;
        }
        if (ds < 0.0) out.push_back({seg, "non-monotone anneal fraction"});
        const double slope = std::abs(ds) / dt;
        if (slope > limits.max_slope * (1.0 + kSlopeSlack))
            out.push_back({seg, "slope " + fmt(slope) + "/us exceeds " + fmt(limits.max_slope) + "/us"});
    }
    return out;
}

void require_valid(const AnnealSchedule& schedule, const ScheduleLimits& limits) {
    auto violations = validate(schedule, limits);
    if (violations.empty()) return;
    std::string msg = "invalid schedule:";
    for (const auto& v : violations) msg += " [segment " + std::to_string(v.segment) + ": " + v.message + "]";
    throw ValidationError(msg);
}

AnnealSchedule standard(double total_time, const ScheduleLimits& limits) {
    if (!(total_time >= 1.0)) throw ValidationError("anneal time must be >= 1 us");
    AnnealSchedule s({{0.0, 0.0}, {total_time, 1.0}});
    require_valid(s, limits);
    return s;
}

AnnealSchedule sliced(double total_time, double t_i, double quench_width, const ScheduleLimits& limits) {
    if (!(total_time >= 1.0)) throw ValidationError("anneal time must be >= 1 us");
    if (!(quench_width > 0.0)) throw ValidationError("quench width must be positive");
    if (!(t_i >= 1.0 && t_i <= total_time - quench_width))
        throw ValidationError("slice time " + fmt(t_i) + " outside [1, T - quench_width]");
    return sliced_with_pause(AnnealSchedule({{0.0, 0.0}, {total_time, 1.0}}), t_i, quench_width, limits);
}

AnnealSchedule with_pause(double t_pause_start, double pause_len, double active_time, const ScheduleLimits& limits) {
    if (!(active_time >= 1.0)) throw ValidationError("anneal time must be >= 1 us");
    if (!(t_pause_start > 0.0 && t_pause_start < active_time))
        throw ValidationError("pause start must lie strictly inside the active anneal");
    if (!(pause_len >= 0.0)) throw ValidationError("pause length must be non-negative");
    if (pause_len == 0.0) return standard(active_time, limits);
    const double s_hold = t_pause_start / active_time;
    AnnealSchedule s({{0.0, 0.0},
                      {t_pause_start, s_hold},
                      {t_pause_start + pause_len, s_hold},
                      {active_time + pause_len, 1.0}});
    require_valid(s, limits);
    return s;
}

AnnealSchedule sliced_with_pause(const AnnealSchedule& base, double t_i, double quench_width, const ScheduleLimits& limits) {
    if (!(quench_width > 0.0)) throw ValidationError("quench width must be positive");
    if (!(t_i > 0.0 && t_i < base.total_time()))
        throw ValidationError("slice time " + fmt(t_i) + " outside the schedule");
    std::vector<SchedulePoint> pts;
    for (const SchedulePoint& p : base.points()) {
        if (p.t < t_i) pts.push_back(p);
    }
    const double s_i = base.s_at(t_i);
    pts.push_back({t_i, s_i});
    pts.push_back({t_i + quench_width, 1.0});
    AnnealSchedule s(std::move(pts));
    auto violations = validate(s, limits);
    if (!violations.empty()) {
        std::string msg = "infeasible quench at t=" + fmt(t_i) + ":";
        for (const auto& v : violations) msg += " [segment " + std::to_string(v.segment) + ": " + v.message + "]";
        throw ValidationError(msg);
    }
    return s;
}

void write_schedule_csv(std::ostream& out, const AnnealSchedule& schedule) {
    out << "t_us,s\n";
    for (const SchedulePoint& p : schedule.points()) out << csv::number(p.t) << ',' << csv::number(p.s) << '\n';
}

// ---------------------------------------------------------------------------
// EnergyCurves

EnergyCurves::EnergyCurves(std::vector<CurvePoint> table, std::string source)
    : table_(std::move(table)), source_(std::move(source)) {
    if (table_.size() < 2) throw ValidationError("curve table needs at least 2 rows");
    if (table_.front().s != 0.0 || table_.back().s != 1.0) throw ValidationError("curve table must span s = 0..1");
    if (table_.back().a_ghz != 0.0) throw ValidationError("A(1) must be 0");
    for (std::size_t p = 0; p < table_.size(); ++p) {
        const CurvePoint& c = table_[p];
        if (!std::isfinite(c.a_ghz) || !std::isfinite(c.b_ghz) || c.a_ghz < 0.0 || c.b_ghz < 0.0)
            throw ValidationError("curve values must be finite and non-negative");
        if (p == 0) continue;
        const CurvePoint& prev = table_[p - 1];
        if (!(c.s > prev.s)) throw ValidationError("curve s values must be strictly increasing");
        if (c.a_ghz > prev.a_ghz) throw ValidationError("A(s) must be non-increasing");
        if (c.b_ghz < prev.b_ghz) throw ValidationError("B(s) must be non-decreasing");
    }
}

namespace {

template <typename Field>
double interpolate(std::span<const CurvePoint> table, double s, Field field) {
    if (!(s >= 0.0 && s <= 1.0)) throw ValidationError("anneal fraction outside [0, 1]");
    auto it = std::upper_bound(table.begin(), table.end(), s, [](double v, const CurvePoint& p) { return v < p.s; });
    if (it == table.end()) return field(table.back());
    const CurvePoint& hi = *it;
    const CurvePoint& lo = *(it - 1);
    const double w = (s - lo.s) / (hi.s - lo.s);
    return field(lo) + w * (field(hi) - field(lo));
}

}  // namespace

double EnergyCurves::a(double s) const {
    return interpolate(table_, s, [](const CurvePoint& p) { return p.a_ghz; });
}

double EnergyCurves::b(double s) const {
    return interpolate(table_, s, [](const CurvePoint& p) { return p.b_ghz; });
}

double EnergyCurves::invert_b(double target) const {
    const double lo_b = table_.front().b_ghz;
    const double hi_b = table_.back().b_ghz;
    if (!(target >= lo_b && target <= hi_b)) throw RuntimeError("no freezeout point in schedule range");
    if (target == lo_b) return table_.front().s;
    // First row whose B reaches the target; the answer lies on the segment ending there.
    auto it = std::lower_bound(table_.begin(), table_.end(), target,
                               [](const CurvePoint& p, double v) { return p.b_ghz < v; });
    const CurvePoint& hi = *it;
    const CurvePoint& lo = *(it - 1);
    return lo.s + (target - lo.b_ghz) / (hi.b_ghz - lo.b_ghz) * (hi.s - lo.s);
}

EnergyCurves default_curves() {
    std::vector<CurvePoint> table;
    constexpr int kRows = 33;
    for (int r = 0; r < kRows; ++r) {
        const double s = static_cast<double>(r) / (kRows - 1);
        table.push_back({s, 8.0 * std::pow(1.0 - s, 3.0), 16.0 * std::pow(s, 1.5)});
    }
    return EnergyCurves(std::move(table), "default: A=8(1-s)^3, B=16 s^1.5, 33 points");
}

double curve_a(const EnergyCurves& curves, double s) { return curves.a(s); }
double curve_b(const EnergyCurves& curves, double s) { return curves.b(s); }
double invert_b(const EnergyCurves& curves, double target) { return curves.invert_b(target); }

EnergyCurves read_curves_csv(std::istream& in, std::string source) {
    csv::Table t = csv::read(in);
    const std::size_t cs = t.column("s"), ca = t.column("A_GHz"), cb = t.column("B_GHz");
    std::vector<CurvePoint> table;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        table.push_back({t.number(r, cs), t.number(r, ca), t.number(r, cb)});
    return EnergyCurves(std::move(table), std::move(source));
}

EnergyCurves load_curves(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot read " + path);
    return read_curves_csv(in, path);
}

void write_curves_csv(std::ostream& out, const EnergyCurves& curves) {
    out << "s,A_GHz,B_GHz\n";
    for (const CurvePoint& p : curves.table())
        out << csv::number(p.s) << ',' << csv::number(p.a_ghz) << ',' << csv::number(p.b_ghz) << '\n';
}

}  // namespace annealslice
