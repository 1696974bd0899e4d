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

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace annealslice {

/// (time in microseconds, anneal fraction).
struct SchedulePoint {
    double t;
    double s;
    bool operator==(const SchedulePoint&) const = default;
};

/// Hardware limits a schedule must respect.
struct ScheduleLimits {
    std::size_t max_points = 50;
    /// Largest |ds/dt| per microsecond.
    double max_slope = 1.0;
};

/// Piecewise-linear anneal path from (0, 0) to (total_time, 1).
/// Construction does not validate; builders below do, and validate() reports.
class AnnealSchedule {
  public:
    AnnealSchedule() = default;
    explicit AnnealSchedule(std::vector<SchedulePoint> points) : points_(std::move(points)) {}

    std::span<const SchedulePoint> points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    double total_time() const { return points_.empty() ? 0.0 : points_.back().t; }

    /// Linear interpolation; requires 0 <= t <= total_time().
    double s_at(double t) const;

    bool operator==(const AnnealSchedule&) const = default;

  private:
    std::vector<SchedulePoint> points_;
};

struct ScheduleViolation {
    /// Index of the offending segment (points[segment] -> points[segment+1]),
    /// or of the offending point for endpoint checks; -1 for whole-schedule issues.
    int segment;
    std::string message;
};

/// Empty when the schedule satisfies every invariant.
std::vector<ScheduleViolation> validate(const AnnealSchedule& schedule, const ScheduleLimits& limits = {});

/// Throws ValidationError listing the violations, if any.
void require_valid(const AnnealSchedule& schedule, const ScheduleLimits& limits = {});

/// s(t) = t / T.
AnnealSchedule standard(double total_time, const ScheduleLimits& limits = {});

inline constexpr double kDefaultQuenchWidth = 1.0;

/// Follows standard(T) to t_i, then jumps to s = 1 at t_i + quench_width.
AnnealSchedule sliced(double total_time, double t_i, double quench_width = kDefaultQuenchWidth,
                      const ScheduleLimits& limits = {});

/// standard(T_active) with s held at s(t_pause_start) for pause_len microseconds.
AnnealSchedule with_pause(double t_pause_start, double pause_len, double active_time,
                          const ScheduleLimits& limits = {});

/// Any schedule truncated at t_i and quenched to s = 1 over quench_width.
AnnealSchedule sliced_with_pause(const AnnealSchedule& base, double t_i, double quench_width = kDefaultQuenchWidth,
                                 const ScheduleLimits& limits = {});

double s_of_t(const AnnealSchedule& schedule, double t);

/// CSV with header "t_us,s".
void write_schedule_csv(std::ostream& out, const AnnealSchedule& schedule);

// ---------------------------------------------------------------------------
// Transverse (A) and problem (B) energy scales, in GHz.

struct CurvePoint {
    double s;
    double a_ghz;
    double b_ghz;
};

class EnergyCurves {
  public:
    /// Validates: s strictly increasing from 0 to 1, A non-increasing with
    /// A(1) = 0, B non-decreasing.
    explicit EnergyCurves(std::vector<CurvePoint> table, std::string source = "custom");

    std::span<const CurvePoint> table() const { return table_; }
    const std::string& source() const { return source_; }

    double a(double s) const;
    double b(double s) const;
    /// Smallest s with B(s) = target; throws RuntimeError("no freezeout point in
    /// schedule range") when target lies outside [B(0), B(1)].
    double invert_b(double target) const;

  private:
    std::vector<CurvePoint> table_;
    std::string source_;
};

/// 33 evenly spaced points, A(s) = 8 (1 - s)^3, B(s) = 16 s^1.5.
EnergyCurves default_curves();

double curve_a(const EnergyCurves& curves, double s);
double curve_b(const EnergyCurves& curves, double s);
double invert_b(const EnergyCurves& curves, double target);

/// CSV with header "s,A_GHz,B_GHz".
EnergyCurves read_curves_csv(std::istream& in, std::string source = "csv");
EnergyCurves load_curves(const std::string& path);
void write_curves_csv(std::ostream& out, const EnergyCurves& curves);

}  // namespace annealslice
