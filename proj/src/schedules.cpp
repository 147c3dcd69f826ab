#include "bspsa/schedules.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace bspsa {

ScheduleKind parse_schedule_kind(std::string_view name) {
  if (name == "spsa") return ScheduleKind::Spsa;
  if (name == "constant") return ScheduleKind::Constant;
  throw std::invalid_argument("unknown schedule kind '" + std::string(name) +
                              "' (expected \"spsa\" or \"constant\")");
}

std::string_view to_string(ScheduleKind kind) {
  return kind == ScheduleKind::Spsa ? "spsa" : "constant";
}

double default_stability(long n_iterations) {
  return std::round(0.1 * static_cast<double>(n_iterations));
}

GainSchedule GainSchedule::with_defaults(double c_end, double r_end, long n_iterations) {
  GainSchedule s;
  s.c_end = c_end;
  s.r_end = r_end;
  s.n_iterations = n_iterations;
  s.stability = default_stability(n_iterations);
  return s;
}

void GainSchedule::validate() const {
  if (n_iterations < 1) throw std::invalid_argument("schedule needs N >= 1");
  if (!(c_end > 0.0) || !std::isfinite(c_end)) throw std::invalid_argument("c_end must be positive");
  if (!(r_end > 0.0) || !std::isfinite(r_end)) throw std::invalid_argument("r_end must be positive");
  if (!(stability >= 0.0)) throw std::invalid_argument("stability constant A must be >= 0");
  if (kind == ScheduleKind::Spsa && !(alpha > gamma && gamma >= 0.0)) {
    throw std::invalid_argument("schedule needs alpha > gamma >= 0");
  }
  if (!std::isfinite(c_scale()) || !std::isfinite(a_scale()) || !(a_scale() > 0.0)) {
    throw std::invalid_argument("schedule constants overflow");
  }
}

double GainSchedule::c_scale() const {
  if (kind == ScheduleKind::Constant) return c_end;
  return c_end * std::pow(static_cast<double>(n_iterations), gamma);
}

double GainSchedule::a_scale() const {
  const double ak_exp = kind == ScheduleKind::Constant ? 0.0 : alpha;
  return r_end * c_end * c_end * std::pow(stability + static_cast<double>(n_iterations), ak_exp);
}

namespace {
void check_k(const GainSchedule& s, long k) {
  if (k < 1 || k > s.n_iterations) {
    throw std::invalid_argument("iteration " + std::to_string(k) + " outside [1, " +
                                std::to_string(s.n_iterations) + "]");
  }
}
}  // namespace

double c_k(const GainSchedule& s, long k) {
  check_k(s, k);
  if (s.kind == ScheduleKind::Constant || k == s.n_iterations) return s.c_end;
  return s.c_scale() / std::pow(static_cast<double>(k), s.gamma);
}

double a_k(const GainSchedule& s, long k) {
  check_k(s, k);
  if (s.kind == ScheduleKind::Constant) return s.r_end * s.c_end * s.c_end;
  return s.a_scale() / std::pow(s.stability + static_cast<double>(k), s.alpha);
}

}  // namespace bspsa
