#pragma once

#include <string_view>

namespace bspsa {

enum class ScheduleKind {
  Spsa,      ///< c_k = c / k^gamma
  Constant,  ///< c_k = c_N for every k
};

ScheduleKind parse_schedule_kind(std::string_view name);
std::string_view to_string(ScheduleKind kind);

/// Gain sequences of one parameter, parameterized by their final values
/// c_N and R = a_N / c_N^2.
struct GainSchedule {
  double c_end = 0.0;
  double r_end = 0.0;
  double alpha = 0.602;
  double gamma = 0.101;
  double stability = 0.0;  ///< A
  long n_iterations = 0;   ///< N
  ScheduleKind kind = ScheduleKind::Spsa;

  /// Schedule with the recommended exponents and A = round(0.1 N).
  static GainSchedule with_defaults(double c_end, double r_end, long n_iterations);

  void validate() const;

  /// Numerator c of c_k.
  double c_scale() const;
  /// Numerator a of a_k.
  double a_scale() const;
};

double default_stability(long n_iterations);

/// Perturbation size at iteration k in [1, N].
double c_k(const GainSchedule& s, long k);

/// SPSA step gain at iteration k in [1, N].
double a_k(const GainSchedule& s, long k);

}  // namespace bspsa
