#include "bspsa/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bspsa {

Method parse_method(std::string_view name) {
  if (name == "SPSA" || name == "spsa") return Method::Spsa;
  if (name == "BSPSAS" || name == "bspsas") return Method::Bspsas;
  if (name == "BSPSA" || name == "bspsa") return Method::Bspsa;
  throw std::invalid_argument("unknown method '" + std::string(name) +
                              "' (expected SPSA, BSPSAS or BSPSA)");
}

std::string_view to_string(Method method) {
  switch (method) {
    case Method::Spsa: return "SPSA";
    case Method::Bspsas: return "BSPSAS";
    case Method::Bspsa: return "BSPSA";
  }
  return "?";
}

namespace {
bool positive(double x) { return x > 0.0 && std::isfinite(x); }
}  // namespace

void ParamSpec::validate(Method method) const {
  const std::string who = "parameter '" + name + "': ";
  if (!std::isfinite(theta_start)) throw std::invalid_argument(who + "start must be finite");
  if (!positive(c_end)) throw std::invalid_argument(who + "c_end must be positive");
  if (method == Method::Spsa) {
    if (!positive(r_end)) throw std::invalid_argument(who + "r_end must be positive");
  } else {
    if (!positive(s1)) throw std::invalid_argument(who + "s1 must be positive");
    if (!positive(sigma)) throw std::invalid_argument(who + "sigma must be positive");
  }
  if (lower && upper && !(*lower < *upper)) {
    throw std::invalid_argument(who + "lower bound must be below upper bound");
  }
}

MatchOutcome::MatchOutcome(int w) : w_(w) {
  if (w < -2 || w > 2) {
    throw std::out_of_range("match result " + std::to_string(w) + " outside [-2, 2]");
  }
}

PerturbationDraw PerturbationDraw::sample(Eigen::Index n, Rng& rng) {
  PerturbationDraw d{Vectord(n)};
  for (Eigen::Index i = 0; i < n; ++i) d.delta(i) = rng.sign();
  return d;
}

void TunerConfig::validate() const {
  if (params.empty()) throw std::invalid_argument("tuner needs at least one parameter");
  if (schedules.size() != params.size()) {
    throw std::invalid_argument("one gain schedule per parameter required");
  }
  if (!positive(tau)) throw std::invalid_argument("tau must be positive");
  for (const auto& p : params) p.validate(method);
  for (const auto& s : schedules) s.validate();
}

Vectord TunerConfig::sigmas() const {
  Vectord s(size());
  for (Eigen::Index i = 0; i < size(); ++i) s(i) = params[static_cast<std::size_t>(i)].sigma;
  return s;
}

TunerState initial_state(const TunerConfig& config) {
  config.validate();
  const Eigen::Index n = config.size();
  TunerState st;
  st.method = config.method;
  st.k = 1;
  st.tau = config.tau;
  st.theta.resize(n);
  st.spreads.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& p = config.params[static_cast<std::size_t>(i)];
    st.theta(i) = p.theta_start;
    st.spreads(i) = config.method == Method::Spsa ? 0.0 : p.s1;
  }
  st.theta = apply_constraints(st.theta, config.params);
  if (config.method == Method::Bspsa) st.precision = diag_precision(st.spreads);
  return st;
}

Vectord perturbation_sizes(std::span<const GainSchedule> schedules, long k) {
  Vectord c(static_cast<Eigen::Index>(schedules.size()));
  for (std::size_t i = 0; i < schedules.size(); ++i) {
    c(static_cast<Eigen::Index>(i)) = c_k(schedules[i], k);
  }
  return c;
}

Proposal propose(const TunerState& state, std::span<const GainSchedule> schedules,
                 const PerturbationDraw& draw) {
  if (static_cast<Eigen::Index>(schedules.size()) != state.size() ||
      draw.delta.size() != state.size()) {
    throw std::invalid_argument("proposal dimension mismatch");
  }
  Proposal p;
  p.c = perturbation_sizes(schedules, state.k);
  p.draw = draw;
  const Vectord step = draw.delta.cwiseProduct(p.c);
  p.theta_plus = state.theta + step;
  p.theta_minus = state.theta - step;
  return p;
}

Proposal propose(const TunerState& state, std::span<const GainSchedule> schedules, Rng& rng) {
  return propose(state, schedules, PerturbationDraw::sample(state.size(), rng));
}

Vectord apply_constraints(const Vectord& theta, std::span<const ParamSpec> specs) {
  Vectord out = theta;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    const auto& p = specs[static_cast<std::size_t>(i)];
    if (p.lower) out(i) = std::max(out(i), *p.lower);
    if (p.upper) out(i) = std::min(out(i), *p.upper);
  }
  return out;
}

Vectord emit(const Vectord& theta, std::span<const ParamSpec> specs) {
  Vectord out = apply_constraints(theta, specs);
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (specs[static_cast<std::size_t>(i)].integer_valued) out(i) = std::round(out(i));
  }
  // Rounding may step just outside a fractional bound.
  return apply_constraints(out, specs);
}

ScalarPosterior bspsa1_update(double theta, double spread, double c, double sigma, double tau,
                              double w) {
  const double s2 = spread * spread;
  const double sigma2 = sigma * sigma;
  const double denom = 4.0 * c * c * s2 + tau * tau * sigma2 * sigma2;
  return {theta + 2.0 * c * s2 * sigma2 / denom * w,
          std::sqrt(s2 * tau * tau * sigma2 * sigma2 / denom)};
}

namespace {

void check_update(const TunerConfig& config, const TunerState& state, const PerturbationDraw& draw,
                  Method expected) {
  if (state.method != expected || config.method != expected) {
    throw std::invalid_argument(std::string("state is not a ") + std::string(to_string(expected)) +
                                " state");
  }
  if (state.size() != config.size() || draw.delta.size() != state.size()) {
    throw std::invalid_argument("update dimension mismatch");
  }
}

}  // namespace

TunerState spsa_update(const TunerConfig& config, const TunerState& state,
                       const PerturbationDraw& draw, MatchOutcome w) {
  check_update(config, state, draw, Method::Spsa);
  TunerState next = state;
  for (Eigen::Index i = 0; i < state.size(); ++i) {
    const auto& s = config.schedules[static_cast<std::size_t>(i)];
    next.theta(i) += a_k(s, state.k) / (draw.delta(i) * c_k(s, state.k)) * w.value();
  }
  ++next.k;
  return next;
}

TunerState bspsas_update(const TunerConfig& config, const TunerState& state,
                         const PerturbationDraw& draw, MatchOutcome w) {
  check_update(config, state, draw, Method::Bspsas);
  const Eigen::Index n = state.size();
  const Vectord c = perturbation_sizes(config.schedules, state.k);
  const Vectord sigma = config.sigmas();
  const double tau2 = state.tau * state.tau;

  // sum_j Delta_j c_j theta_j / sigma_j^2 over all j; the i-th term is removed below.
  const Vectord scaled = draw.delta.cwiseProduct(c).cwiseProduct(state.theta).cwiseQuotient(
      sigma.cwiseProduct(sigma));
  const double total = scaled.sum();

  TunerState next = state;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s2 = state.spreads(i) * state.spreads(i);
    const double sig2 = sigma(i) * sigma(i);
    const double denom = 4.0 * c(i) * c(i) * s2 + tau2 * sig2 * sig2;
    const double gain = 2.0 * draw.delta(i) * c(i) * s2 * sig2 / denom;
    const double cross = n > 1 ? total - scaled(i) : 0.0;
    next.theta(i) = state.theta(i) + gain * cross + gain * w.value();
    next.spreads(i) = std::sqrt(s2 * tau2 * sig2 * sig2 / denom);
  }
  ++next.k;
  return next;
}

TunerState bspsa_update(const TunerConfig& config, const TunerState& state,
                        const PerturbationDraw& draw, MatchOutcome w) {
  check_update(config, state, draw, Method::Bspsa);
  const Vectord c = perturbation_sizes(config.schedules, state.k);
  const Vectord sigma = config.sigmas();
  const Vectord g = 2.0 * draw.delta.cwiseProduct(c).cwiseQuotient(sigma.cwiseProduct(sigma));

  TunerState next = state;
  rank1_precision_update_inplace(next.precision, g, state.tau);
  const Vectord b = solve_gauss_jordan(next.precision, (w.value() / (state.tau * state.tau)) * g);
  next.theta += b;
  next.spreads = next.precision.diagonal().cwiseSqrt().cwiseInverse();
  ++next.k;
  return next;
}

TunerState update(const TunerConfig& config, const TunerState& state,
                  const PerturbationDraw& draw, MatchOutcome w) {
  TunerState next;
  switch (config.method) {
    case Method::Spsa: next = spsa_update(config, state, draw, w); break;
    case Method::Bspsas: next = bspsas_update(config, state, draw, w); break;
    case Method::Bspsa: next = bspsa_update(config, state, draw, w); break;
  }
  next.theta = apply_constraints(next.theta, config.params);
  return next;
}

}  // namespace bspsa
