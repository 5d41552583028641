#include "q1d/ratefn.hpp"

#include "q1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace q1d {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double alpha_of(const RenewalModel& m, Sign s) {
  return s == Sign::plus ? m.summary().alpha.plus : m.summary().alpha.minus;
}

bool at_boundary(double u, double alpha) { return alpha > 0.0 && std::abs(u - alpha) <= 1e-12 * alpha; }

// Bisection on the strictly increasing slope (log phi)'. nullopt when u is
// never reached (one-sided laws with bounded slope).
std::optional<double> solve_tilde_lambda(const RenewalModel& m, Sign sign, double u) {
  auto slope = [&](double l) { return m.log_phi_slope(sign, l); };
  const double lc = m.lambda_c();

  double hi = lc;
  if (!std::isfinite(hi)) {
    hi = 1.0;
    while (slope(hi) < u) {
      hi *= 2.0;
      if (hi > 512.0) return std::nullopt;  // e^lambda overflows soon after
    }
  }
  double lo = std::min(-1.0, hi - 1.0);
  while (slope(lo) > u) {
    lo = hi - 2.0 * (hi - lo);
    if (lo < -1e12) break;
  }
  for (int it = 0; it < 500; ++it) {
    const double mid = lo + 0.5 * (hi - lo);
    if (mid <= lo || mid >= hi) break;
    if (slope(mid) < u)
      lo = mid;
    else
      hi = mid;
  }
  const double s_hi = slope(hi);
  if (!std::isfinite(s_hi)) return lo;
  return std::abs(slope(lo) - u) <= std::abs(s_hi - u) ? lo : hi;
}

}  // namespace

double tilde_lambda(const RenewalModel& model, Sign sign, double u) {
  if (!(u > alpha_of(model, sign))) throw Error(ErrorCode::domain_error, "tilde_lambda: u must exceed alpha");
  const auto l = solve_tilde_lambda(model, sign, u);
  if (!l) throw Error(ErrorCode::domain_error, "tilde_lambda: u is outside the range of (log phi)'");
  return *l;
}

double tilde_lambda(const CycleLaw& law, Sign sign, double u) { return tilde_lambda(RenewalModel(law), sign, u); }

ExtReal first_passage_rate(const RenewalModel& model, Sign sign, double u) {
  const double alpha = alpha_of(model, sign);
  if (at_boundary(u, alpha) || u == alpha) {
    const double atom = model.boundary_atom(sign);
    return atom > 0.0 ? ExtReal::finite(std::max(0.0, -std::log(atom))) : ExtReal::infinity();
  }
  if (u < alpha) return ExtReal::infinity();
  const auto l = solve_tilde_lambda(model, sign, u);
  if (!l) return ExtReal::infinity();
  const double value = *l * u - model.log_phi(sign, *l);
  return ExtReal::finite(std::max(0.0, value));
}

ExtReal first_passage_rate(const CycleLaw& law, Sign sign, double u) {
  return first_passage_rate(RenewalModel(law), sign, u);
}

ExtReal position_rate(const RenewalModel& model, double theta) {
  if (theta == 0.0) return ExtReal::from_double(model.lambda_c());
  const Sign sign = theta > 0.0 ? Sign::plus : Sign::minus;
  const double mag = std::abs(theta);
  double u = 1.0 / mag;
  const double alpha = alpha_of(model, sign);
  if (at_boundary(u, alpha)) u = alpha;
  const ExtReal j = first_passage_rate(model, sign, u);
  if (j.is_infinite()) return j;
  return ExtReal::finite(mag * j.value());
}

ExtReal position_rate(const CycleLaw& law, double theta) { return position_rate(RenewalModel(law), theta); }

RateCurve rate_curve(const RenewalModel& model, CurveKind kind, std::span<const double> grid) {
  for (std::size_t i = 1; i < grid.size(); ++i)
    if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::invalid_input, "rate_curve: grid must be strictly increasing");
  RateCurve c;
  c.grid.assign(grid.begin(), grid.end());
  c.kind = kind;
  c.route = Route::renewal;
  c.law = describe(model.law());
  c.values.reserve(grid.size());
  for (double x : grid) {
    switch (kind) {
      case CurveKind::j_plus: c.values.push_back(first_passage_rate(model, Sign::plus, x)); break;
      case CurveKind::j_minus: c.values.push_back(first_passage_rate(model, Sign::minus, x)); break;
      case CurveKind::position: c.values.push_back(position_rate(model, x)); break;
    }
  }
  return c;
}

RateCurve rate_curve(const CycleLaw& law, CurveKind kind, std::span<const double> grid) {
  return rate_curve(RenewalModel(law), kind, grid);
}

QualSummary qualitative_summary(const RenewalModel& model) {
  const MgfSummary& s = model.summary();
  QualSummary q;
  q.velocity = s.velocity;
  q.lambda_c = s.lambda_c;
  q.alpha = s.alpha;
  if (s.lambda_c > 0.0 && std::isfinite(s.lambda_c)) {
    q.theta_c = {ExtReal::finite(model.log_phi_slope(Sign::minus, 0.0)),
                 ExtReal::finite(model.log_phi_slope(Sign::plus, 0.0))};
  } else {
    q.theta_c = {ExtReal::infinity(), ExtReal::infinity()};
  }
  q.left_endpoint = s.alpha.minus > 0.0 ? -1.0 / s.alpha.minus : -inf;
  q.right_endpoint = s.alpha.plus > 0.0 ? 1.0 / s.alpha.plus : inf;

  auto classify = [&](Sign sign, BoundaryBehavior& b, std::optional<double>& value) {
    const double alpha = alpha_of(model, sign);
    const double atom = model.boundary_atom(sign);
    if (alpha > 0.0 && std::isfinite(alpha) && atom > 0.0) {
      b = BoundaryBehavior::finite_limit;
      value = -std::log(atom) / alpha;
    } else {
      b = BoundaryBehavior::diverges;
    }
  };
  classify(Sign::minus, q.boundary.minus, q.boundary_value.minus);
  classify(Sign::plus, q.boundary.plus, q.boundary_value.plus);
  return q;
}

QualSummary qualitative_summary(const CycleLaw& law) { return qualitative_summary(RenewalModel(law)); }

std::vector<double> linear_grid(double from, double to, std::size_t points) {
  std::vector<double> g(points);
  if (points == 1) {
    g[0] = from;
    return g;
  }
  for (std::size_t i = 0; i < points; ++i)
    g[i] = from + (to - from) * static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = to;
  return g;
}

}  // namespace q1d
