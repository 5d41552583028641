#include "q1d/renewal_mgf.hpp"

#include "q1d/detail/overloaded.hpp"
#include "q1d/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace q1d {

using detail::overloaded;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

ExtReal ext(double x) { return std::isfinite(x) ? ExtReal::finite(x) : ExtReal::infinity(); }

struct TildeJet {
  TildeF value;
  double d_minus = 0.0, d_zero = 0.0, d_plus = 0.0;
};

// First-exit MGFs from gate 0 to gates {-1, 0, +1}. Interior states are the
// non-gate vertices of cells -1 and 0.
TildeJet tilde_jet(const Cell& cell, double interior_bound, double lambda) {
  const int src = cell.source();
  const double gate_rate = cell.exit_rate(src);
  if (!(lambda < std::min(interior_bound, gate_rate))) {
    TildeJet out;
    out.value = {ExtReal::infinity(), ExtReal::infinity(), ExtReal::infinity()};
    return out;
  }

  std::vector<int> slot(static_cast<std::size_t>(cell.size()), -1);
  int m = 0;
  for (int v = 0; v < cell.size(); ++v)
    if (v != src && v != cell.sink()) slot[static_cast<std::size_t>(v)] = m++;
  auto state = [&](int v, std::int64_t c) { return slot[static_cast<std::size_t>(v)] + (c == 0 ? 0 : m); };

  // (r(x) - lambda) u_g(x) - sum_y r(x,y) u_g(y) = r(x -> gate g)
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(2 * m, 3);
  Eigen::MatrixXd du = Eigen::MatrixXd::Zero(2 * m, 3);
  if (m > 0) {
    Eigen::MatrixXd sys = Eigen::MatrixXd::Zero(2 * m, 2 * m);
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(2 * m, 3);
    for (std::int64_t c : {std::int64_t{0}, std::int64_t{-1}}) {
      for (int v = 0; v < cell.size(); ++v) {
        if (slot[static_cast<std::size_t>(v)] < 0) continue;
        const int i = state(v, c);
        sys(i, i) += cell.exit_rate(v) - lambda;
        for (const auto& mv : cell.moves(v)) {
          const std::int64_t tc = c + mv.cell_offset;
          if (mv.to == src)
            rhs(i, static_cast<Eigen::Index>(tc + 1)) += mv.rate;
          else
            sys(i, state(mv.to, tc)) -= mv.rate;
        }
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(sys);
    if (!(lu.rcond() > 1e-13))
      throw Error(ErrorCode::singular_system, "tilde_f: interior system is ill-conditioned at lambda=" +
                                                  std::to_string(lambda));
    u = lu.solve(rhs);
    du = lu.solve(u);  // d/dlambda (S - lambda I)^{-1} b = (S - lambda I)^{-1} u
    if ((u.array() < 0.0).any() || !u.allFinite())
      throw Error(ErrorCode::singular_system, "tilde_f: interior solve lost positivity");
  }

  double val[3] = {0, 0, 0}, der[3] = {0, 0, 0};
  const double hold = gate_rate - lambda;
  for (const auto& mv : cell.moves(src)) {
    const double w = mv.rate / hold;
    const double dw = mv.rate / (hold * hold);
    for (int g = 0; g < 3; ++g) {
      double target = 0.0, dtarget = 0.0;
      if (mv.to == src) {
        target = (mv.cell_offset + 1 == g) ? 1.0 : 0.0;
      } else {
        const int i = state(mv.to, mv.cell_offset);
        target = u(i, g);
        dtarget = du(i, g);
      }
      val[g] += w * target;
      der[g] += dw * target + w * dtarget;
    }
  }
  TildeJet out;
  out.value = {ext(val[0]), ext(val[1]), ext(val[2])};
  out.d_minus = der[0];
  out.d_zero = der[1];
  out.d_plus = der[2];
  return out;
}

MgfJet graph_jet(const GraphLaw& law, double lambda) {
  const TildeJet t = tilde_jet(*law.cell, law.interior_bound, lambda);
  MgfJet out;
  out.value = {ExtReal::infinity(), ExtReal::infinity()};
  if (t.value.zero.is_infinite()) return out;
  const double z = t.value.zero.value();
  if (z >= 1.0) return out;
  const double k = 1.0 / (1.0 - z);
  const double fm = t.value.minus.value() * k;
  const double fp = t.value.plus.value() * k;
  out.value = {ext(fm), ext(fp)};
  out.slope = {t.d_minus * k + fm * t.d_zero * k, t.d_plus * k + fp * t.d_zero * k};
  return out;
}

MgfJet discrete_jet(const DiscreteLaw& law, double lambda) {
  double v[2] = {0, 0}, d[2] = {0, 0};
  for (const auto& a : law.atoms) {
    const int k = a.sign > 0 ? 1 : 0;
    const double e = a.probability * std::exp(lambda * a.duration);
    v[k] += e;
    d[k] += e * a.duration;
  }
  return {{ext(v[0]), ext(v[1])}, {d[0], d[1]}};
}

// p (beta/(beta-lambda))^k and its derivative; infinite for lambda >= beta.
std::pair<ExtReal, double> gamma_piece(double p, double k, double beta, double lambda) {
  if (!(lambda < beta)) return {ExtReal::infinity(), inf};
  const double f = p * std::pow(beta / (beta - lambda), k);
  return {ext(f), f * k / (beta - lambda)};
}

double finite_or_throw(ExtReal x, const char* what) {
  if (x.is_infinite()) throw Error(ErrorCode::internal_inconsistency, what);
  return x.value();
}

// 4 f+ f- - 1 with infinities (and a singular solve right at the finiteness
// bound) reported as +inf.
double criticality_gap(const CycleLaw& law, double lambda) {
  try {
    const auto f = f_pm(law, lambda);
    if (f.plus.is_infinite() || f.minus.is_infinite()) return inf;
    return 4.0 * f.plus.value() * f.minus.value() - 1.0;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::singular_system) return inf;
    throw;
  }
}

}  // namespace

TildeF tilde_f(const GraphLaw& law, double lambda) { return tilde_jet(*law.cell, law.interior_bound, lambda).value; }

TildeF tilde_f(const Cell& cell, double lambda) { return tilde_f(make_graph_law(cell), lambda); }

double tilde_f_pathsum(const Cell& cell, double lambda, int max_len, PathDirection direction) {
  double kappa = 0.0;
  for (int v = 0; v < cell.size(); ++v) kappa = std::max(kappa, cell.vertex_rate(v));
  if (!(lambda < -(3.0 * kappa + 1.0)))
    throw Error(ErrorCode::domain_error, "tilde_f_pathsum: lambda must be below -(3 max r + 1)");
  if (max_len < 1) throw Error(ErrorCode::domain_error, "tilde_f_pathsum: max_len must be >= 1");

  const int n = cell.size();
  const int start = direction == PathDirection::forward ? cell.source() : cell.sink();
  const int end = direction == PathDirection::forward ? cell.sink() : cell.source();
  const Eigen::MatrixXd& r = cell.rate_matrix();

  // weight(x) = sum over partial paths ending at x of prod r(x_i,x_{i+1}) / (r(x_i) - lambda)
  Eigen::VectorXd weight = Eigen::VectorXd::Zero(n);
  weight(start) = 1.0;
  double total = 0.0;
  for (int len = 1; len <= max_len; ++len) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(n);
    for (int x = 0; x < n; ++x) {
      if (weight(x) == 0.0) continue;
      const double w = weight(x) / (cell.vertex_rate(x) - lambda);
      for (int y = 0; y < n; ++y) {
        if (r(x, y) == 0.0) continue;
        if (y == end)
          total += w * r(x, y);
        else if (y != start)
          next(y) += w * r(x, y);
      }
    }
    weight.swap(next);
  }
  return total;
}

double pathsum_tail_bound(const Cell& cell, double lambda, int max_len) {
  double ratio = 0.0;
  for (int v = 0; v < cell.size(); ++v) {
    const double rv = cell.vertex_rate(v);
    ratio = std::max(ratio, rv / (rv - lambda));
  }
  return std::pow(ratio, max_len + 1) / (1.0 - ratio);
}

int pathsum_length_for(const Cell& cell, double lambda, double abs_tol) {
  int len = 1;
  while (pathsum_tail_bound(cell, lambda, len) >= abs_tol) ++len;
  return len;
}

MgfJet f_jet(const CycleLaw& law, double lambda) {
  return std::visit(overloaded{
                        [&](const GraphLaw& g) { return graph_jet(g, lambda); },
                        [&](const DiscreteLaw& d) { return discrete_jet(d, lambda); },
                        [&](const ExponentialLaw& e) {
                          const auto [fp, dp] = gamma_piece(e.p, 1.0, e.beta_plus, lambda);
                          const auto [fm, dm] = gamma_piece(1.0 - e.p, 1.0, e.beta_minus, lambda);
                          return MgfJet{{fm, fp}, {dm, dp}};
                        },
                        [&](const GammaLaw& g) {
                          const auto [fp, dp] = gamma_piece(g.p, g.k_plus, g.beta_plus, lambda);
                          const auto [fm, dm] = gamma_piece(1.0 - g.p, g.k_minus, g.beta_minus, lambda);
                          return MgfJet{{fm, fp}, {dm, dp}};
                        },
                    },
                    law);
}

PlusMinus<ExtReal> f_pm(const CycleLaw& law, double lambda) { return f_jet(law, lambda).value; }

PlusMinus<double> sign_probabilities(const CycleLaw& law) {
  const auto f = f_pm(law, 0.0);
  return {f.minus.value(), f.plus.value()};
}

double lambda_c(const CycleLaw& law) {
  const auto p = sign_probabilities(law);
  if (p.plus == 0.0 || p.minus == 0.0) return inf;
  if (criticality_gap(law, 0.0) >= 0.0) return 0.0;

  double lo = 0.0, hi = 1.0;
  while (criticality_gap(law, hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) throw Error(ErrorCode::bracket_failure, "lambda_c: no sign change of 4 f+ f- - 1");
  }
  for (int it = 0; it < 300 && hi - lo > 1e-15 * std::max(1.0, hi); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double g = criticality_gap(law, mid);
    if (g == 0.0) return mid;
    (g < 0.0 ? lo : hi) = mid;
  }
  // lo keeps 4 f+ f- <= 1, so the square root at lambda_c is real.
  return lo;
}

PlusMinus<ExtReal> phi_pm(const CycleLaw& law, double lambda) { return phi_pm(law, lambda, lambda_c(law)); }

PlusMinus<ExtReal> phi_pm(const CycleLaw& law, double lambda, double lc) {
  if (lambda > lc) return {ExtReal::infinity(), ExtReal::infinity()};
  const auto f = f_pm(law, lambda);
  const double a = finite_or_throw(f.minus, "phi_pm: f- infinite below lambda_c");
  const double b = finite_or_throw(f.plus, "phi_pm: f+ infinite below lambda_c");
  double disc = 1.0 - 4.0 * a * b;
  if (disc < 0.0) {
    if (disc > -1e-12)
      disc = 0.0;
    else
      throw Error(ErrorCode::internal_inconsistency, "phi_pm: 1 - 4 f+ f- < 0 below lambda_c");
  }
  // (1 - s)/(2 f-+) rewritten as 2 f+-/(1 + s); no cancellation for small f.
  const double s = std::sqrt(disc);
  return {ext(2.0 * a / (1.0 + s)), ext(2.0 * b / (1.0 + s))};
}

PlusMinus<double> alpha_pm(const CycleLaw& law) {
  if (const auto* d = std::get_if<DiscreteLaw>(&law)) {
    PlusMinus<double> a{inf, inf};
    for (const auto& atom : d->atoms) {
      if (atom.probability <= 0.0) continue;
      double& slot = atom.sign > 0 ? a.plus : a.minus;
      slot = std::min(slot, atom.duration);
    }
    return a;
  }
  return {0.0, 0.0};
}

double mean_duration(const CycleLaw& law) {
  const MgfJet j = f_jet(law, 0.0);
  return j.slope.plus + j.slope.minus;
}

double velocity(const CycleLaw& law) {
  const auto p = sign_probabilities(law);
  return (p.plus - p.minus) / mean_duration(law);
}

MgfSummary mgf_summary(const CycleLaw& law, bool allow_one_sided) {
  validate_law(law, allow_one_sided);
  MgfSummary s;
  s.p = sign_probabilities(law);
  s.alpha = alpha_pm(law);
  s.mean_duration = mean_duration(law);
  s.velocity = (s.p.plus - s.p.minus) / s.mean_duration;
  s.lambda_c = lambda_c(law);
  if (const auto* g = std::get_if<GraphLaw>(&law)) s.lambda_interior = ext(g->interior_bound);
  return s;
}

RenewalModel::RenewalModel(CycleLaw law, bool allow_one_sided)
    : law_(std::move(law)), summary_(mgf_summary(law_, allow_one_sided)) {}

double RenewalModel::log_phi(Sign sign, double lambda) const {
  const auto p = phi(lambda);
  const ExtReal v = sign == Sign::plus ? p.plus : p.minus;
  return v.is_finite() ? std::log(v.value()) : inf;
}

double RenewalModel::log_phi_slope(Sign sign, double lambda) const {
  if (lambda >= summary_.lambda_c) return inf;
  const MgfJet j = f_jet(law_, lambda);
  const double a = finite_or_throw(j.value.minus, "log_phi_slope: f- infinite below lambda_c");
  const double b = finite_or_throw(j.value.plus, "log_phi_slope: f+ infinite below lambda_c");
  const double disc = 1.0 - 4.0 * a * b;
  if (!(disc > 0.0)) return inf;
  const double s = std::sqrt(disc);
  const double ds = -2.0 * (j.slope.minus * b + a * j.slope.plus) / s;
  // log phi_+- = log 2 + log f_+- - log(1 + s)
  const double own = sign == Sign::plus ? j.slope.plus / b : j.slope.minus / a;
  return own - ds / (1.0 + s);
}

double RenewalModel::boundary_atom(Sign sign) const {
  const auto* d = std::get_if<DiscreteLaw>(&law_);
  if (!d) return 0.0;
  const double alpha = sign == Sign::plus ? summary_.alpha.plus : summary_.alpha.minus;
  double mass = 0.0;
  for (const auto& a : d->atoms)
    if (a.sign == to_int(sign) && a.duration == alpha) mass += a.probability;
  return mass;
}

}  // namespace q1d
