#include "q1d/gc_analysis.hpp"

#include "q1d/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace q1d {

std::string_view to_string(GcVerdict v) {
  switch (v) {
    case GcVerdict::holds: return "holds";
    case GcVerdict::fails: return "fails";
    case GcVerdict::inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(GcPrediction p) {
  return p == GcPrediction::holds ? "holds" : "generically_fails";
}

std::string_view to_string(IndependenceMethod m) {
  switch (m) {
    case IndependenceMethod::automatic: return "automatic";
    case IndependenceMethod::kolmogorov_smirnov: return "kolmogorov_smirnov";
    case IndependenceMethod::permutation: return "permutation";
  }
  return "automatic";
}

std::vector<double> symmetric_grid(double half_width, std::size_t half_points) {
  std::vector<double> pos;
  for (std::size_t k = 1; k <= half_points; ++k)
    pos.push_back(half_width * static_cast<double>(k) / static_cast<double>(half_points));
  std::vector<double> g;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it) g.push_back(-*it);
  g.push_back(0.0);
  g.insert(g.end(), pos.begin(), pos.end());
  return g;
}

GcReport gc_check_analytic(const CycleLaw& law, std::size_t grid_size, double tol) {
  if (grid_size < 2 || !(tol > 0.0)) throw Error(ErrorCode::invalid_input, "gc_check_analytic: need grid_size >= 2, tol > 0");
  const RenewalModel model(law);
  const MgfSummary& s = model.summary();
  GcReport r;
  r.lambda_c = s.lambda_c;
  r.p = s.p;
  r.grid_size = grid_size;
  r.tolerance = tol;
  if (const auto* g = std::get_if<GraphLaw>(&law); g && is_minimal(g->cell->graph())) r.delta = gc_delta(*g->cell);

  try {
    auto ratio = [&](double l) {
      const auto phi = model.phi(l);
      return phi.plus.value() / phi.minus.value();
    };
    const double lc = s.lambda_c;
    const double rho_c = ratio(lc);
    double dev = 0.0;
    for (double l : linear_grid(lc - 10.0 * (1.0 + std::abs(lc)), lc, grid_size))
      dev = std::max(dev, std::abs(ratio(l) / rho_c - 1.0));
    r.max_ratio_deviation = dev;
    r.verdict = dev < tol ? GcVerdict::holds : GcVerdict::fails;
    if (r.verdict == GcVerdict::holds) {
      r.C = rho_c;
      r.c = -std::log(rho_c);
    }

    const double c_used = r.c.value_or(std::log(s.p.minus / s.p.plus));
    const double a_max = std::max(s.alpha.plus, s.alpha.minus);
    double half = std::max(std::abs(s.velocity), 0.5);
    if (a_max > 0.0) half = std::min(half, 1.0 / a_max);
    const auto grid = symmetric_grid(0.8 * half, 10);
    r.symmetry_residual = gc_symmetry_residual(rate_curve(model, CurveKind::position, grid), c_used);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::invalid_input) throw;
    r.verdict = GcVerdict::inconclusive;
    r.C.reset();
    r.c.reset();
  } catch (const std::domain_error&) {
    r.verdict = GcVerdict::inconclusive;
    r.C.reset();
    r.c.reset();
  }
  return r;
}

GcPredictionResult gc_predict(const Cell& cell) {
  if (!support_symmetric(cell.graph()))
    throw Error(ErrorCode::asymmetric_support, "gc_predict: every edge needs its reverse");
  if (is_minimal(cell.graph())) return {GcPrediction::holds, gc_delta(cell)};
  return {GcPrediction::generically_fails, std::nullopt};
}

double ks_statistic(std::span<const double> a, std::span<const double> b) {
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size()), ny = static_cast<double>(y.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == t) ++i;
    while (j < y.size() && y[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return d;
}

double ks_p_value(double statistic, std::size_t n1, std::size_t n2) {
  const double ne = static_cast<double>(n1) * static_cast<double>(n2) / static_cast<double>(n1 + n2);
  const double sq = std::sqrt(ne);
  const double lam = (sq + 0.12 + 0.11 / sq) * statistic;
  if (lam < 0.2) return 1.0;
  // Q_KS(lam) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lam^2)
  double sum = 0.0, sign = 1.0;
  for (int j = 1; j <= 200; ++j) {
    const double term = sign * std::exp(-2.0 * j * j * lam * lam);
    sum += term;
    if (std::abs(term) < 1e-16 * std::abs(sum)) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

namespace {

double chi_square(const std::vector<int>& signs, const std::vector<std::size_t>& atom, std::size_t k) {
  std::vector<double> plus(k, 0.0), total(k, 0.0);
  double n_plus = 0.0;
  for (std::size_t i = 0; i < signs.size(); ++i) {
    total[atom[i]] += 1.0;
    if (signs[i] > 0) {
      plus[atom[i]] += 1.0;
      n_plus += 1.0;
    }
  }
  const double n = static_cast<double>(signs.size());
  const double frac = n_plus / n;
  double chi = 0.0;
  for (std::size_t a = 0; a < k; ++a) {
    const double ep = total[a] * frac, em = total[a] * (1.0 - frac);
    const double op = plus[a], om = total[a] - plus[a];
    if (ep > 0.0) chi += (op - ep) * (op - ep) / ep;
    if (em > 0.0) chi += (om - em) * (om - em) / em;
  }
  return chi;
}

}  // namespace

TestReport independence_test(std::span<const CycleSample> samples, double significance, IndependenceMethod method,
                             std::uint64_t permutation_seed, std::size_t permutations) {
  std::vector<double> plus, minus;
  for (const auto& s : samples) (s.sign > 0 ? plus : minus).push_back(s.duration);
  if (plus.size() < 100 || minus.size() < 100)
    throw Error(ErrorCode::insufficient_samples, "independence_test: need >= 100 samples of each sign");

  std::set<double> distinct;
  for (const auto& s : samples) {
    distinct.insert(s.duration);
    if (distinct.size() > 32) break;
  }
  if (method == IndependenceMethod::automatic)
    method = distinct.size() <= 32 ? IndependenceMethod::permutation : IndependenceMethod::kolmogorov_smirnov;

  TestReport r;
  r.method = method;
  r.n_plus = plus.size();
  r.n_minus = minus.size();
  if (method == IndependenceMethod::kolmogorov_smirnov) {
    r.statistic = ks_statistic(plus, minus);
    r.p_value = ks_p_value(r.statistic, plus.size(), minus.size());
  } else {
    std::map<double, std::size_t> ids;
    for (const auto& s : samples) ids.emplace(s.duration, ids.size());
    std::vector<int> signs;
    std::vector<std::size_t> atom;
    for (const auto& s : samples) {
      signs.push_back(s.sign);
      atom.push_back(ids.at(s.duration));
    }
    r.statistic = chi_square(signs, atom, ids.size());
    Rng rng = substream(permutation_seed, 0);
    std::size_t at_least = 0;
    for (std::size_t b = 0; b < permutations; ++b) {
      std::shuffle(signs.begin(), signs.end(), rng);
      if (chi_square(signs, atom, ids.size()) >= r.statistic - 1e-12) ++at_least;
    }
    r.p_value = static_cast<double>(at_least + 1) / static_cast<double>(permutations + 1);
  }
  r.reject = r.p_value < significance;
  return r;
}

double gc_symmetry_residual(const RateCurve& curve, double c) {
  const auto& g = curve.grid;
  double residual = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double target = -g[i];
    const double tol = 1e-9 * std::max(1.0, std::abs(target));
    auto it = std::lower_bound(g.begin(), g.end(), target - tol);
    if (it == g.end() || std::abs(*it - target) > tol)
      throw Error(ErrorCode::asymmetric_grid, "gc_symmetry_residual: grid is not symmetric about 0");
    const ExtReal a = curve.values[i];
    const ExtReal b = curve.values[static_cast<std::size_t>(it - g.begin())];
    if (a.is_infinite() && b.is_infinite()) continue;
    if (a.is_infinite() || b.is_infinite()) return std::numeric_limits<double>::infinity();
    residual = std::max(residual, std::abs(a.value() - b.value() - c * g[i]));
  }
  return residual;
}

}  // namespace q1d
