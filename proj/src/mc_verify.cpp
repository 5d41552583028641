#include "q1d/mc_verify.hpp"

#include "q1d/errors.hpp"
#include "q1d/rng.hpp"
#include "q1d/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <random>
#include <thread>

namespace q1d {
namespace {

constexpr std::uint64_t bootstrap_stream_tag = 0xb007'5742'0000'0000ULL;

/// Runs draw(rng) for n samples split into contiguous chunks, one substream
/// per worker, and concatenates the chunks in worker order.
template <typename T, typename Draw>
std::vector<T> parallel_draw(std::size_t n, const McOptions& opts, Draw draw) {
  const unsigned w = std::max(1u, opts.workers);
  std::vector<std::vector<T>> parts(w);
  auto job = [&](unsigned k) {
    Rng rng = substream(opts.seed, k);
    const std::size_t begin = n * k / w, end = n * (k + 1) / w;
    parts[k].reserve(end - begin);
    for (std::size_t i = begin; i < end; ++i) parts[k].push_back(draw(rng));
  };
  if (w == 1) {
    job(0);
  } else {
    std::vector<std::jthread> threads;
    for (unsigned k = 0; k < w; ++k) threads.emplace_back(job, k);
  }
  std::vector<T> out;
  out.reserve(n);
  for (auto& p : parts) out.insert(out.end(), p.begin(), p.end());
  return out;
}

ExtReal neg_log_rate(std::size_t count, std::size_t n, double scale) {
  if (count == 0) return ExtReal::infinity();
  return ExtReal::finite(-std::log(static_cast<double>(count) / static_cast<double>(n)) / scale);
}

void fill_bins(EmpiricalCurve& c, const std::vector<double>& xs, const McOptions& opts) {
  std::map<std::int64_t, std::size_t> hist;
  for (double x : xs) ++hist[static_cast<std::int64_t>(std::floor(x / c.bin_width + 1e-9))];

  const std::uint64_t boot_seed = splitmix64(opts.seed ^ bootstrap_stream_tag);
  for (const auto& [j, cnt] : hist) {
    if (cnt < opts.min_count) continue;
    const double est = neg_log_rate(cnt, c.n_samples, c.scale).value();
    c.abscissa.push_back((static_cast<double>(j) + 0.5) * c.bin_width);
    c.estimate.push_back(est);
    c.count.push_back(cnt);

    // Marginal of the multinomial resample for this bin.
    Rng rng = substream(boot_seed, static_cast<std::uint64_t>(j));
    std::binomial_distribution<std::size_t> binom(c.n_samples,
                                                  static_cast<double>(cnt) / static_cast<double>(c.n_samples));
    std::vector<double> reps(std::max<std::size_t>(opts.bootstrap, 1));
    for (auto& r : reps) r = neg_log_rate(binom(rng), c.n_samples, c.scale).as_double();
    std::sort(reps.begin(), reps.end());
    auto pct = [&](double q) {
      const double pos = q * static_cast<double>(reps.size() - 1);
      const auto lo = static_cast<std::size_t>(std::floor(pos));
      const auto hi = std::min(lo + 1, reps.size() - 1);
      const double frac = pos - static_cast<double>(lo);
      if (frac == 0.0) return reps[lo];
      if (std::isinf(reps[hi])) return reps[hi];
      return reps[lo] + frac * (reps[hi] - reps[lo]);
    };
    c.lo.push_back(ExtReal::from_double(std::min(pct(0.025), est)));
    c.hi.push_back(ExtReal::from_double(std::max(pct(0.975), est)));
  }
}

}  // namespace

EmpiricalCurve empirical_rate_position(const CycleLaw& law, double t, std::size_t n_samples, double bin_width,
                                       const McOptions& opts) {
  if (!(t > 0.0) || !std::isfinite(t)) throw Error(ErrorCode::invalid_input, "empirical_rate_position: t must be positive");
  if (n_samples < 1000) throw Error(ErrorCode::invalid_input, "empirical_rate_position: need n_samples >= 1000");
  validate_law(law, true);
  EmpiricalCurve c;
  c.kind = EmpiricalKind::position;
  c.n_samples = n_samples;
  c.scale = t;
  c.bin_width = bin_width > 0.0 ? bin_width : 2.0 / t;
  c.seed = opts.seed;
  c.workers = std::max(1u, opts.workers);

  const CycleSampler sampler(law);
  const auto xs = parallel_draw<double>(n_samples, opts, [&](Rng& rng) {
    return static_cast<double>(sample_position(sampler, t, rng)) / t;
  });
  fill_bins(c, xs, opts);
  return c;
}

EmpiricalCurve empirical_rate_hitting(const CycleLaw& law, std::int64_t level, std::size_t n_samples, double t_cap,
                                      double bin_width, const McOptions& opts) {
  if (level == 0) throw Error(ErrorCode::invalid_input, "empirical_rate_hitting: level must be nonzero");
  if (!(t_cap > 0.0) || !std::isfinite(t_cap)) throw Error(ErrorCode::invalid_input, "empirical_rate_hitting: t_cap must be positive");
  if (n_samples < 1000) throw Error(ErrorCode::invalid_input, "empirical_rate_hitting: need n_samples >= 1000");
  validate_law(law, true);
  const double scale = static_cast<double>(level < 0 ? -level : level);
  EmpiricalCurve c;
  c.kind = EmpiricalKind::hitting;
  c.n_samples = n_samples;
  c.scale = scale;
  c.level = level;
  c.t_cap = t_cap;
  c.bin_width = bin_width > 0.0 ? bin_width : 2.0 / scale;
  c.seed = opts.seed;
  c.workers = std::max(1u, opts.workers);

  const CycleSampler sampler(law);
  const auto draws = parallel_draw<double>(n_samples, opts, [&](Rng& rng) {
    const auto h = sample_hitting_time(sampler, level, rng, t_cap);
    return h.time ? *h.time / scale : std::numeric_limits<double>::infinity();
  });
  std::vector<double> finite;
  for (double x : draws)
    if (std::isfinite(x)) finite.push_back(x);
  c.censored = draws.size() - finite.size();
  c.censored_fraction = static_cast<double>(c.censored) / static_cast<double>(n_samples);
  fill_bins(c, finite, opts);
  return c;
}

ComparisonReport compare_curves(const RateCurve& analytic, const EmpiricalCurve& empirical, std::optional<Window> window) {
  const auto& g = analytic.grid;
  ComparisonReport r;
  if (g.size() < 2) throw Error(ErrorCode::no_overlap, "compare_curves: analytic grid has fewer than 2 points");
  std::size_t covered = 0;
  for (std::size_t i = 0; i < empirical.abscissa.size(); ++i) {
    const double x = empirical.abscissa[i];
    if (x < g.front() || x > g.back()) continue;
    if (window && std::abs(x - window->center) > window->half_width) continue;
    const auto it = std::upper_bound(g.begin(), g.end(), x);
    const std::size_t k = it == g.end() ? g.size() - 1 : static_cast<std::size_t>(it - g.begin());
    const ExtReal a0 = analytic.values[k - 1], a1 = analytic.values[k];
    ExtReal a = ExtReal::infinity();
    if (a0.is_finite() && a1.is_finite()) {
      const double s = (x - g[k - 1]) / (g[k] - g[k - 1]);
      a = ExtReal::finite(a0.value() + s * (a1.value() - a0.value()));
    }
    BinComparison b{x, a, empirical.estimate[i], empirical.lo[i], empirical.hi[i], false};
    b.covered = !(a < b.lo) && !(b.hi < a);
    if (a.is_finite()) {
      const double gap = std::abs(a.value() - b.estimate);
      r.max_gap = std::max(r.max_gap, gap);
      if (b.covered) r.max_gap_covered = std::max(r.max_gap_covered, gap);
    }
    covered += b.covered ? 1 : 0;
    r.bins.push_back(b);
  }
  if (r.bins.empty()) throw Error(ErrorCode::no_overlap, "compare_curves: no empirical bin inside the analytic range");
  r.coverage = static_cast<double>(covered) / static_cast<double>(r.bins.size());
  return r;
}

}  // namespace q1d
