#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/ratefn.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace q1d {

enum class EmpiricalKind { position, hitting };

/// Binned estimates of -(1/scale) log P(X in bin), scale = t for Z_t/t and
/// |n| for T_n/|n|. Only bins with at least `min_count` hits are kept.
struct EmpiricalCurve {
  EmpiricalKind kind = EmpiricalKind::position;
  std::vector<double> abscissa;  // bin centres
  std::vector<double> estimate;
  std::vector<ExtReal> lo;
  std::vector<ExtReal> hi;
  std::vector<std::size_t> count;
  std::size_t n_samples = 0;
  double scale = 1.0;  // t, or |n|
  std::int64_t level = 0;
  double bin_width = 0.0;
  double t_cap = 0.0;
  double censored_fraction = 0.0;
  std::size_t censored = 0;
  std::uint64_t seed = 0;
  unsigned workers = 1;
};

struct McOptions {
  std::uint64_t seed = 0;
  unsigned workers = 1;
  std::size_t bootstrap = 1000;
  std::size_t min_count = 5;
};

/// Samples Z_t/t; bin_width <= 0 selects 2/t.
EmpiricalCurve empirical_rate_position(const CycleLaw& law, double t, std::size_t n_samples, double bin_width,
                                       const McOptions& opts);

/// Samples T_n/|n| censored at t_cap; censored draws stay in the denominator.
EmpiricalCurve empirical_rate_hitting(const CycleLaw& law, std::int64_t level, std::size_t n_samples, double t_cap,
                                      double bin_width, const McOptions& opts);

struct BinComparison {
  double abscissa = 0.0;
  ExtReal analytic;
  double estimate = 0.0;
  ExtReal lo;
  ExtReal hi;
  bool covered = false;
};

struct ComparisonReport {
  std::vector<BinComparison> bins;
  double coverage = 0.0;
  /// max |analytic - estimate| over covered bins (0 when none are covered).
  double max_gap_covered = 0.0;
  /// max |analytic - estimate| over all compared bins with finite analytic value.
  double max_gap = 0.0;
};

struct Window {
  double center = 0.0;
  double half_width = 0.0;
};

/// Linearly interpolates the analytic curve at the empirical bin centres
/// inside its grid (and inside `window`). Throws Error(no_overlap).
ComparisonReport compare_curves(const RateCurve& analytic, const EmpiricalCurve& empirical,
                                std::optional<Window> window = std::nullopt);

}  // namespace q1d
