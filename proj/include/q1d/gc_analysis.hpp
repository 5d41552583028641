#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/ratefn.hpp"
#include "q1d/simulate.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>

namespace q1d {

enum class GcVerdict { holds, fails, inconclusive };
std::string_view to_string(GcVerdict v);

struct GcReport {
  GcVerdict verdict = GcVerdict::inconclusive;
  /// phi+/phi- (constant when the symmetry holds) and c = -log C.
  std::optional<double> C;
  std::optional<double> c;
  /// log-ratio of forward/backward rates along the gate path, minimal cells only.
  std::optional<double> delta;
  /// max over the lambda grid of |rho(lambda)/rho(lambda_c) - 1|, rho = phi+/phi-.
  double max_ratio_deviation = 0.0;
  /// max |I(theta) - I(-theta) - c theta| on a symmetric theta grid, with c
  /// the reported constant, or log(p-/p+) when the symmetry fails.
  double symmetry_residual = 0.0;
  double lambda_c = 0.0;
  PlusMinus<double> p;
  std::size_t grid_size = 0;
  double tolerance = 0.0;

  friend bool operator==(const GcReport&, const GcReport&) = default;
};

/// Proportionality test of phi+ and phi- on [lambda_c - 10(1+|lambda_c|), lambda_c].
GcReport gc_check_analytic(const CycleLaw& law, std::size_t grid_size = 200, double tol = 1e-8);

enum class GcPrediction { holds, generically_fails };
std::string_view to_string(GcPrediction p);

struct GcPredictionResult {
  GcPrediction prediction = GcPrediction::generically_fails;
  std::optional<double> delta;
};

/// Structural prediction from the cell alone. Throws
/// Error(asymmetric_support) when some edge has no reverse.
GcPredictionResult gc_predict(const Cell& cell);

enum class IndependenceMethod { automatic, kolmogorov_smirnov, permutation };
std::string_view to_string(IndependenceMethod m);

struct TestReport {
  IndependenceMethod method = IndependenceMethod::kolmogorov_smirnov;
  double statistic = 0.0;
  double p_value = 1.0;
  bool reject = false;
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
};

/// Two-sample Kolmogorov-Smirnov statistic sup |F1 - F2|.
double ks_statistic(std::span<const double> a, std::span<const double> b);
/// Asymptotic p-value of the two-sample statistic.
double ks_p_value(double statistic, std::size_t n1, std::size_t n2);

/// Tests independence of sign and duration. `automatic` uses KS for
/// continuous durations and a permutation chi-square test on the
/// (sign, duration atom) table when durations take at most 32 values.
/// Throws Error(insufficient_samples) below 100 samples of either sign.
TestReport independence_test(std::span<const CycleSample> samples, double significance,
                             IndependenceMethod method = IndependenceMethod::automatic,
                             std::uint64_t permutation_seed = 0, std::size_t permutations = 999);

/// max |I(theta) - I(-theta) - c theta| over a grid symmetric about 0.
/// Throws Error(asymmetric_grid).
double gc_symmetry_residual(const RateCurve& curve, double c);

/// Grid {-x_k} u {x_k}, x_k = k * half_width / half_points.
std::vector<double> symmetric_grid(double half_width, std::size_t half_points);

}  // namespace q1d
