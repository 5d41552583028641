#pragma once

#include "q1d/ext_real.hpp"
#include "q1d/renewal_mgf.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace q1d {

enum class CurveKind { j_plus, j_minus, position };
enum class Route { renewal, spectral };

struct RateCurve {
  std::vector<double> grid;
  std::vector<ExtReal> values;
  CurveKind kind = CurveKind::position;
  Route route = Route::renewal;
  std::string law;
};

/// The unique lambda < lambda_c where (log phi_sign)' equals u. Throws
/// Error(domain_error) when u <= alpha_sign (or u is out of reach for a
/// one-sided law).
double tilde_lambda(const RenewalModel& model, Sign sign, double u);
double tilde_lambda(const CycleLaw& law, Sign sign, double u);

/// Rate function of T_n/|n| as n -> +-inf: sup_lambda {lambda u - log phi(lambda)}.
ExtReal first_passage_rate(const RenewalModel& model, Sign sign, double u);
ExtReal first_passage_rate(const CycleLaw& law, Sign sign, double u);

/// Rate function of Z_t/t, built from the first-passage rates.
ExtReal position_rate(const RenewalModel& model, double theta);
ExtReal position_rate(const CycleLaw& law, double theta);

RateCurve rate_curve(const RenewalModel& model, CurveKind kind, std::span<const double> grid);
RateCurve rate_curve(const CycleLaw& law, CurveKind kind, std::span<const double> grid);

enum class BoundaryBehavior { diverges, finite_limit };

struct QualSummary {
  double velocity = 0.0;
  double lambda_c = 0.0;
  PlusMinus<double> alpha;
  /// Minimisers of J-+; +inf when lambda_c = 0 (J strictly decreasing).
  PlusMinus<ExtReal> theta_c;
  /// Domain of finiteness of the position rate: [-1/alpha_-, 1/alpha_+].
  double left_endpoint = 0.0;
  double right_endpoint = 0.0;
  PlusMinus<BoundaryBehavior> boundary;
  /// Finite boundary values where boundary == finite_limit.
  PlusMinus<std::optional<double>> boundary_value;
};

QualSummary qualitative_summary(const RenewalModel& model);
QualSummary qualitative_summary(const CycleLaw& law);

std::vector<double> linear_grid(double from, double to, std::size_t points);

}  // namespace q1d
