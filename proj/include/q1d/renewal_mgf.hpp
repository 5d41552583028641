#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/ext_real.hpp"

#include <optional>

namespace q1d {

/// Moment generating functions of the first return to {gate -1, gate 0,
/// gate +1} after leaving gate 0, split by the gate hit.
struct TildeF {
  ExtReal minus;
  ExtReal zero;
  ExtReal plus;
};

/// Interior linear-solve route. Throws Error(singular_system) when the solve
/// is ill-conditioned below the finiteness bound.
TildeF tilde_f(const GraphLaw& law, double lambda);
TildeF tilde_f(const Cell& cell, double lambda);

enum class PathDirection { forward, backward };

/// Truncated path-sum series for f~+ (forward: source -> sink through the
/// interior) or f~- (backward: sink -> source). Only defined deep in the
/// negative half-line, lambda < -(3 max r + 1); throws Error(domain_error)
/// otherwise.
double tilde_f_pathsum(const Cell& cell, double lambda, int max_len,
                       PathDirection direction = PathDirection::forward);

/// Upper bound on the series tail beyond max_len.
double pathsum_tail_bound(const Cell& cell, double lambda, int max_len);
/// Smallest truncation whose tail bound is below abs_tol.
int pathsum_length_for(const Cell& cell, double lambda, double abs_tol);

/// (f-, f+): E(e^{lambda tau} 1(w = -+1)).
PlusMinus<ExtReal> f_pm(const CycleLaw& law, double lambda);

/// f values and lambda-derivatives (derivatives are meaningful where the
/// values are finite).
struct MgfJet {
  PlusMinus<ExtReal> value;
  PlusMinus<double> slope;
};
MgfJet f_jet(const CycleLaw& law, double lambda);

/// Unique root of 4 f+ f- = 1 on [0, inf). +inf for one-sided laws.
double lambda_c(const CycleLaw& law);

/// (phi-, phi+): MGFs of the one-step first-passage times on {T < inf}.
PlusMinus<ExtReal> phi_pm(const CycleLaw& law, double lambda);
PlusMinus<ExtReal> phi_pm(const CycleLaw& law, double lambda, double lambda_c);

/// Minimum of the support of tau on {w = -+1}.
PlusMinus<double> alpha_pm(const CycleLaw& law);

/// (P(w=-1), P(w=+1)).
PlusMinus<double> sign_probabilities(const CycleLaw& law);

double mean_duration(const CycleLaw& law);
double velocity(const CycleLaw& law);

struct MgfSummary {
  double lambda_c = 0.0;
  PlusMinus<double> alpha;
  PlusMinus<double> p;
  double mean_duration = 0.0;
  double velocity = 0.0;
  std::optional<ExtReal> lambda_interior;  // graph laws only
};

MgfSummary mgf_summary(const CycleLaw& law, bool allow_one_sided = false);

/// A law together with its summary, so repeated evaluations below the
/// critical tilt do not redo the root search.
class RenewalModel {
 public:
  explicit RenewalModel(CycleLaw law, bool allow_one_sided = false);

  const CycleLaw& law() const { return law_; }
  const MgfSummary& summary() const { return summary_; }
  double lambda_c() const { return summary_.lambda_c; }

  PlusMinus<ExtReal> f(double lambda) const { return f_pm(law_, lambda); }
  PlusMinus<ExtReal> phi(double lambda) const { return phi_pm(law_, lambda, summary_.lambda_c); }

  /// log phi_sign and its derivative for lambda < lambda_c. The slope is
  /// +inf at lambda_c.
  double log_phi(Sign sign, double lambda) const;
  double log_phi_slope(Sign sign, double lambda) const;

  /// P(tau = alpha_sign, w = sign), which equals P(T_sign = alpha_sign).
  double boundary_atom(Sign sign) const;

 private:
  CycleLaw law_;
  MgfSummary summary_;
};

}  // namespace q1d
