#include "q1d/cycle_law.hpp"

#include "q1d/errors.hpp"
#include "q1d/detail/overloaded.hpp"
#include "q1d/linalg.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace q1d {

using detail::overloaded;

namespace {

void require(bool ok, const std::string& msg) {
  if (!ok) throw Error(ErrorCode::invalid_input, msg);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

GraphLaw make_graph_law(Cell cell, std::string graph_file) {
  GraphLaw law;
  std::vector<int> interior;
  for (int v = 0; v < cell.size(); ++v)
    if (v != cell.source() && v != cell.sink()) interior.push_back(v);
  const auto m = static_cast<Eigen::Index>(interior.size());
  if (m == 0) {
    law.interior_bound = std::numeric_limits<double>::infinity();
  } else {
    // Sub-generator of one cell's interior (the cells on both sides of a
    // gate are copies, so one copy determines the bound).
    Eigen::MatrixXd q = Eigen::MatrixXd::Zero(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      q(i, i) = -cell.exit_rate(interior[static_cast<std::size_t>(i)]);
      for (Eigen::Index j = 0; j < m; ++j)
        if (i != j) q(i, j) = cell.rate(interior[static_cast<std::size_t>(i)], interior[static_cast<std::size_t>(j)]);
    }
    law.interior_bound = -metzler_abscissa(q);
  }
  law.cell = std::make_shared<const Cell>(std::move(cell));
  law.graph_file = std::move(graph_file);
  return law;
}

void validate_law(const CycleLaw& law, bool allow_one_sided) {
  std::visit(overloaded{
                 [](const GraphLaw& g) { require(g.cell != nullptr, "graph law without a cell"); },
                 [&](const DiscreteLaw& d) {
                   require(!d.atoms.empty(), "discrete law has no atoms");
                   double total = 0.0, plus = 0.0, minus = 0.0;
                   for (const auto& a : d.atoms) {
                     require(a.sign == 1 || a.sign == -1, "atom sign must be +1 or -1");
                     require(positive_finite(a.duration), "atom duration must be positive");
                     require(std::isfinite(a.probability) && a.probability >= 0.0, "atom probability must be >= 0");
                     total += a.probability;
                     (a.sign > 0 ? plus : minus) += a.probability;
                   }
                   require(std::abs(total - 1.0) <= 1e-12, "atom probabilities must sum to 1");
                   if (!allow_one_sided) require(plus > 0.0 && minus > 0.0, "both signs must carry positive mass");
                 },
                 [](const ExponentialLaw& e) {
                   require(e.p > 0.0 && e.p < 1.0, "p must lie in (0,1)");
                   require(positive_finite(e.beta_plus) && positive_finite(e.beta_minus), "rates must be positive");
                 },
                 [](const GammaLaw& g) {
                   require(g.p > 0.0 && g.p < 1.0, "p must lie in (0,1)");
                   require(positive_finite(g.k_plus) && positive_finite(g.k_minus), "shapes must be positive");
                   require(positive_finite(g.beta_plus) && positive_finite(g.beta_minus), "rates must be positive");
                 },
             },
             law);
}

std::string describe(const CycleLaw& law) {
  std::ostringstream os;
  std::visit(overloaded{
                 [&](const GraphLaw& g) {
                   os << "graph(" << g.cell->size() << " vertices";
                   if (!g.graph_file.empty()) os << ", " << g.graph_file;
                   os << ")";
                 },
                 [&](const DiscreteLaw& d) {
                   os << "discrete[";
                   for (std::size_t i = 0; i < d.atoms.size(); ++i)
                     os << (i ? "," : "") << "(" << d.atoms[i].sign << "," << d.atoms[i].duration << ","
                        << d.atoms[i].probability << ")";
                   os << "]";
                 },
                 [&](const ExponentialLaw& e) {
                   os << "exponential(p=" << e.p << ",beta+=" << e.beta_plus << ",beta-=" << e.beta_minus << ")";
                 },
                 [&](const GammaLaw& g) {
                   os << "gamma(p=" << g.p << ",k+=" << g.k_plus << ",beta+=" << g.beta_plus << ",k-=" << g.k_minus
                      << ",beta-=" << g.beta_minus << ")";
                 },
             },
             law);
  return os.str();
}

}  // namespace q1d
