#include "q1d/simulate.hpp"

#include "q1d/detail/overloaded.hpp"
#include "q1d/errors.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace q1d {

using detail::overloaded;

namespace {

double uniform01(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

double exponential(Rng& rng, double rate) { return std::exponential_distribution<double>(rate)(rng); }

const CellMove& pick_move(std::span<const CellMove> moves, double total, Rng& rng) {
  double u = uniform01(rng) * total;
  for (const auto& m : moves) {
    if (u < m.rate) return m;
    u -= m.rate;
  }
  return moves.back();
}

[[noreturn]] void runaway(std::uint64_t cap) {
  throw Error(ErrorCode::runaway_simulation, "simulation exceeded the step cap of " + std::to_string(cap));
}

}  // namespace

CycleSampler::CycleSampler(CycleLaw law, std::uint64_t step_cap) : law_(std::move(law)), step_cap_(step_cap) {
  const auto* d = std::get_if<DiscreteLaw>(&law_);
  if (!d) return;
  const std::size_t n = d->atoms.size();
  if (n <= 16) {
    cumulative_.resize(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) cumulative_[i] = (acc += d->atoms[i].probability);
    return;
  }
  // Vose alias table.
  alias_prob_.assign(n, 0.0);
  alias_index_.assign(n, 0);
  std::vector<double> scaled(n);
  std::vector<std::size_t> small, large;
  for (std::size_t i = 0; i < n; ++i) {
    scaled[i] = d->atoms[i].probability * static_cast<double>(n);
    (scaled[i] < 1.0 ? small : large).push_back(i);
  }
  while (!small.empty() && !large.empty()) {
    const std::size_t s = small.back(), l = large.back();
    small.pop_back();
    large.pop_back();
    alias_prob_[s] = scaled[s];
    alias_index_[s] = l;
    scaled[l] = scaled[l] + scaled[s] - 1.0;
    (scaled[l] < 1.0 ? small : large).push_back(l);
  }
  for (std::size_t i : large) alias_prob_[i] = 1.0;
  for (std::size_t i : small) alias_prob_[i] = 1.0;
}

CycleSample CycleSampler::operator()(Rng& rng) const {
  return std::visit(overloaded{
                        [&](const GraphLaw&) { return sample_graph(rng); },
                        [&](const DiscreteLaw&) { return sample_discrete(rng); },
                        [&](const ExponentialLaw& e) {
                          const bool up = uniform01(rng) < e.p;
                          return CycleSample{up ? +1 : -1, exponential(rng, up ? e.beta_plus : e.beta_minus)};
                        },
                        [&](const GammaLaw& g) {
                          const bool up = uniform01(rng) < g.p;
                          const double k = up ? g.k_plus : g.k_minus;
                          const double beta = up ? g.beta_plus : g.beta_minus;
                          return CycleSample{up ? +1 : -1, std::gamma_distribution<double>(k, 1.0 / beta)(rng)};
                        },
                    },
                    law_);
}

CycleSample CycleSampler::sample_graph(Rng& rng) const {
  const Cell& cell = *std::get<GraphLaw>(law_).cell;
  int v = cell.source();
  std::int64_t n = 0;
  double t = 0.0;
  for (std::uint64_t step = 0; step < step_cap_; ++step) {
    const double rate = cell.exit_rate(v);
    t += exponential(rng, rate);
    const CellMove& m = pick_move(cell.moves(v), rate, rng);
    v = m.to;
    n += m.cell_offset;
    if (v == cell.source() && n != 0) return {n > 0 ? +1 : -1, t};
  }
  runaway(step_cap_);
}

CycleSample CycleSampler::sample_discrete(Rng& rng) const {
  const auto& atoms = std::get<DiscreteLaw>(law_).atoms;
  std::size_t k = 0;
  if (!cumulative_.empty()) {
    const double u = uniform01(rng) * cumulative_.back();
    k = static_cast<std::size_t>(std::upper_bound(cumulative_.begin(), cumulative_.end(), u) - cumulative_.begin());
    k = std::min(k, atoms.size() - 1);
  } else {
    const double u = uniform01(rng) * static_cast<double>(atoms.size());
    const auto i = std::min(static_cast<std::size_t>(u), atoms.size() - 1);
    k = (u - static_cast<double>(i) < alias_prob_[i]) ? i : alias_index_[i];
  }
  return {atoms[k].sign, atoms[k].duration};
}

CycleSample sample_cycle(const CycleLaw& law, Rng& rng) { return CycleSampler(law)(rng); }

Trajectory simulate_trajectory(const Cell& cell, double t_max, Rng& rng, std::uint64_t step_cap) {
  if (!(t_max >= 0.0)) throw Error(ErrorCode::invalid_input, "simulate_trajectory: t_max must be >= 0");
  Trajectory traj;
  traj.horizon = t_max;
  traj.gate_vertex = cell.source();
  LatticeVertex x{0, cell.source()};
  traj.points.push_back({0.0, x});
  double t = 0.0;
  for (std::uint64_t step = 0;; ++step) {
    if (step >= step_cap) runaway(step_cap);
    const double rate = cell.exit_rate(x.vertex);
    t += exponential(rng, rate);
    if (t > t_max) break;
    const CellMove& m = pick_move(cell.moves(x.vertex), rate, rng);
    x = {x.cell + m.cell_offset, m.to};
    traj.points.push_back({t, x});
  }
  return traj;
}

SkeletonPath skeleton(const Trajectory& traj) {
  SkeletonPath out;
  if (traj.points.empty()) return out;
  out.push_back({0.0, traj.points.front().at.cell});
  for (std::size_t i = 1; i < traj.points.size(); ++i) {
    const auto& p = traj.points[i];
    if (p.at.vertex != traj.gate_vertex || p.at.cell == out.back().position) continue;
    out.push_back({p.time, p.at.cell});
  }
  return out;
}

HittingResult sample_hitting_time(const CycleSampler& sampler, std::int64_t level, Rng& rng, double t_cap) {
  if (level == 0) throw Error(ErrorCode::invalid_input, "sample_hitting_time: level must be nonzero");
  if (!(t_cap > 0.0)) throw Error(ErrorCode::invalid_input, "sample_hitting_time: t_cap must be positive");
  std::int64_t pos = 0;
  double t = 0.0;
  for (;;) {
    const CycleSample c = sampler(rng);
    t += c.duration;
    if (t > t_cap) return {};
    pos += c.sign;
    if (pos == level) return {t};
  }
}

HittingResult sample_hitting_time(const CycleLaw& law, std::int64_t level, Rng& rng, double t_cap) {
  return sample_hitting_time(CycleSampler(law), level, rng, t_cap);
}

CumulativeTrajectory::CumulativeTrajectory(std::vector<std::int64_t> positions, std::vector<double> times)
    : positions_(std::move(positions)), times_(std::move(times)) {
  if (positions_.empty() || positions_.size() != times_.size())
    throw Error(ErrorCode::invalid_input, "CumulativeTrajectory: mismatched or empty partial sums");
}

std::int64_t CumulativeTrajectory::at(double t) const {
  if (!(t >= 0.0) || t > horizon())
    throw Error(ErrorCode::out_of_horizon, "CumulativeTrajectory::at: query time outside [0, horizon]");
  const auto it = std::upper_bound(times_.begin(), times_.end(), t);
  return positions_[static_cast<std::size_t>(it - times_.begin()) - 1];
}

CumulativeTrajectory sample_cumulative(const CycleLaw& law, std::size_t n_cycles, Rng& rng) {
  if (n_cycles < 1) throw Error(ErrorCode::invalid_input, "sample_cumulative: n_cycles must be >= 1");
  const CycleSampler sampler(law);
  std::vector<std::int64_t> w{0};
  std::vector<double> times{0.0};
  w.reserve(n_cycles + 1);
  times.reserve(n_cycles + 1);
  for (std::size_t i = 0; i < n_cycles; ++i) {
    const CycleSample c = sampler(rng);
    w.push_back(w.back() + c.sign);
    times.push_back(times.back() + c.duration);
  }
  return {std::move(w), std::move(times)};
}

std::int64_t sample_position(const CycleSampler& sampler, double t, Rng& rng) {
  std::int64_t pos = 0;
  double clock = 0.0;
  for (;;) {
    const CycleSample c = sampler(rng);
    if (clock + c.duration > t) return pos;
    clock += c.duration;
    pos += c.sign;
  }
}

}  // namespace q1d
