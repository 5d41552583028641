#pragma once

#include "q1d/cycle_law.hpp"
#include "q1d/rng.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace q1d {

inline constexpr std::uint64_t default_step_cap = 1000000000ULL;

struct CycleSample {
  int sign = +1;
  double duration = 0.0;
};

/// Draws cycles from a law. Tables (alias table, lattice moves) are built
/// once; sampling only mutates the caller's rng.
class CycleSampler {
 public:
  explicit CycleSampler(CycleLaw law, std::uint64_t step_cap = default_step_cap);

  CycleSample operator()(Rng& rng) const;
  const CycleLaw& law() const { return law_; }

 private:
  CycleSample sample_graph(Rng& rng) const;
  CycleSample sample_discrete(Rng& rng) const;

  CycleLaw law_;
  std::uint64_t step_cap_;
  // Discrete laws with more than 16 atoms use an alias table.
  std::vector<double> alias_prob_;
  std::vector<std::size_t> alias_index_;
  std::vector<double> cumulative_;
};

CycleSample sample_cycle(const CycleLaw& law, Rng& rng);

struct TrajectoryPoint {
  double time = 0.0;
  LatticeVertex at;
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;
  double horizon = 0.0;
  int gate_vertex = 0;  // cell index of the source; its lattice copies are the gates
};

/// Exact continuous-time path from gate 0 up to t_max.
Trajectory simulate_trajectory(const Cell& cell, double t_max, Rng& rng,
                               std::uint64_t step_cap = default_step_cap);

struct SkeletonPoint {
  double time = 0.0;
  std::int64_t position = 0;
};
using SkeletonPath = std::vector<SkeletonPoint>;

/// Gate crossings of a trajectory: the last visited gate as an integer.
SkeletonPath skeleton(const Trajectory& traj);

struct HittingResult {
  std::optional<double> time;  // nullopt: censored at t_cap
  bool censored() const { return !time.has_value(); }
};

HittingResult sample_hitting_time(const CycleSampler& sampler, std::int64_t level, Rng& rng, double t_cap);
HittingResult sample_hitting_time(const CycleLaw& law, std::int64_t level, Rng& rng, double t_cap);

/// Partial sums W_m, T_m of i.i.d. cycles, and Z_t = W_{nu(t)}.
class CumulativeTrajectory {
 public:
  CumulativeTrajectory(std::vector<std::int64_t> positions, std::vector<double> times);

  const std::vector<std::int64_t>& positions() const { return positions_; }
  const std::vector<double>& times() const { return times_; }
  double horizon() const { return times_.back(); }
  /// Throws Error(out_of_horizon) for t beyond the last renewal time or t < 0.
  std::int64_t at(double t) const;

 private:
  std::vector<std::int64_t> positions_;
  std::vector<double> times_;
};

CumulativeTrajectory sample_cumulative(const CycleLaw& law, std::size_t n_cycles, Rng& rng);

/// Z_t for a single fresh path, composing cycles until time t is passed.
std::int64_t sample_position(const CycleSampler& sampler, double t, Rng& rng);

}  // namespace q1d
