#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bohmsim/bohm_velocity.hpp"

namespace bohmsim {

enum class Method { rk4, rk2 };

enum class TerminalStatus { reached_line, max_steps, left_domain, stalled_at_node };

struct IntegratorConfig {
  double dt = 1e-3;  // base step; pseudo-time when the field dilates
  Method method = Method::rk4;
  int max_steps = 20000;
  std::optional<double> stop_x;     // detection line on the first coordinate
  std::optional<double> stop_time;  // terminal time for time-driven runs
  double node_slowdown = 0.25;      // per-retry step reduction at degenerate stages
  int max_node_shrinks = 16;
  Eigen::Vector2d domain_lo = Eigen::Vector2d(-1e30, -1e30);
  Eigen::Vector2d domain_hi = Eigen::Vector2d(1e30, 1e30);
  int record_stride = 1;  // 0 keeps only the endpoints
};

struct TrajectoryPoint {
  double t = 0.0;
  Eigen::Vector2d q = Eigen::Vector2d::Zero();
};

struct Trajectory {
  std::vector<TrajectoryPoint> points;  // start and terminal point always present
  TerminalStatus status = TerminalStatus::max_steps;
  int initial_index = 0;
  long steps_taken = 0;
  bool degenerate_seen = false;
  std::string error;  // nonempty when this member of an ensemble failed

  const TrajectoryPoint &back() const { return points.back(); }
  /// Linear interpolation between recorded points, clamped to the ends.
  Eigen::Vector2d position_at(double t) const;
};

/// Integrates dq/dtau = v(q, t) * s(q), dt/dtau = s(q) with the fixed-step
/// scheme from the config. Detection-line and stop-time crossings are
/// resolved by linear interpolation inside the bracketing step. Stages that
/// report a degenerate density shrink the step by node_slowdown; a step that
/// stays degenerate at negligible speed ends the trajectory as
/// stalled_at_node. A degenerate starting point is rejected.
Trajectory integrate(const VelocityField &field, const Eigen::Vector2d &start, double t0,
                     const IntegratorConfig &icfg);

/// Independent members, output order equal to input order, bitwise
/// deterministic for any worker count. workers = 0 picks the hardware count.
/// Per-member failures are captured in Trajectory::error.
std::vector<Trajectory> integrate_ensemble(const VelocityField &field,
                                           const std::vector<Eigen::Vector2d> &starts,
                                           double t0, const IntegratorConfig &icfg,
                                           int workers = 0);

}  // namespace bohmsim
