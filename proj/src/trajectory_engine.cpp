#include "bohmsim/trajectory_engine.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace bohmsim {

Eigen::Vector2d Trajectory::position_at(double t) const {
  if (points.empty()) return Eigen::Vector2d::Zero();
  if (t <= points.front().t) return points.front().q;
  if (t >= points.back().t) return points.back().q;
  auto hi = std::lower_bound(points.begin(), points.end(), t,
                             [](const TrajectoryPoint &p, double tt) { return p.t < tt; });
  auto lo = hi - 1;
  const double span = hi->t - lo->t;
  if (span <= 0.0) return lo->q;
  const double w = (t - lo->t) / span;
  return lo->q + w * (hi->q - lo->q);
}

namespace {

struct Deriv {
  Eigen::Vector2d qdot = Eigen::Vector2d::Zero();
  double tdot = 1.0;
  bool degenerate = false;
  double speed = 0.0;
};

Deriv derivative(const VelocityField &field, const Eigen::Vector2d &q, double t) {
  Deriv d;
  const double s = field.time_dilation(q);
  const FieldSample sample = field.eval(q, t);
  d.qdot = sample.v * s;
  d.tdot = s;
  d.degenerate = sample.quality == Quality::degenerate;
  d.speed = sample.v.norm();
  return d;
}

struct StepResult {
  Eigen::Vector2d q;
  double t;
  bool degenerate = false;
  double min_speed = 0.0;
};

StepResult take_step(const VelocityField &field, const Eigen::Vector2d &q, double t,
                     double dtau, Method method) {
  StepResult out;
  if (method == Method::rk2) {
    const Deriv k1 = derivative(field, q, t);
    const Deriv k2 = derivative(field, q + 0.5 * dtau * k1.qdot, t + 0.5 * dtau * k1.tdot);
    out.q = q + dtau * k2.qdot;
    out.t = t + dtau * k2.tdot;
    out.degenerate = k1.degenerate || k2.degenerate;
    out.min_speed = std::min(k1.speed, k2.speed);
    return out;
  }
  const Deriv k1 = derivative(field, q, t);
  const Deriv k2 = derivative(field, q + 0.5 * dtau * k1.qdot, t + 0.5 * dtau * k1.tdot);
  const Deriv k3 = derivative(field, q + 0.5 * dtau * k2.qdot, t + 0.5 * dtau * k2.tdot);
  const Deriv k4 = derivative(field, q + dtau * k3.qdot, t + dtau * k3.tdot);
  out.q = q + (dtau / 6.0) * (k1.qdot + 2.0 * k2.qdot + 2.0 * k3.qdot + k4.qdot);
  out.t = t + (dtau / 6.0) * (k1.tdot + 2.0 * k2.tdot + 2.0 * k3.tdot + k4.tdot);
  out.degenerate = k1.degenerate || k2.degenerate || k3.degenerate || k4.degenerate;
  out.min_speed = std::min(std::min(k1.speed, k2.speed), std::min(k3.speed, k4.speed));
  return out;
}

bool inside(const Eigen::Vector2d &q, const IntegratorConfig &icfg, int dim) {
  for (int i = 0; i < dim; ++i) {
    if (q[i] < icfg.domain_lo[i] || q[i] > icfg.domain_hi[i]) return false;
  }
  return true;
}

}  // namespace

Trajectory integrate(const VelocityField &field, const Eigen::Vector2d &start, double t0,
                     const IntegratorConfig &icfg) {
  if (!(icfg.dt > 0.0) || icfg.max_steps <= 0)
    throw std::invalid_argument("integrator requires dt > 0 and max_steps > 0");

  const FieldSample first = field.eval(start, t0);
  if (first.quality == Quality::degenerate) {
    std::ostringstream msg;
    msg << "starting point (" << start[0] << ", " << start[1]
        << ") sits in a degenerate-density region (density " << first.density << ")";
    throw std::invalid_argument(msg.str());
  }

  Trajectory traj;
  traj.points.push_back({t0, start});

  Eigen::Vector2d q = start;
  double t = t0;
  const int dim = field.dimension();

  auto record = [&](double tt, const Eigen::Vector2d &qq, long step) {
    if (icfg.record_stride > 0 && step % icfg.record_stride == 0)
      traj.points.push_back({tt, qq});
  };
  auto finish = [&](double tt, const Eigen::Vector2d &qq, TerminalStatus st) {
    if (traj.points.back().t != tt || traj.points.back().q != qq)
      traj.points.push_back({tt, qq});
    traj.status = st;
  };

  for (long step = 1; step <= icfg.max_steps; ++step) {
    double dtau = icfg.dt;
    StepResult res = take_step(field, q, t, dtau, icfg.method);
    int shrinks = 0;
    while (res.degenerate && shrinks < icfg.max_node_shrinks) {
      dtau *= icfg.node_slowdown;
      res = take_step(field, q, t, dtau, icfg.method);
      ++shrinks;
    }
    if (res.degenerate && res.min_speed < 1e-9) {
      traj.degenerate_seen = true;
      finish(t, q, TerminalStatus::stalled_at_node);
      traj.steps_taken = step - 1;
      return traj;
    }
    traj.degenerate_seen = traj.degenerate_seen || res.degenerate;

    if (icfg.stop_x && ((q[0] - *icfg.stop_x) * (res.q[0] - *icfg.stop_x) <= 0.0) &&
        res.q[0] != q[0]) {
      const double w = (*icfg.stop_x - q[0]) / (res.q[0] - q[0]);
      Eigen::Vector2d qc = q + w * (res.q - q);
      qc[0] = *icfg.stop_x;
      finish(t + w * (res.t - t), qc, TerminalStatus::reached_line);
      traj.steps_taken = step;
      return traj;
    }
    if (icfg.stop_time && res.t >= *icfg.stop_time) {
      const double w = (*icfg.stop_time - t) / (res.t - t);
      finish(*icfg.stop_time, q + w * (res.q - q), TerminalStatus::reached_line);
      traj.steps_taken = step;
      return traj;
    }
    if (!inside(res.q, icfg, dim)) {
      finish(res.t, res.q, TerminalStatus::left_domain);
      traj.steps_taken = step;
      return traj;
    }

    q = res.q;
    t = res.t;
    record(t, q, step);
  }

  finish(t, q, TerminalStatus::max_steps);
  traj.steps_taken = icfg.max_steps;
  return traj;
}

std::vector<Trajectory> integrate_ensemble(const VelocityField &field,
                                           const std::vector<Eigen::Vector2d> &starts,
                                           double t0, const IntegratorConfig &icfg,
                                           int workers) {
  if (starts.empty()) throw std::invalid_argument("ensemble requires at least one start");

  std::vector<Trajectory> out(starts.size());
  int n_workers = workers > 0 ? workers
                              : static_cast<int>(std::thread::hardware_concurrency());
  n_workers = std::clamp<int>(n_workers, 1, static_cast<int>(starts.size()));

  auto run_slice = [&](int w) {
    for (std::size_t i = w; i < starts.size(); i += n_workers) {
      try {
        out[i] = integrate(field, starts[i], t0, icfg);
      } catch (const std::exception &e) {
        out[i].status = TerminalStatus::stalled_at_node;
        out[i].error = e.what();
        out[i].points = {{t0, starts[i]}};
      }
      out[i].initial_index = static_cast<int>(i);
    }
  };

  if (n_workers == 1) {
    run_slice(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(run_slice, w);
    for (auto &th : pool) th.join();
  }
  return out;
}

}  // namespace bohmsim
