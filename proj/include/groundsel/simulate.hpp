#pragma once

#include <vector>

#include <Eigen/Dense>

#include "groundsel/linalg.hpp"

namespace groundsel {

/// Sampled solution of dx/dt = -L(kept) x with removed (input) nodes pinned at 0.
struct Trajectory {
  std::vector<double> times;
  Eigen::MatrixXd states;  // one row per time, one column per kept index
  std::vector<int> kept;
  double lambda_min_used = 0.0;
};

/// Exact propagation x(t) = U exp(-Lambda t) U^T x0 sampled at 0, dt, 2 dt, ...
Trajectory consensus_trajectory(const SymMatrix& l, const IndexSet& removed, const Eigen::VectorXd& x0,
                                double horizon, double dt);

struct RateCheck {
  bool holds = true;
  double max_violation = 0.0;  // largest relative excess over the envelope
};

/// ||x(t)|| <= e^{-lambda_min t} ||x(0)|| at every sample, relative tolerance `rel_tol`.
RateCheck verify_rate(const Trajectory& traj, double rel_tol = 1e-8);

}  // namespace groundsel
