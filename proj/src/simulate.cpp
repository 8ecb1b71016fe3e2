#include "groundsel/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace groundsel {

Trajectory consensus_trajectory(const SymMatrix& l, const IndexSet& removed, const Eigen::VectorXd& x0,
                                double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("consensus_trajectory: dt must be > 0");
  if (!(horizon >= dt)) throw std::invalid_argument("consensus_trajectory: horizon must be >= dt");
  const IndexSet kept = removed.complement();
  if (kept.empty()) throw std::invalid_argument("consensus_trajectory: no kept nodes");
  if (x0.size() != static_cast<Eigen::Index>(kept.size()))
    throw std::invalid_argument("consensus_trajectory: x0 has " + std::to_string(x0.size()) +
                                " entries, expected " + std::to_string(kept.size()));

  const Spectrum s = eig_sym(submatrix(l, kept));
  const Eigen::VectorXd coeffs = s.basis.transpose() * x0;

  Trajectory t;
  t.kept = kept.members();
  t.lambda_min_used = s.min();
  const auto steps = static_cast<long>(std::floor(horizon / dt + 1e-9));
  t.times.reserve(static_cast<std::size_t>(steps + 1));
  t.states.resize(steps + 1, x0.size());
  for (long k = 0; k <= steps; ++k) {
    const double time = static_cast<double>(k) * dt;
    t.times.push_back(time);
    const Eigen::VectorXd decay = (-s.eigenvalues.array() * time).exp();
    t.states.row(k) = (s.basis * decay.cwiseProduct(coeffs)).transpose();
  }
  t.states.row(0) = x0.transpose();
  return t;
}

RateCheck verify_rate(const Trajectory& traj, double rel_tol) {
  RateCheck out;
  if (traj.times.empty()) return out;
  const double norm0 = traj.states.row(0).norm();
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const double envelope = std::exp(-traj.lambda_min_used * traj.times[k]) * norm0;
    const double norm = traj.states.row(static_cast<Eigen::Index>(k)).norm();
    const double scale = std::max(envelope, 1e-300);
    const double excess = (norm - envelope) / scale;
    if (excess > out.max_violation) out.max_violation = excess;
  }
  out.holds = out.max_violation <= rel_tol;
  return out;
}

}  // namespace groundsel
