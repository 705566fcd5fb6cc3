#include "copter_cpi/estimator/observer.hpp"

#include <cmath>

#include "copter_cpi/error.hpp"

namespace copter_cpi::estimator {

namespace {

constexpr double kVarianceFloor = 1e-12;

double factorial(int k) {
  double f = 1.0;
  for (int i = 2; i <= k; ++i) {
    f *= i;
  }
  return f;
}

}  // namespace

void EstimatorConfig::validate() const {
  const double values[] = {process_noise, walk_force, walk_torque, meas_noise_pos, meas_noise_att,
                           noise_scale, initial_d_std, initial_torque_std};
  for (double v : values) {
    if (!std::isfinite(v) || v < 0.0) {
      throw Error("estimator config: noise terms must be finite and non-negative");
    }
  }
}

KfModel discretize(const vehicle::LinearPlant& plant, const EstimatorConfig& config, double dt) {
  if (!(dt > 0.0)) {
    throw Error("estimator: dt must be positive");
  }
  const Eigen::Index n = plant.n();
  const Eigen::Index na = 3 * n;

  Eigen::MatrixXd f = Eigen::MatrixXd::Zero(na, na);
  f.topLeftCorner(2 * n, 2 * n) = plant.A;
  f.topRightCorner(2 * n, n) = -plant.B;
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(na, n);
  g.topRows(2 * n) = plant.B;

  // F is nilpotent (F^3 = 0), so the series for exp(F t) terminates.
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(na, na);
  const Eigen::MatrixXd f2 = f * f;
  const Eigen::MatrixXd powers[3] = {eye, f, f2};

  KfModel model;
  model.dt = dt;
  model.phi = eye + f * dt + f2 * (dt * dt / 2.0);
  model.gamma = (eye * dt + f * (dt * dt / 2.0) + f2 * (dt * dt * dt / 6.0)) * g;

  Eigen::VectorXd qc(na);
  qc.head(2 * n).setConstant(config.process_noise);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool force = plant.channels[static_cast<std::size_t>(i)] == vehicle::ChannelKind::kPosition;
    qc(2 * n + i) = force ? config.walk_force : config.walk_torque;
  }
  const Eigen::MatrixXd qcm = qc.asDiagonal();
  model.q = Eigen::MatrixXd::Zero(na, na);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const int k = i + j + 1;
      model.q += (std::pow(dt, k) / (k * factorial(i) * factorial(j))) * powers[i] * qcm *
                 powers[j].transpose();
    }
  }

  const Eigen::Index nz = config.full_state ? 2 * n : n;
  model.c = Eigen::MatrixXd::Identity(nz, na);
  Eigen::VectorXd rdiag(nz);
  for (Eigen::Index i = 0; i < nz; ++i) {
    const bool position = plant.channels[static_cast<std::size_t>(i % n)] == vehicle::ChannelKind::kPosition;
    const double sd = position ? config.meas_noise_pos : config.meas_noise_att;
    rdiag(i) = std::max(sd * sd, kVarianceFloor);
  }
  model.r = rdiag.asDiagonal();
  return model;
}

KfState initial_state(const vehicle::LinearPlant& plant, const EstimatorConfig& config, const Eigen::VectorXd& z0,
                      double t0) {
  const Eigen::Index n = plant.n();
  if (z0.size() != n && z0.size() != 2 * n) {
    throw Error("estimator: initial measurement has wrong length");
  }
  KfState s;
  s.x = Eigen::VectorXd::Zero(2 * n);
  s.x.head(z0.size()) = z0;
  s.estimate.d_hat = plant.d_nominal;
  s.estimate.timestamp = t0;

  Eigen::VectorXd p0(3 * n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const bool position = plant.channels[static_cast<std::size_t>(i)] == vehicle::ChannelKind::kPosition;
    const double sd = position ? config.meas_noise_pos : config.meas_noise_att;
    p0(i) = std::max(sd * sd, kVarianceFloor);
    p0(n + i) = std::max(10.0 * sd * sd, kVarianceFloor);
    const double d_sd = position ? config.initial_d_std : config.initial_torque_std;
    p0(2 * n + i) = std::max(d_sd * d_sd, kVarianceFloor);
  }
  s.estimate.covariance = p0.asDiagonal();
  return s;
}

KfState kf_step(const KfModel& model, const KfState& prev, const Eigen::VectorXd& u, const Eigen::VectorXd& z) {
  const Eigen::Index na = model.phi.rows();
  const Eigen::Index n = na / 3;
  if (u.size() != n || z.size() != model.c.rows() || prev.x.size() != 2 * n) {
    throw Error("estimator: dimension mismatch in kf_step");
  }
  Eigen::VectorXd xa(na);
  xa << prev.x, prev.estimate.d_hat;

  xa = model.phi * xa + model.gamma * u;
  Eigen::MatrixXd p = model.phi * prev.estimate.covariance * model.phi.transpose() + model.q;

  const Eigen::MatrixXd s = model.c * p * model.c.transpose() + model.r;
  const Eigen::MatrixXd k = s.ldlt().solve(model.c * p).transpose();
  xa += k * (z - model.c * xa);
  const Eigen::MatrixXd ikc = Eigen::MatrixXd::Identity(na, na) - k * model.c;
  p = ikc * p * ikc.transpose() + k * model.r * k.transpose();
  p = 0.5 * (p + p.transpose());

  const double min_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(p, Eigen::EigenvaluesOnly).eigenvalues()(0);
  if (!p.allFinite() || min_eig < -1e-8 * std::max(p.trace(), 1.0)) {
    throw Error("estimator: covariance lost positive semidefiniteness");
  }

  KfState next;
  next.x = xa.head(2 * n);
  next.estimate.d_hat = xa.tail(n);
  next.estimate.covariance = std::move(p);
  next.estimate.timestamp = prev.estimate.timestamp + model.dt;
  return next;
}

KfState kf_step(const vehicle::LinearPlant& plant, const KfState& prev, const Eigen::VectorXd& u,
                const Eigen::VectorXd& z, const EstimatorConfig& config, double dt) {
  return kf_step(discretize(plant, config, dt), prev, u, z);
}

DisturbanceObserver::DisturbanceObserver(const vehicle::LinearPlant& plant, const EstimatorConfig& config, double dt)
    : plant_(plant), config_(config), model_(discretize(plant, config, dt)) {
  config_.validate();
}

void DisturbanceObserver::reset(const Eigen::VectorXd& z0, double t0) {
  state_ = initial_state(plant_, config_, z0, t0);
  initialized_ = true;
}

const DisturbanceEstimate& DisturbanceObserver::step(const Eigen::VectorXd& u, const Eigen::VectorXd& z, double t) {
  if (!initialized_) {
    reset(z, t - model_.dt);
  }
  state_ = kf_step(model_, state_, u, z);
  state_.estimate.timestamp = t;
  return state_.estimate;
}

}  // namespace copter_cpi::estimator
