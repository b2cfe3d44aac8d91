#include "coke/arm_model.hpp"

#include <cmath>
#include <string>

namespace coke {

ArmModel::ArmModel(ArmSpec spec, std::size_t dim, double sigma)
    : spec_(std::move(spec)),
      sigma_(sigma),
      gram_(Eigen::MatrixXd::Identity(dim, dim) * sigma),
      response_(Eigen::VectorXd::Zero(dim)),
      mu_(Eigen::VectorXd::Zero(dim)) {
  if (dim == 0) throw DimensionError("arm model dimension must be positive");
  if (!(sigma > 0.0 && std::isfinite(sigma)))
    throw std::invalid_argument("arm '" + spec_.arm_id + "': sigma must be finite and > 0");
  chol_.compute(gram_);
}

ArmModel ArmModel::restore(ArmSpec spec, double sigma, Eigen::MatrixXd gram,
                           Eigen::VectorXd response, std::uint64_t pulls) {
  const auto dim = static_cast<std::size_t>(response.size());
  if (gram.rows() != response.size() || gram.cols() != response.size())
    throw DimensionError("arm '" + spec.arm_id + "': checkpoint gram/response shape mismatch");
  ArmModel m(std::move(spec), dim, sigma);
  m.gram_ = std::move(gram);
  m.response_ = std::move(response);
  m.pulls_ = pulls;
  m.refactor();
  return m;
}

void ArmModel::check_dim(const Eigen::VectorXd& q) const {
  if (q.size() != response_.size())
    throw DimensionError("arm '" + spec_.arm_id + "': context has dimension " +
                         std::to_string(q.size()) + ", model expects " +
                         std::to_string(response_.size()));
}

double ArmModel::width_term(const Eigen::VectorXd& q) const {
  check_dim(q);
  const Eigen::VectorXd y = chol_.matrixL().solve(q);
  return y.norm();
}

ArmScore ArmModel::score(const Eigen::VectorXd& q, double gamma) const {
  check_dim(q);
  return ArmScore{q.dot(mu_), gamma * width_term(q)};
}

Interval ArmModel::confidence_interval(const Eigen::VectorXd& q, double gamma) const {
  const ArmScore s = score(q, gamma);
  return Interval{s.exploit - s.explore, s.exploit + s.explore};
}

void ArmModel::update(const Eigen::VectorXd& q, double reward) {
  check_dim(q);
  gram_.noalias() += q * q.transpose();
  response_ += reward * q;
  chol_.rankUpdate(q, 1.0);
  ++pulls_;
  if (chol_.info() != Eigen::Success) {
    refactor();
    return;
  }
  resolve();
  if (residual() > kMuResidualTolerance) refactor();
}

void ArmModel::refactor() {
  chol_.compute(gram_);
  if (chol_.info() != Eigen::Success)
    throw std::runtime_error("arm '" + spec_.arm_id + "': gram matrix lost positive definiteness");
  resolve();
  // One step of iterative refinement if the fresh factor is still short.
  if (residual() > kMuResidualTolerance) mu_ += chol_.solve(response_ - gram_ * mu_);
}

void ArmModel::resolve() { mu_ = chol_.solve(response_); }

double ArmModel::residual() const {
  return (gram_ * mu_ - response_).lpNorm<Eigen::Infinity>();
}

}  // namespace coke
