#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "coke/types.hpp"

namespace coke {

struct ArmScore {
  double exploit = 0.0;  // q . mu
  double explore = 0.0;  // gamma * sqrt(q^T A^-1 q)

  double total() const { return exploit + explore; }
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const { return upper - lower; }
};

// Tolerance on ||A mu - b||_inf after every refresh.
inline constexpr double kMuResidualTolerance = 1e-9;

// Contextual ridge model for one arm:
//   A = Q^T Q + sigma I,  b = Q^T r,  mu = A^-1 b.
// A and b are accumulated per observation; the Cholesky factor of A is
// rank-1 updated alongside and refactored whenever the mu residual drifts.
class ArmModel {
 public:
  ArmModel(ArmSpec spec, std::size_t dim, double sigma);

  // Rebuilds a model from checkpointed (A, b, pulls).
  static ArmModel restore(ArmSpec spec, double sigma, Eigen::MatrixXd gram,
                          Eigen::VectorXd response, std::uint64_t pulls);

  ArmScore score(const Eigen::VectorXd& q, double gamma) const;
  Interval confidence_interval(const Eigen::VectorXd& q, double gamma) const;

  // sqrt(q^T A^-1 q); one triangular solve against the Cholesky factor.
  double width_term(const Eigen::VectorXd& q) const;

  void update(const Eigen::VectorXd& q, double reward);

  const ArmSpec& spec() const { return spec_; }
  const std::string& id() const { return spec_.arm_id; }
  std::size_t dim() const { return static_cast<std::size_t>(response_.size()); }
  double sigma() const { return sigma_; }
  std::uint64_t pulls() const { return pulls_; }
  const Eigen::MatrixXd& gram() const { return gram_; }
  const Eigen::VectorXd& response() const { return response_; }
  const Eigen::VectorXd& mu() const { return mu_; }

  // ||A mu - b||_inf.
  double residual() const;

 private:
  void check_dim(const Eigen::VectorXd& q) const;
  void refactor();
  void resolve();

  ArmSpec spec_;
  double sigma_;
  Eigen::MatrixXd gram_;
  Eigen::VectorXd response_;
  Eigen::VectorXd mu_;
  Eigen::LLT<Eigen::MatrixXd> chol_;
  std::uint64_t pulls_ = 0;
};

}  // namespace coke
