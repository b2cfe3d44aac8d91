#pragma once
// Reference computations the library is checked against. None of these share
// code with src/: they recompute from raw logs or closed forms.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Values computed offline with 30-digit arithmetic and frozen here.
inline constexpr double kGammaDelta01 = 2.22387341534040827;  // 1 + sqrt(ln 20 / 2)
inline constexpr double kBeta1000_1_CdfAt09 = 1.74787125172269473e-46;  // 0.9^1000
inline constexpr double kBeta2_2_Variance = 0.05;  // ab / ((a+b)^2 (a+b+1))
inline constexpr double kBeta2_5_CdfAt03 = 0.579825;
inline constexpr double kSqrtHalf = 0.70710678118654752;
inline constexpr double kPosteriorMean701_301 = 0.69960079840319361;

// Stacks every (q, r) pair and solves (Q^T Q + sigma I) mu = Q^T r once,
// through a QR factorization rather than the Cholesky path under test.
struct BatchRidge {
  Eigen::MatrixXd gram;
  Eigen::VectorXd response;
  Eigen::VectorXd mu;
};

inline BatchRidge batch_ridge(const std::vector<Eigen::VectorXd>& qs, const std::vector<double>& rs,
                              std::size_t d, double sigma) {
  Eigen::MatrixXd Q(static_cast<Eigen::Index>(qs.size()), static_cast<Eigen::Index>(d));
  Eigen::VectorXd r(static_cast<Eigen::Index>(qs.size()));
  for (std::size_t i = 0; i < qs.size(); ++i) {
    Q.row(static_cast<Eigen::Index>(i)) = qs[i].transpose();
    r(static_cast<Eigen::Index>(i)) = rs[i];
  }
  BatchRidge out;
  out.gram = Q.transpose() * Q + sigma * Eigen::MatrixXd::Identity(Q.cols(), Q.cols());
  out.response = Q.transpose() * r;
  out.mu = out.gram.colPivHouseholderQr().solve(out.response);
  return out;
}

// Beta(a, b) CDF at x by composite Simpson integration of the density.
inline double beta_cdf(double a, double b, double x, int panels = 2000) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_norm = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  auto pdf = [&](double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(log_norm + (a - 1.0) * std::log(t) + (b - 1.0) * std::log1p(-t));
  };
  const double h = x / panels;
  double s = pdf(0.0) + pdf(x);
  for (int i = 1; i < panels; ++i) s += pdf(i * h) * (i % 2 ? 4.0 : 2.0);
  return s * h / 3.0;
}

// CDF table on a uniform grid, each node integrated by beta_cdf, with
// linear interpolation between nodes.
class TabulatedBetaCdf {
 public:
  TabulatedBetaCdf(double a, double b, int nodes = 4000) : values_(static_cast<std::size_t>(nodes) + 1) {
    for (int i = 0; i <= nodes; ++i) values_[static_cast<std::size_t>(i)] = beta_cdf(a, b, static_cast<double>(i) / nodes, 200);
  }
  double operator()(double x) const {
    const double n = static_cast<double>(values_.size() - 1);
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double pos = x * n;
    const auto i = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(i);
    return values_[i] + frac * (values_[i + 1] - values_[i]);
  }

 private:
  std::vector<double> values_;
};

struct Charge {
  std::string arm;
  double cost;
  bool correct;
};

// Cost regret per arm recomputed from the raw charge log.
inline std::map<std::string, double> fold_cost_regret(const std::vector<Charge>& log) {
  std::map<std::string, std::pair<double, double>> sums;
  for (const auto& c : log) {
    sums[c.arm].first += c.cost;
    if (!c.correct) sums[c.arm].second += c.cost;
  }
  std::map<std::string, double> out;
  for (const auto& [arm, s] : sums) out[arm] = s.first > 0.0 ? s.second / s.first : 0.0;
  return out;
}

// Two-sided KS distance between a sample and a CDF.
template <typename Cdf>
double ks_distance(std::vector<double> xs, Cdf cdf) {
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max({d, f - static_cast<double>(i) / n, static_cast<double>(i + 1) / n - f});
  }
  return d;
}

}  // namespace oracle
