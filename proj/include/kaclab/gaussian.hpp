#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "kaclab/random.hpp"

namespace kaclab {

// Symmetric positive semidefinite covariance matrix. Construction validates
// symmetry (1e-12 relative) and PSD-ness (smallest eigenvalue no lower than
// -1e-10 times the largest).
class CovMatrix {
 public:
  static constexpr double kSymmetryTol = 1e-12;
  static constexpr double kPsdTol = 1e-10;

  CovMatrix() = default;
  explicit CovMatrix(Eigen::MatrixXd entries);

  int dim() const { return static_cast<int>(entries_.rows()); }
  const Eigen::MatrixXd& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Eigen::MatrixXd entries_;
};

// Square-root factor S with S * S^T = cov. Triangular (Cholesky) when the
// matrix is comfortably positive definite, otherwise an eigen square root.
struct GaussianFactor {
  int dim = 0;
  Eigen::MatrixXd lowerFactor;
  bool triangular = true;
  double logDet = 0.0;  // -inf for singular input

  Eigen::MatrixXd reconstruct() const { return lowerFactor * lowerFactor.transpose(); }
};

GaussianFactor factor(const CovMatrix& cov);

Eigen::VectorXd sampleVector(const GaussianFactor& f, RandomStream& rng);

// Covariance of the `target` block given that the `cond` block is zero,
// i.e. the Schur complement S_AA - S_AB S_BB^{-1} S_BA.
CovMatrix conditionOnZero(const CovMatrix& joint, std::span<const int> target,
                          std::span<const int> cond);

struct MomentEstimate {
  double estimate = 0.0;
  double stdError = 0.0;
};

enum class AbsMomentMethod { Auto, MonteCarlo };

// E[|z_1 ... z_n|] for z ~ N(0, cov). Exact for n <= 2 (Auto), Monte Carlo
// with `mcBudget` draws otherwise.
MomentEstimate absMomentProduct(const CovMatrix& cov, long mcBudget, RandomStream& rng,
                                AbsMomentMethod method = AbsMomentMethod::Auto);

// Closed form for a centered bivariate normal with the given standard
// deviations and correlation.
double bivariateAbsProduct(double sigma1, double sigma2, double rho);

}  // namespace kaclab
