#include "kaclab/gaussian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "kaclab/error.hpp"

namespace kaclab {

namespace {

double maxAbs(const Eigen::MatrixXd& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

CovMatrix::CovMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols()) {
    throw NotSymmetric("covariance must be square");
  }
  if (!entries_.allFinite()) throw NotPSD("covariance has non-finite entries");
  const double scale = maxAbs(entries_);
  const double asym = maxAbs(entries_ - entries_.transpose());
  if (asym > kSymmetryTol * std::max(scale, 1e-300)) {
    std::ostringstream msg;
    msg << "asymmetry " << asym << " at scale " << scale;
    throw NotSymmetric(msg.str());
  }
  entries_ = 0.5 * (entries_ + entries_.transpose());
  if (dim() == 0 || scale == 0.0) return;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(entries_, Eigen::EigenvaluesOnly);
  const double lo = eig.eigenvalues().minCoeff();
  const double hi = eig.eigenvalues().maxCoeff();
  if (lo < -kPsdTol * std::max(hi, 0.0) - 1e-300) {
    std::ostringstream msg;
    msg << "smallest eigenvalue " << lo << " vs largest " << hi;
    throw NotPSD(msg.str());
  }
}

GaussianFactor factor(const CovMatrix& cov) {
  GaussianFactor f;
  f.dim = cov.dim();
  const Eigen::MatrixXd& a = cov.entries();
  if (f.dim == 0) return f;
  Eigen::LLT<Eigen::MatrixXd> llt(a);
  if (llt.info() == Eigen::Success) {
    Eigen::MatrixXd lower = llt.matrixL();
    const double minDiag = lower.diagonal().minCoeff();
    const double maxDiag = lower.diagonal().maxCoeff();
    if (minDiag > 1e-7 * maxDiag) {
      f.lowerFactor = std::move(lower);
      f.triangular = true;
      f.logDet = 2.0 * f.lowerFactor.diagonal().array().log().sum();
      return f;
    }
  }
  // Near-singular or semidefinite: symmetric square root with clipped spectrum.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
  Eigen::VectorXd lambda = eig.eigenvalues().cwiseMax(0.0);
  f.lowerFactor = eig.eigenvectors() * lambda.cwiseSqrt().asDiagonal();
  f.triangular = false;
  const double hi = lambda.maxCoeff();
  bool singular = hi == 0.0;
  double logDet = 0.0;
  for (int i = 0; i < lambda.size() && !singular; ++i) {
    if (lambda(i) <= 1e-300) singular = true;
    else logDet += std::log(lambda(i));
  }
  f.logDet = singular ? -std::numeric_limits<double>::infinity() : logDet;
  return f;
}

Eigen::VectorXd sampleVector(const GaussianFactor& f, RandomStream& rng) {
  Eigen::VectorXd z(f.dim);
  for (int i = 0; i < f.dim; ++i) z(i) = rng.normal();
  if (f.dim == 0) return z;
  if (f.triangular) return f.lowerFactor.triangularView<Eigen::Lower>() * z;
  return f.lowerFactor * z;
}

CovMatrix conditionOnZero(const CovMatrix& joint, std::span<const int> target,
                          std::span<const int> cond) {
  const Eigen::MatrixXd& s = joint.entries();
  const int na = static_cast<int>(target.size());
  const int nb = static_cast<int>(cond.size());
  Eigen::MatrixXd saa(na, na), sab(na, nb), sbb(nb, nb);
  for (int i = 0; i < na; ++i) {
    for (int j = 0; j < na; ++j) saa(i, j) = s(target[i], target[j]);
    for (int j = 0; j < nb; ++j) sab(i, j) = s(target[i], cond[j]);
  }
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j) sbb(i, j) = s(cond[i], cond[j]);
  if (nb == 0) return CovMatrix(saa);

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sbb);
  const double hi = eig.eigenvalues().cwiseAbs().maxCoeff();
  const double lo = eig.eigenvalues().minCoeff();
  if (!(hi > 0.0) || lo <= 1e-12 * hi) {
    std::ostringstream msg;
    msg << "conditioning block has reciprocal condition " << (hi > 0.0 ? lo / hi : 0.0);
    throw SingularConditioning(msg.str());
  }
  // Solve via the eigenbasis of the conditioning block.
  const Eigen::MatrixXd& v = eig.eigenvectors();
  Eigen::MatrixXd w = sab * v;  // na x nb
  Eigen::MatrixXd correction = w * eig.eigenvalues().cwiseInverse().asDiagonal() * w.transpose();
  Eigen::MatrixXd out = saa - correction;
  out = 0.5 * (out + out.transpose());
  // Round-off can leave eigenvalues a hair below zero when the target block
  // is (nearly) determined by the conditioning block.
  if (na > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> check(out);
    const double scale = std::max(saa.cwiseAbs().maxCoeff(), 1e-300);
    if (check.eigenvalues().minCoeff() < -CovMatrix::kPsdTol * scale) {
      throw NotPSD("conditional covariance lost positivity");
    }
    if (check.eigenvalues().minCoeff() < 0.0) {
      Eigen::VectorXd clipped = check.eigenvalues().cwiseMax(0.0);
      out = check.eigenvectors() * clipped.asDiagonal() * check.eigenvectors().transpose();
      out = 0.5 * (out + out.transpose());
    }
  }
  return CovMatrix(out);
}

double bivariateAbsProduct(double sigma1, double sigma2, double rho) {
  if (sigma1 <= 0.0 || sigma2 <= 0.0) return 0.0;
  rho = std::clamp(rho, -1.0, 1.0);
  return 2.0 / std::numbers::pi * sigma1 * sigma2 *
         (std::sqrt(1.0 - rho * rho) + rho * std::asin(rho));
}

MomentEstimate absMomentProduct(const CovMatrix& cov, long mcBudget, RandomStream& rng,
                                AbsMomentMethod method) {
  const Eigen::MatrixXd& a = cov.entries();
  const int n = cov.dim();
  if (n == 0) return {1.0, 0.0};
  if (a.cwiseAbs().maxCoeff() == 0.0) return {0.0, 0.0};
  if (method == AbsMomentMethod::Auto && n == 1) {
    return {std::sqrt(2.0 * std::max(a(0, 0), 0.0) / std::numbers::pi), 0.0};
  }
  if (method == AbsMomentMethod::Auto && n == 2) {
    const double s1 = std::sqrt(std::max(a(0, 0), 0.0));
    const double s2 = std::sqrt(std::max(a(1, 1), 0.0));
    const double rho = (s1 > 0.0 && s2 > 0.0) ? a(0, 1) / (s1 * s2) : 0.0;
    return {bivariateAbsProduct(s1, s2, rho), 0.0};
  }
  if (mcBudget < 2) mcBudget = 2;
  const GaussianFactor f = factor(cov);
  // Welford accumulation of the product of absolute values.
  double mean = 0.0, m2 = 0.0;
  for (long i = 0; i < mcBudget; ++i) {
    const Eigen::VectorXd z = sampleVector(f, rng);
    const double v = z.cwiseAbs().prod();
    const double delta = v - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / static_cast<double>(mcBudget - 1);
  return {mean, std::sqrt(var / static_cast<double>(mcBudget))};
}

}  // namespace kaclab
