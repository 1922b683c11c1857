#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "minirocket/classifier.hpp"
#include "minirocket/types.hpp"

namespace minirocket::detail {

/// Orthonormal columns Q and eigenvalues L with Z Z^T = Q diag(L) Q^T,
/// numerically-zero directions dropped. Uses the smaller Gram matrix.
struct SpectralBasis {
  Eigen::MatrixXd q;
  Eigen::VectorXd eigenvalues;
};

inline SpectralBasis spectral_basis(const Eigen::MatrixXd& z) {
  SpectralBasis out;
  const bool wide = z.rows() <= z.cols();
  const Eigen::MatrixXd gram = wide ? Eigen::MatrixXd(z * z.transpose())
                                    : Eigen::MatrixXd(z.transpose() * z);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const Eigen::VectorXd& values = eig.eigenvalues();
  const double tol = std::max(values.maxCoeff(), 0.0) * 1e-12;

  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    if (values(i) > tol) keep.push_back(i);

  out.q.resize(z.rows(), static_cast<Eigen::Index>(keep.size()));
  out.eigenvalues.resize(static_cast<Eigen::Index>(keep.size()));
  for (Eigen::Index c = 0; c < static_cast<Eigen::Index>(keep.size()); ++c) {
    const auto src = keep[static_cast<std::size_t>(c)];
    out.eigenvalues(c) = values(src);
    if (wide)
      out.q.col(c) = eig.eigenvectors().col(src);
    else
      out.q.col(c) = z * eig.eigenvectors().col(src) / std::sqrt(values(src));
  }
  return out;
}

std::vector<std::string> class_labels_of(std::span<const std::string> labels);
std::vector<std::size_t> encode_labels(std::span<const std::string> labels,
                                       std::span<const std::string> classes);
void fit_standardization(const FeatureMatrix& features, LinearModel& model);
Eigen::MatrixXd standardized(const FeatureMatrix& features, const LinearModel& model);
void check_finite(const FeatureMatrix& features);

}  // namespace minirocket::detail
