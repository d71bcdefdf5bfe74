#include "vkoga/kernels.hpp"

#include <cmath>
#include <string>

#include "vkoga/errors.hpp"

namespace vkoga {

std::string_view to_string(KernelFamily family) {
  switch (family) {
    case KernelFamily::Gaussian:
      return "gaussian";
    case KernelFamily::LinearMatern:
      return "linmatern";
  }
  return "unknown";
}

KernelFamily parse_kernel_family(std::string_view name) {
  if (name == "gaussian") return KernelFamily::Gaussian;
  if (name == "linmatern") return KernelFamily::LinearMatern;
  throw InputError("unknown kernel family '" + std::string(name) +
                   "' (expected gaussian or linmatern)");
}

Kernel::Kernel(KernelFamily family, double epsilon) : family_(family), epsilon_(epsilon) {
  if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
    throw InputError("kernel shape parameter must be positive and finite, got " +
                     std::to_string(epsilon));
  }
}

double Kernel::radial(double r) const noexcept {
  switch (family_) {
    case KernelFamily::Gaussian:
      return std::exp(-r * r);
    case KernelFamily::LinearMatern:
      return (1.0 + r) * std::exp(-r);
  }
  return 0.0;
}

double Kernel::operator()(PointRef x, PointRef y) const noexcept {
  double dist_sq = 0.0;
  for (Index k = 0; k < x.size(); ++k) {
    const double diff = x[k] - y[k];
    dist_sq += diff * diff;
  }
  return radial(epsilon_ * std::sqrt(dist_sq));
}

double eval(const Kernel& kernel, PointRef x, PointRef y) {
  if (x.size() != y.size()) {
    throw InputError("kernel evaluation: dimension mismatch (" + std::to_string(x.size()) +
                     " vs " + std::to_string(y.size()) + ")");
  }
  return kernel(x, y);
}

Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Points& X) {
  if (X.rows() == 0) {
    throw InputError("kernel_matrix: empty point set");
  }
  const Index n = X.rows();
  Eigen::MatrixXd A(n, n);
  for (Index j = 0; j < n; ++j) {
    A(j, j) = kernel(X.row(j), X.row(j));
    for (Index i = j + 1; i < n; ++i) {
      const double value = kernel(X.row(i), X.row(j));
      A(i, j) = value;
      A(j, i) = value;
    }
  }
  return A;
}

Eigen::MatrixXd cross_matrix(const Kernel& kernel, const Points& X, const Points& Z) {
  if (X.rows() > 0 && Z.rows() > 0 && X.cols() != Z.cols()) {
    throw InputError("cross_matrix: dimension mismatch (" + std::to_string(X.cols()) +
                     " vs " + std::to_string(Z.cols()) + ")");
  }
  Eigen::MatrixXd K(X.rows(), Z.rows());
  for (Index j = 0; j < Z.rows(); ++j) {
    for (Index i = 0; i < X.rows(); ++i) {
      K(i, j) = kernel(X.row(i), Z.row(j));
    }
  }
  return K;
}

void kernel_column(const Kernel& kernel, const Points& X, PointRef z,
                   Eigen::Ref<Eigen::VectorXd> out) {
  for (Index i = 0; i < X.rows(); ++i) {
    out[i] = kernel(X.row(i), z);
  }
}

}  // namespace vkoga
