#pragma once

#include <string_view>

#include <Eigen/Core>

namespace vkoga {

/// Point sets are stored one point per row, so a row is a contiguous point.
using Points = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Point = Eigen::RowVectorXd;
using PointRef = Eigen::Ref<const Point>;
using Index = Eigen::Index;

enum class KernelFamily { Gaussian, LinearMatern };

[[nodiscard]] std::string_view to_string(KernelFamily family);
/// Accepts "gaussian" and "linmatern".
[[nodiscard]] KernelFamily parse_kernel_family(std::string_view name);

/// Normalized radial kernel k(x, y) = phi(epsilon * |x - y|) with phi(0) = 1.
///
///   Gaussian:      phi(r) = exp(-r^2)
///   LinearMatern:  phi(r) = (1 + r) exp(-r)
///
/// Both are strictly positive definite on R^d for every d.
class Kernel {
 public:
  Kernel(KernelFamily family, double epsilon);

  [[nodiscard]] KernelFamily family() const noexcept { return family_; }
  [[nodiscard]] double epsilon() const noexcept { return epsilon_; }

  /// phi(r) for an already scaled radius r >= 0.
  [[nodiscard]] double radial(double r) const noexcept;

  /// Unchecked evaluation; x and y must have the same length.
  [[nodiscard]] double operator()(PointRef x, PointRef y) const noexcept;

 private:
  KernelFamily family_;
  double epsilon_;
};

/// Checked evaluation of k(x, y). Throws InputError on dimension mismatch.
[[nodiscard]] double eval(const Kernel& kernel, PointRef x, PointRef y);

/// Symmetric N x N matrix A(i, j) = k(x_i, x_j). Throws InputError if X is empty.
[[nodiscard]] Eigen::MatrixXd kernel_matrix(const Kernel& kernel, const Points& X);

/// M x N matrix with entry (i, j) = k(X_i, Z_j).
[[nodiscard]] Eigen::MatrixXd cross_matrix(const Kernel& kernel, const Points& X,
                                           const Points& Z);

/// Kernel column k(x_i, z) over all rows of X, written into out.
void kernel_column(const Kernel& kernel, const Points& X, PointRef z,
                   Eigen::Ref<Eigen::VectorXd> out);

}  // namespace vkoga
