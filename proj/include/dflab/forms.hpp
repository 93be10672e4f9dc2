#pragma once

#include <Eigen/Dense>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "dflab/domain.hpp"

namespace dflab {

/// Relative slack used by every sign and order check on form matrices.
inline constexpr double kSignTolerance = 1e-12;

/// Symmetric matrix A of a bilinear form a(u,v) = u^T A v over a domain.
///
/// Pinned nodes carry the constraint u_i = 0; their rows and columns are
/// identically zero and the constraint lives in `pinned()`.
class FormMatrix {
 public:
  FormMatrix(DomainPtr domain, Eigen::MatrixXd a, std::vector<NodeIndex> pinned = {});

  const Domain& domain() const noexcept { return *domain_; }
  const DomainPtr& domain_ptr() const noexcept { return domain_; }
  const Eigen::MatrixXd& matrix() const noexcept { return a_; }
  const std::vector<NodeIndex>& pinned() const noexcept { return pinned_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(a_.rows()); }

  bool is_pinned(NodeIndex i) const;
  /// Node indices not pinned, ascending.
  std::vector<NodeIndex> free_nodes() const;
  double max_abs() const noexcept { return max_abs_; }
  /// kSignTolerance * max|A|.
  double sign_tolerance() const noexcept { return kSignTolerance * max_abs_; }

 private:
  DomainPtr domain_;
  Eigen::MatrixXd a_;
  std::vector<NodeIndex> pinned_;
  double max_abs_ = 0.0;
};

/// Atom masses mu_i in [0, +inf] at the boundary nodes, in boundary order.
/// +inf pins the node (the part of the boundary where mu is not finite).
class BoundaryMeasure {
 public:
  static constexpr double kInfinite = std::numeric_limits<double>::infinity();

  BoundaryMeasure() = default;
  explicit BoundaryMeasure(std::vector<double> values);

  const std::vector<double>& values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t k) const { return values_[k]; }
  bool is_finite_at(std::size_t k) const { return values_[k] != kInfinite; }
  /// Boundary positions where mu is finite.
  std::vector<std::size_t> finite_part() const;

  friend bool operator==(const BoundaryMeasure&, const BoundaryMeasure&) = default;

 private:
  std::vector<double> values_;
};

/// Boundary coupling operator B indexed by boundary position.
class BoundaryOperator {
 public:
  explicit BoundaryOperator(Eigen::MatrixXd b);
  const Eigen::MatrixXd& matrix() const noexcept { return b_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(b_.rows()); }

 private:
  Eigen::MatrixXd b_;
};

struct PairWitness {
  NodeIndex i = 0;
  NodeIndex j = 0;
  double value = 0.0;
};

struct SignVerdict {
  bool holds = true;
  std::optional<PairWitness> witness;
};

struct GapResult {
  Eigen::MatrixXd gap;
  bool holds = true;
  std::optional<PairWitness> witness;
};

FormMatrix neumann_form(const DomainPtr& domain);
FormMatrix dirichlet_form(const DomainPtr& domain);
FormMatrix robin_form(const DomainPtr& domain, const BoundaryMeasure& mu);
FormMatrix nonlocal_robin_form(const DomainPtr& domain, const BoundaryOperator& b);

/// Off-diagonal entries <= tol and row sums >= -tol. The witness is the first
/// offending off-diagonal pair in row-major order, or (i,i) carrying the row
/// sum when only a row sum fails.
SignVerdict is_markovian(const FormMatrix& form);

/// G = A - B and whether G >= -tol entrywise; the witness is the first
/// offending entry in row-major order.
GapResult ouhabaz_gap(const FormMatrix& a, const FormMatrix& b);

/// (u+)^T A (u-).
double cross_form_energy(const FormMatrix& form, std::span<const double> u);

/// Row sums of A with compensated summation; shared by every killing-measure
/// computation so that all modules agree on them bit for bit.
std::vector<double> row_sums(const Eigen::MatrixXd& a);

}  // namespace dflab
