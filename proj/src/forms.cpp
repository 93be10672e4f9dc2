#include "dflab/forms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflab/error.hpp"
#include "numeric.hpp"

namespace dflab {

FormMatrix::FormMatrix(DomainPtr domain, Eigen::MatrixXd a, std::vector<NodeIndex> pinned)
    : domain_(std::move(domain)), a_(std::move(a)), pinned_(std::move(pinned)) {
  if (!domain_) throw Error(ErrorCode::InvalidArgument, "form needs a domain");
  const auto n = static_cast<Eigen::Index>(domain_->size());
  if (a_.rows() != n || a_.cols() != n) {
    throw Error(ErrorCode::DomainMismatch, "form matrix is " + std::to_string(a_.rows()) + "x" +
                                               std::to_string(a_.cols()) + " but the domain has " +
                                               std::to_string(n) + " nodes");
  }
  if (!a_.allFinite()) throw Error(ErrorCode::InvalidArgument, "form matrix has non-finite entries");
  max_abs_ = n > 0 ? a_.cwiseAbs().maxCoeff() : 0.0;
  const double asym = n > 0 ? (a_ - a_.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > kSignTolerance * max_abs_) {
    throw Error(ErrorCode::AsymmetricForm,
                "form matrix is not symmetric (max |A_ij - A_ji| = " + std::to_string(asym) + ")");
  }

  std::sort(pinned_.begin(), pinned_.end());
  pinned_.erase(std::unique(pinned_.begin(), pinned_.end()), pinned_.end());
  for (auto p : pinned_) {
    if (p >= domain_->size()) throw Error(ErrorCode::InvalidArgument, "pinned index out of range");
    if (a_.row(static_cast<Eigen::Index>(p)).cwiseAbs().maxCoeff() != 0.0 ||
        a_.col(static_cast<Eigen::Index>(p)).cwiseAbs().maxCoeff() != 0.0) {
      throw Error(ErrorCode::InvalidArgument,
                  "pinned node " + std::to_string(p) + " has a nonzero row or column");
    }
  }
}

bool FormMatrix::is_pinned(NodeIndex i) const {
  return std::binary_search(pinned_.begin(), pinned_.end(), i);
}

std::vector<NodeIndex> FormMatrix::free_nodes() const {
  std::vector<NodeIndex> out;
  out.reserve(size() - pinned_.size());
  for (NodeIndex i = 0; i < size(); ++i) {
    if (!is_pinned(i)) out.push_back(i);
  }
  return out;
}

BoundaryMeasure::BoundaryMeasure(std::vector<double> values) : values_(std::move(values)) {
  for (std::size_t k = 0; k < values_.size(); ++k) {
    const double v = values_[k];
    if (std::isnan(v) || v < 0.0 || v == -kInfinite) {
      throw Error(ErrorCode::InvalidMeasure,
                  "boundary measure must be >= 0 (entry " + std::to_string(k) + " is " + std::to_string(v) + ")");
    }
  }
}

std::vector<std::size_t> BoundaryMeasure::finite_part() const {
  std::vector<std::size_t> out;
  for (std::size_t k = 0; k < values_.size(); ++k) {
    if (is_finite_at(k)) out.push_back(k);
  }
  return out;
}

BoundaryOperator::BoundaryOperator(Eigen::MatrixXd b) : b_(std::move(b)) {
  if (b_.rows() != b_.cols()) throw Error(ErrorCode::InvalidArgument, "boundary operator must be square");
  if (!b_.allFinite()) throw Error(ErrorCode::InvalidArgument, "boundary operator has non-finite entries");
  if (b_.size() == 0) return;
  const double scale = b_.cwiseAbs().maxCoeff();
  if ((b_ - b_.transpose()).cwiseAbs().maxCoeff() > kSignTolerance * scale) {
    throw Error(ErrorCode::AsymmetricForm, "boundary operator is not symmetric");
  }
}

std::vector<double> row_sums(const Eigen::MatrixXd& a) {
  std::vector<double> out(static_cast<std::size_t>(a.rows()));
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    detail::CompensatedSum s;
    for (Eigen::Index j = 0; j < a.cols(); ++j) s.add(a(i, j));
    out[static_cast<std::size_t>(i)] = s.value();
  }
  return out;
}

namespace {

Eigen::MatrixXd graph_laplacian(const Domain& d) {
  const auto n = static_cast<Eigen::Index>(d.size());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : d.edges()) {
    const auto i = static_cast<Eigen::Index>(e.i);
    const auto j = static_cast<Eigen::Index>(e.j);
    a(i, j) -= e.conductance;
    a(j, i) -= e.conductance;
    a(i, i) += e.conductance;
    a(j, j) += e.conductance;
  }
  return a;
}

void zero_node(Eigen::MatrixXd& a, NodeIndex p) {
  a.row(static_cast<Eigen::Index>(p)).setZero();
  a.col(static_cast<Eigen::Index>(p)).setZero();
}

}  // namespace

FormMatrix neumann_form(const DomainPtr& domain) {
  return FormMatrix(domain, graph_laplacian(*domain));
}

FormMatrix dirichlet_form(const DomainPtr& domain) {
  if (domain->interior().empty()) throw Error(ErrorCode::EmptyInterior, "Dirichlet form needs interior nodes");
  Eigen::MatrixXd a = graph_laplacian(*domain);
  for (auto b : domain->boundary()) zero_node(a, b);
  return FormMatrix(domain, std::move(a), domain->boundary());
}

FormMatrix robin_form(const DomainPtr& domain, const BoundaryMeasure& mu) {
  const auto& boundary = domain->boundary();
  if (mu.size() != boundary.size()) {
    throw Error(ErrorCode::InvalidMeasure, "measure has " + std::to_string(mu.size()) +
                                               " entries, boundary has " + std::to_string(boundary.size()));
  }
  Eigen::MatrixXd a = graph_laplacian(*domain);
  std::vector<NodeIndex> pinned;
  for (std::size_t k = 0; k < boundary.size(); ++k) {
    const auto node = boundary[k];
    if (mu.is_finite_at(k)) {
      a(static_cast<Eigen::Index>(node), static_cast<Eigen::Index>(node)) += mu[k];
    } else {
      pinned.push_back(node);
    }
  }
  for (auto p : pinned) zero_node(a, p);
  return FormMatrix(domain, std::move(a), std::move(pinned));
}

FormMatrix nonlocal_robin_form(const DomainPtr& domain, const BoundaryOperator& b) {
  const auto& boundary = domain->boundary();
  const auto& sigma = domain->sigma();
  if (b.size() != boundary.size()) {
    throw Error(ErrorCode::InvalidArgument, "boundary operator is " + std::to_string(b.size()) +
                                                "-dimensional, boundary has " + std::to_string(boundary.size()) +
                                                " nodes");
  }
  const std::size_t nb = boundary.size();
  Eigen::MatrixXd block(nb, nb);
  for (std::size_t p = 0; p < nb; ++p) {
    for (std::size_t q = 0; q < nb; ++q) {
      block(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q)) =
          sigma[p] * b.matrix()(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }
  }
  if (nb > 0) {
    const double scale = block.cwiseAbs().maxCoeff();
    const double asym = (block - block.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSignTolerance * scale) {
      throw Error(ErrorCode::AsymmetricForm,
                  "sigma-weighted boundary block is not symmetric (non-constant sigma with non-diagonal B)");
    }
  }

  Eigen::MatrixXd a = graph_laplacian(*domain);
  for (std::size_t p = 0; p < nb; ++p) {
    for (std::size_t q = 0; q < nb; ++q) {
      a(static_cast<Eigen::Index>(boundary[p]), static_cast<Eigen::Index>(boundary[q])) +=
          block(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(q));
    }
  }
  return FormMatrix(domain, std::move(a));
}

SignVerdict is_markovian(const FormMatrix& form) {
  const auto& a = form.matrix();
  const double tol = form.sign_tolerance();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) > tol) {
        return {false, PairWitness{static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), a(i, j)}};
      }
    }
  }
  const auto sums = row_sums(a);
  for (std::size_t i = 0; i < sums.size(); ++i) {
    if (sums[i] < -tol) return {false, PairWitness{i, i, sums[i]}};
  }
  return {};
}

GapResult ouhabaz_gap(const FormMatrix& a, const FormMatrix& b) {
  if (!(a.domain() == b.domain())) throw Error(ErrorCode::DomainMismatch, "forms live on different domains");
  if (a.pinned() != b.pinned()) throw Error(ErrorCode::DomainMismatch, "forms have different pinned sets");
  GapResult out;
  out.gap = a.matrix() - b.matrix();
  const double tol = kSignTolerance * std::max(a.max_abs(), b.max_abs());
  for (Eigen::Index i = 0; i < out.gap.rows() && out.holds; ++i) {
    for (Eigen::Index j = 0; j < out.gap.cols(); ++j) {
      if (out.gap(i, j) < -tol) {
        out.holds = false;
        out.witness = PairWitness{static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), out.gap(i, j)};
        break;
      }
    }
  }
  return out;
}

double cross_form_energy(const FormMatrix& form, std::span<const double> u) {
  if (u.size() != form.size()) {
    throw Error(ErrorCode::InvalidArgument, "vector has dimension " + std::to_string(u.size()) +
                                                ", form has " + std::to_string(form.size()));
  }
  const auto n = static_cast<Eigen::Index>(u.size());
  Eigen::VectorXd plus(n), minus(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    plus(i) = std::max(u[static_cast<std::size_t>(i)], 0.0);
    minus(i) = std::max(-u[static_cast<std::size_t>(i)], 0.0);
  }
  return plus.dot(form.matrix() * minus);
}

}  // namespace dflab
