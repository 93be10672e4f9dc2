#include "dflab/bdl.hpp"

#include <cmath>
#include <string>

#include "dflab/error.hpp"
#include "numeric.hpp"

namespace dflab {

BdlParts bdl_decompose(const FormMatrix& form) {
  const Domain& d = form.domain();
  const auto& a = form.matrix();
  const double tol = form.sign_tolerance();

  BdlParts parts;
  parts.stencil.assign(d.edges().size(), 0.0);
  parts.killing = row_sums(a);
  parts.pinned = form.pinned();

  for (NodeIndex i = 0; i < d.size(); ++i) {
    for (NodeIndex j = i + 1; j < d.size(); ++j) {
      const double jump = -a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (const auto e = d.edge_index(i, j)) {
        parts.stencil[*e] = jump;
      } else if (jump != 0.0) {
        parts.nonlocal.push_back({i, j, jump});
      }
      if (jump < -tol) parts.markovian = false;
    }
  }
  for (double k : parts.killing) {
    if (k < -tol) parts.markovian = false;
  }
  return parts;
}

FormMatrix bdl_reconstruct(const BdlParts& parts, const DomainPtr& domain) {
  const Domain& d = *domain;
  const std::size_t n = d.size();
  if (parts.stencil.size() != d.edges().size()) {
    throw Error(ErrorCode::InvalidArgument, "stencil part has " + std::to_string(parts.stencil.size()) +
                                                " weights, domain has " + std::to_string(d.edges().size()) +
                                                " edges");
  }
  if (parts.killing.size() != n) throw Error(ErrorCode::InvalidArgument, "killing part has wrong length");

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const auto put_jump = [&a](NodeIndex i, NodeIndex j, double w) {
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = -w;
    a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = -w;
  };
  for (std::size_t e = 0; e < d.edges().size(); ++e) put_jump(d.edges()[e].i, d.edges()[e].j, parts.stencil[e]);
  for (const auto& jump : parts.nonlocal) {
    if (jump.i >= n || jump.j >= n) throw Error(ErrorCode::InvalidArgument, "nonlocal jump index out of range");
    if (jump.i == jump.j) throw Error(ErrorCode::InvalidArgument, "nonlocal jump on the diagonal");
    if (d.adjacent(jump.i, jump.j)) {
      throw Error(ErrorCode::InvalidArgument, "nonlocal jump {" + std::to_string(jump.i) + "," +
                                                  std::to_string(jump.j) + "} lies on a domain edge");
    }
    put_jump(jump.i, jump.j, jump.weight);
  }
  for (std::size_t i = 0; i < n; ++i) {
    const auto ii = static_cast<Eigen::Index>(i);
    detail::CompensatedSum s;
    s.add(parts.killing[i]);
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (j != ii) s.add(-a(ii, j));
    }
    a(ii, ii) = s.value();
  }
  return FormMatrix(domain, std::move(a), parts.pinned);
}

LocalityClass classify_locality(const FormMatrix& form) {
  const Domain& d = form.domain();
  const auto& a = form.matrix();
  const double tol = form.sign_tolerance();
  LocalityClass out;
  for (NodeIndex i = 0; i < d.size(); ++i) {
    for (NodeIndex j = i + 1; j < d.size(); ++j) {
      if (d.adjacent(i, j)) continue;
      const double jump = -a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(jump) <= tol) continue;
      if (!out.witness || std::abs(jump) > std::abs(out.witness->weight)) out.witness = JumpEntry{i, j, jump};
      out.stencil_local = false;
    }
  }
  return out;
}

}  // namespace dflab
