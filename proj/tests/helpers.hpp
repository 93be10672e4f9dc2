#pragma once

#include <doctest.h>

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <vector>

#include "dflab/domain.hpp"
#include "dflab/forms.hpp"

namespace testutil {

// Unit-weight path 0 - 1 - 2 with boundary {0, 2} and unit masses.
inline dflab::DomainPtr unit_path() {
  dflab::GraphSpec spec;
  spec.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  spec.boundary = {0, 2};
  return dflab::share(dflab::Domain::graph(spec));
}

inline Eigen::MatrixXd mat(std::initializer_list<std::initializer_list<double>> rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : rows) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

// Entrywise |got - want| <= tol * max(1, |want|); tol = 0 demands equality.
inline void check_matrix(const Eigen::MatrixXd& got, const Eigen::MatrixXd& want, double tol = 0.0) {
  REQUIRE(got.rows() == want.rows());
  REQUIRE(got.cols() == want.cols());
  for (Eigen::Index i = 0; i < got.rows(); ++i) {
    for (Eigen::Index j = 0; j < got.cols(); ++j) {
      INFO("entry (" << i << "," << j << ")");
      CHECK(std::abs(got(i, j) - want(i, j)) <= tol * std::max(1.0, std::abs(want(i, j))));
    }
  }
}

inline dflab::FormMatrix aw_form(const dflab::DomainPtr& d) {
  return dflab::nonlocal_robin_form(d, dflab::BoundaryOperator(mat({{1, 1}, {1, 1}})));
}

inline dflab::FormMatrix robin12(const dflab::DomainPtr& d) {
  return dflab::robin_form(d, dflab::BoundaryMeasure({1.0, 2.0}));
}

}  // namespace testutil
