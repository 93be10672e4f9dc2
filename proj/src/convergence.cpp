#include <cmath>
#include <numbers>

#include "dflab/error.hpp"
#include "dflab/verify.hpp"

namespace dflab {

namespace {

double robin_characteristic(double beta, double x) {
  return (x * x - beta * beta) * std::sin(x) - 2.0 * beta * x * std::cos(x);
}

}  // namespace

double robin_root(double beta, std::size_t k) {
  if (k == 0) throw Error(ErrorCode::InvalidArgument, "root index starts at 1");
  if (!(beta >= 0.0) || !std::isfinite(beta)) throw Error(ErrorCode::InvalidArgument, "beta must be >= 0");

  const double step = std::numbers::pi / 100.0;
  std::size_t found = 0;
  double lo = step;
  double flo = robin_characteristic(beta, lo);
  for (int s = 2; s < 1000000; ++s) {
    const double hi = step * s;
    const double fhi = robin_characteristic(beta, hi);
    if (flo == 0.0 && ++found == k) return lo;
    if (flo * fhi < 0.0 && ++found == k) {
      double a = lo, b = hi, fa = flo;
      while (b - a > 1e-12) {
        const double mid = 0.5 * (a + b);
        const double fm = robin_characteristic(beta, mid);
        if (fm == 0.0) return mid;
        if (fa * fm < 0.0) {
          b = mid;
        } else {
          a = mid;
          fa = fm;
        }
      }
      return 0.5 * (a + b);
    }
    lo = hi;
    flo = fhi;
  }
  throw Error(ErrorCode::Internal, "root scan exhausted");
}

std::vector<ConvergenceRow> eigen_convergence(BoundaryKind kind, std::span<const std::size_t> sizes, std::size_t k,
                                              double beta) {
  if (sizes.empty()) throw Error(ErrorCode::InvalidArgument, "no grid sizes given");
  for (std::size_t s = 1; s < sizes.size(); ++s) {
    if (sizes[s] <= sizes[s - 1]) throw Error(ErrorCode::InvalidArgument, "grid sizes must increase");
  }
  if (kind != BoundaryKind::Neumann && k == 0) {
    throw Error(ErrorCode::InvalidArgument, "Dirichlet and Robin modes count from k = 1");
  }

  double reference = 0.0;
  const double pi = std::numbers::pi;
  switch (kind) {
    case BoundaryKind::Neumann:
    case BoundaryKind::Dirichlet: reference = (static_cast<double>(k) * pi) * (static_cast<double>(k) * pi); break;
    case BoundaryKind::Robin: {
      const double root = robin_root(beta, k);
      reference = root * root;
      break;
    }
  }
  const std::size_t index = kind == BoundaryKind::Neumann ? k : k - 1;

  std::vector<ConvergenceRow> rows;
  for (auto n : sizes) {
    const auto domain = share(Domain::interval(n, 1.0));
    FormMatrix form = neumann_form(domain);
    if (kind == BoundaryKind::Dirichlet) {
      form = dirichlet_form(domain);
    } else if (kind == BoundaryKind::Robin) {
      std::vector<double> mu;
      for (double s : domain->sigma()) mu.push_back(s * beta);
      form = robin_form(domain, BoundaryMeasure(std::move(mu)));
    }
    const Semigroup sg(form);
    if (index >= static_cast<std::size_t>(sg.eigenvalues().size())) {
      throw Error(ErrorCode::InvalidArgument, "mode " + std::to_string(k) + " does not exist on a grid of " +
                                                  std::to_string(n) + " nodes");
    }
    ConvergenceRow row;
    row.n = n;
    row.h = 1.0 / static_cast<double>(n - 1);
    row.lambda = sg.eigenvalues()(static_cast<Eigen::Index>(index));
    row.reference = reference;
    row.abs_error = std::abs(row.lambda - reference);
    // A zero reference (the Neumann ground mode) has no convergence rate.
    if (!rows.empty() && reference != 0.0) {
      const auto& prev = rows.back();
      if (prev.abs_error > 0.0 && row.abs_error > 0.0) {
        row.observed_order = std::log(prev.abs_error / row.abs_error) / std::log(prev.h / row.h);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace dflab
