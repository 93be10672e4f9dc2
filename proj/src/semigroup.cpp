#include "dflab/semigroup.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "dflab/error.hpp"
#include "numeric.hpp"

namespace dflab {

std::vector<double> default_time_grid() { return {0.0, 1e-3, 1e-2, 1e-1, 1.0, 10.0}; }

namespace {

void check_time(double t) {
  if (!(t >= 0.0) || !std::isfinite(t)) throw Error(ErrorCode::InvalidTime, "time must be finite and >= 0");
}

void check_grid(std::span<const double> grid) {
  if (grid.empty()) throw Error(ErrorCode::InvalidArgument, "time grid is empty");
  for (double t : grid) check_time(t);
}

// Absolute floor for entries that have decayed into the subnormal range,
// where relative accuracy is lost to underflow in exp(-t lambda).
double underflow_floor(std::size_t n) {
  return 64.0 * static_cast<double>(n) * std::numeric_limits<double>::min();
}

std::vector<double> probe_times(double radius) {
  std::vector<double> out;
  if (radius > 0.0) {
    for (int k = 1; k <= 6; ++k) out.push_back(std::pow(10.0, -k) / radius);
  }
  return out;
}

TimedWitness min_entry_of(const Eigen::MatrixXd& s, double t) {
  TimedWitness w{t, 0, 0, std::numeric_limits<double>::infinity()};
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    for (Eigen::Index j = 0; j < s.cols(); ++j) {
      if (s(i, j) < w.value) w = {t, static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), s(i, j)};
    }
  }
  return w;
}

}  // namespace

Semigroup::Semigroup(const FormMatrix& form) : form_(form), free_(form.free_nodes()) {
  const auto nf = static_cast<Eigen::Index>(free_.size());
  const auto& mass = form.domain().mass();
  inv_sqrt_mass_.resize(nf);
  sqrt_mass_.resize(nf);
  for (Eigen::Index p = 0; p < nf; ++p) {
    sqrt_mass_(p) = std::sqrt(mass[free_[static_cast<std::size_t>(p)]]);
    inv_sqrt_mass_(p) = 1.0 / sqrt_mass_(p);
  }
  Eigen::MatrixXd sym(nf, nf);
  for (Eigen::Index p = 0; p < nf; ++p) {
    for (Eigen::Index q = 0; q < nf; ++q) {
      sym(p, q) = inv_sqrt_mass_(p) *
                  form.matrix()(static_cast<Eigen::Index>(free_[static_cast<std::size_t>(p)]),
                                static_cast<Eigen::Index>(free_[static_cast<std::size_t>(q)])) *
                  inv_sqrt_mass_(q);
    }
  }
  if (nf == 0) {
    eigenvalues_.resize(0);
    eigenvectors_.resize(0, 0);
    return;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
  if (solver.info() != Eigen::Success) throw Error(ErrorCode::Internal, "eigen-decomposition did not converge");
  eigenvalues_ = solver.eigenvalues();
  eigenvectors_ = solver.eigenvectors();
  radius_ = eigenvalues_.cwiseAbs().maxCoeff();
}

Eigen::MatrixXd Semigroup::at(double t) const {
  check_time(t);
  const auto n = static_cast<Eigen::Index>(form_.size());
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(n, n);
  const auto nf = static_cast<Eigen::Index>(free_.size());
  if (t == 0.0) {
    for (auto i : free_) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 1.0;
    return out;
  }
  const Eigen::VectorXd decay = (-t * eigenvalues_).array().exp();
  const Eigen::MatrixXd sym = eigenvectors_ * decay.asDiagonal() * eigenvectors_.transpose();
  for (Eigen::Index p = 0; p < nf; ++p) {
    for (Eigen::Index q = 0; q < nf; ++q) {
      out(static_cast<Eigen::Index>(free_[static_cast<std::size_t>(p)]),
          static_cast<Eigen::Index>(free_[static_cast<std::size_t>(q)])) =
          inv_sqrt_mass_(p) * sym(p, q) * sqrt_mass_(q);
    }
  }
  return out;
}

SemigroupSnapshot expm(const FormMatrix& form, double t) {
  check_time(t);
  return {t, Semigroup(form).at(t)};
}

PositivityReport is_positivity_preserving(const FormMatrix& form, std::span<const double> grid) {
  check_grid(grid);
  PositivityReport report;
  report.times.assign(grid.begin(), grid.end());

  const auto& a = form.matrix();
  const double tol = form.sign_tolerance();
  for (Eigen::Index i = 0; i < a.rows() && report.algebraic; ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (i != j && a(i, j) > tol) {
        report.algebraic = false;
        report.algebraic_witness = PairWitness{static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), a(i, j)};
        break;
      }
    }
  }

  const Semigroup sg(form);
  report.probe_times = probe_times(sg.spectral_radius());
  std::vector<double> all(report.times);
  all.insert(all.end(), report.probe_times.begin(), report.probe_times.end());

  report.min_entry = TimedWitness{0.0, 0, 0, std::numeric_limits<double>::infinity()};
  const double n = static_cast<double>(form.size());
  for (double t : all) {
    const Eigen::MatrixXd s = sg.at(t);
    const auto w = min_entry_of(s, t);
    const double slack =
        64.0 * n * std::numeric_limits<double>::epsilon() * s.cwiseAbs().maxCoeff() + underflow_floor(form.size());
    if (w.value < -slack) report.numerical = false;
    if (w.value < report.min_entry.value) report.min_entry = w;
  }
  report.agree = report.algebraic == report.numerical;
  return report;
}

DominationReport dominates(const FormMatrix& lower, const FormMatrix& upper, std::span<const double> grid,
                           double rel_tol, std::size_t threads) {
  check_grid(grid);
  if (!(lower.domain() == upper.domain())) throw Error(ErrorCode::DomainMismatch, "forms live on different domains");
  if (!(rel_tol >= 0.0)) throw Error(ErrorCode::InvalidArgument, "tolerance must be >= 0");

  DominationReport report;
  report.times.assign(grid.begin(), grid.end());
  report.tolerance = rel_tol;

  // Form-level criterion: D(lower) must be an ideal of D(upper), i.e. every
  // node pinned by the upper form is pinned by the lower one, and the larger
  // form minus the smaller one is entrywise >= 0 on D(lower).
  const bool ideal = std::includes(lower.pinned().begin(), lower.pinned().end(), upper.pinned().begin(),
                                   upper.pinned().end());
  report.form_level = ideal;
  if (ideal) {
    const double tol = kSignTolerance * std::max(lower.max_abs(), upper.max_abs());
    const auto nodes = lower.free_nodes();
    for (auto i : nodes) {
      for (auto j : nodes) {
        const auto ii = static_cast<Eigen::Index>(i);
        const auto jj = static_cast<Eigen::Index>(j);
        if (lower.matrix()(ii, jj) - upper.matrix()(ii, jj) < -tol) report.form_level = false;
      }
    }
  }
  {
    const auto& a = lower.matrix();
    const double tol = lower.sign_tolerance();
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (i != j && a(i, j) > tol) report.positivity = false;
      }
    }
  }

  const Semigroup lo(lower);
  const Semigroup up(upper);
  // Off-stencil couplings act at first order in t while stencil paths of
  // length two act at second order, so short probe times are sampled too.
  report.probe_times = probe_times(std::max(lo.spectral_radius(), up.spectral_radius()));
  std::vector<double> all(report.times);
  all.insert(all.end(), report.probe_times.begin(), report.probe_times.end());
  std::vector<TimedWitness> worst(all.size());
  std::vector<char> violated(all.size(), 0);
  const double floor = underflow_floor(lower.size());
  detail::parallel_for(all.size(), threads, [&](std::size_t k) {
    const double t = all[k];
    const Eigen::MatrixXd sl = lo.at(t);
    const Eigen::MatrixXd su = up.at(t);
    const double scale = std::max(sl.cwiseAbs().maxCoeff(), su.cwiseAbs().maxCoeff());
    const Eigen::MatrixXd excess = sl - su;
    TimedWitness w{t, 0, 0, -std::numeric_limits<double>::infinity()};
    for (Eigen::Index i = 0; i < excess.rows(); ++i) {
      for (Eigen::Index j = 0; j < excess.cols(); ++j) {
        if (excess(i, j) > w.value) w = {t, static_cast<NodeIndex>(i), static_cast<NodeIndex>(j), excess(i, j)};
      }
    }
    worst[k] = w;
    violated[k] = w.value > rel_tol * scale + floor;
  });

  report.worst = worst.front();
  for (std::size_t k = 0; k < all.size(); ++k) {
    if (violated[k]) report.verdict = false;
    if (worst[k].value > report.worst.value) report.worst = worst[k];
  }
  return report;
}

EventualPositivity eventually_positive(const FormMatrix& form, double t_max, double bisection_tol) {
  if (!(t_max > 0.0) || !std::isfinite(t_max)) throw Error(ErrorCode::InvalidTime, "t_max must be positive");
  if (!(bisection_tol > 0.0)) throw Error(ErrorCode::InvalidArgument, "bisection tolerance must be positive");

  EventualPositivity out;
  const Semigroup sg(form);
  const auto& free = sg.free_nodes();
  if (free.empty()) {
    out.reason = "every node is pinned";
    return out;
  }

  const auto& lambda = sg.eigenvalues();
  out.ground_eigenvalue = lambda(0);
  constexpr double kCertTol = 1e-10;
  const double scale = std::max(1.0, sg.spectral_radius());
  const bool simple = lambda.size() == 1 || lambda(1) - lambda(0) > kCertTol * scale;
  Eigen::VectorXd v = sg.eigenvectors().col(0);
  if (v.sum() < 0.0) v = -v;
  const bool positive_vector = v.minCoeff() > kCertTol * v.cwiseAbs().maxCoeff();
  out.perron_certificate = simple && positive_vector;
  if (!out.perron_certificate) {
    out.reason = !simple ? "ground eigenvalue is not simple" : "ground eigenvector changes sign";
    return out;
  }

  const auto free_min = [&](double t) {
    const Eigen::MatrixXd s = sg.at(t);
    double m = std::numeric_limits<double>::infinity();
    for (auto i : free) {
      for (auto j : free) m = std::min(m, s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    }
    return m;
  };

  if (!(free_min(t_max) > 0.0)) {
    out.reason = "not entrywise positive at t_max";
    return out;
  }

  // Coarse scan: geometric from the diffusive time scale 1e-3/rho, plus a
  // uniform grid; then bisect behind the last sampled non-positive time.
  constexpr int kSamples = 64;
  const double t_min = std::min(t_max, 1e-3 / scale);
  std::vector<double> samples;
  for (int k = 0; k <= kSamples; ++k) {
    samples.push_back(std::min(t_max, t_min * std::pow(t_max / t_min, static_cast<double>(k) / kSamples)));
    samples.push_back(t_max * static_cast<double>(k + 1) / (kSamples + 1));
  }
  std::sort(samples.begin(), samples.end());
  samples.erase(std::unique(samples.begin(), samples.end()), samples.end());

  std::optional<std::size_t> last_bad;
  for (std::size_t k = 0; k < samples.size(); ++k) {
    if (!(free_min(samples[k]) > 0.0)) last_bad = k;
  }
  out.verdict = true;
  if (!last_bad) {
    out.t_star = 0.0;
    out.reason = "positive at every sampled time";
    return out;
  }
  double lo = samples[*last_bad];
  double hi = samples[*last_bad + 1];
  while (hi - lo > bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (free_min(mid) > 0.0) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  out.t_star = hi;
  out.reason = "positive from t_star on";
  return out;
}

std::vector<std::pair<double, double>> min_entry_profile(const FormMatrix& form, std::span<const double> grid,
                                                         std::size_t threads) {
  check_grid(grid);
  const Semigroup sg(form);
  std::vector<std::pair<double, double>> out(grid.size());
  detail::parallel_for(grid.size(), threads, [&](std::size_t k) {
    out[k] = {grid[k], sg.at(grid[k]).minCoeff()};
  });
  return out;
}

}  // namespace dflab
