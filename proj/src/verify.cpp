#include "dflab/verify.hpp"

#include <algorithm>
#include <cmath>

#include "dflab/error.hpp"

namespace dflab {

const char* to_string(ExtractionVerdict v) noexcept {
  switch (v) {
    case ExtractionVerdict::Success: return "Success";
    case ExtractionVerdict::NonlocalCoupling: return "NonlocalCoupling";
    case ExtractionVerdict::NonMarkovian: return "NonMarkovian";
    case ExtractionVerdict::EdgePerturbation: return "EdgePerturbation";
    case ExtractionVerdict::InteriorPerturbation: return "InteriorPerturbation";
    case ExtractionVerdict::NegativeMeasure: return "NegativeMeasure";
  }
  return "Unknown";
}

const char* to_string(LocalityOutcome v) noexcept {
  switch (v) {
    case LocalityOutcome::Local: return "Local";
    case LocalityOutcome::NotApplicable: return "NotApplicable";
    case LocalityOutcome::TheoremViolation: return "TheoremViolation";
  }
  return "Unknown";
}

SandwichReport check_sandwich(const FormMatrix& form, std::span<const double> grid, double rel_tol,
                              std::size_t threads) {
  const auto& domain = form.domain_ptr();
  SandwichReport out;
  out.lower = dominates(dirichlet_form(domain), form, grid, rel_tol, threads);
  out.upper = dominates(form, neumann_form(domain), grid, rel_tol, threads);
  out.verdict = out.lower.verdict && out.upper.verdict;
  return out;
}

MeasureExtraction extract_boundary_measure(const FormMatrix& form) {
  const Domain& d = form.domain();
  const FormMatrix neumann = neumann_form(form.domain_ptr());
  const Eigen::MatrixXd diff = form.matrix() - neumann.matrix();
  const double tol = kSignTolerance * std::max(form.max_abs(), neumann.max_abs());
  const auto free = form.free_nodes();
  const auto at = [](const Eigen::MatrixXd& m, NodeIndex i, NodeIndex j) {
    return m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  };

  MeasureExtraction out;
  const auto fail_pair = [&out](ExtractionVerdict v, NodeIndex i, NodeIndex j, double value) {
    out.verdict = v;
    out.pair = PairWitness{i, j, value};
    out.value = value;
    return out;
  };
  const auto fail_node = [&out](ExtractionVerdict v, NodeIndex i, double value) {
    out.verdict = v;
    out.node = i;
    out.value = value;
    return out;
  };

  for (auto i : free) {
    for (auto j : free) {
      if (j <= i || d.adjacent(i, j)) continue;
      if (std::abs(at(diff, i, j)) > tol) return fail_pair(ExtractionVerdict::NonlocalCoupling, i, j, at(form.matrix(), i, j));
    }
  }
  if (const auto m = is_markovian(form); !m.holds) {
    return fail_pair(ExtractionVerdict::NonMarkovian, m.witness->i, m.witness->j, m.witness->value);
  }
  for (auto i : free) {
    for (auto j : free) {
      if (j <= i || !d.adjacent(i, j)) continue;
      if (std::abs(at(diff, i, j)) > tol) return fail_pair(ExtractionVerdict::EdgePerturbation, i, j, at(diff, i, j));
    }
  }
  for (auto p : form.pinned()) {
    if (!d.is_boundary(p)) return fail_node(ExtractionVerdict::InteriorPerturbation, p, BoundaryMeasure::kInfinite);
  }
  for (auto i : free) {
    if (!d.is_boundary(i) && std::abs(at(diff, i, i)) > tol) {
      return fail_node(ExtractionVerdict::InteriorPerturbation, i, at(diff, i, i));
    }
  }
  for (auto i : free) {
    if (d.is_boundary(i) && at(diff, i, i) < -tol) return fail_node(ExtractionVerdict::NegativeMeasure, i, at(diff, i, i));
  }

  std::vector<double> mu(d.boundary().size());
  out.beta.resize(mu.size());
  for (std::size_t k = 0; k < mu.size(); ++k) {
    const auto node = d.boundary()[k];
    mu[k] = form.is_pinned(node) ? BoundaryMeasure::kInfinite : std::max(0.0, at(diff, node, node));
    out.beta[k] = mu[k] / d.sigma()[k];
  }
  out.mu = BoundaryMeasure(std::move(mu));
  return out;
}

CharacterizationReport verify_characterization(const DomainPtr& domain, const BoundaryMeasure& mu,
                                               std::span<const double> grid, double rel_tol) {
  const FormMatrix form = robin_form(domain, mu);
  CharacterizationReport out;
  out.sandwich = check_sandwich(form, grid, rel_tol);
  out.forward = out.sandwich.verdict;
  out.extraction = extract_boundary_measure(form);
  if (out.extraction.verdict != ExtractionVerdict::Success) return out;

  const auto& got = out.extraction.mu;
  out.pinned_match = true;
  for (std::size_t k = 0; k < mu.size(); ++k) {
    if (mu.is_finite_at(k) != got.is_finite_at(k)) {
      out.pinned_match = false;
    } else if (mu.is_finite_at(k)) {
      out.max_measure_error = std::max(out.max_measure_error, std::abs(mu[k] - got[k]));
    }
  }
  out.reverse = out.pinned_match && out.max_measure_error <= form.sign_tolerance();
  return out;
}

LocalityReport locality_from_domination(const FormMatrix& form, std::span<const double> grid, double rel_tol) {
  LocalityReport out;
  out.tolerance = form.sign_tolerance();
  const auto sign = is_markovian(form);
  out.markovian = sign.holds;
  if (!out.markovian) {
    out.failed_premise = "markovian";
    out.markovian_witness = sign.witness;
    return out;
  }
  out.domination = dominates(form, neumann_form(form.domain_ptr()), grid, rel_tol);
  if (!out.domination.verdict) {
    out.failed_premise = "domination";
    return out;
  }

  // Both premises hold: off the stencil, the gap to the Neumann form gives
  // A_ij >= 0 and Markovianity gives A_ij <= 0.
  const Domain& d = form.domain();
  const auto free = form.free_nodes();
  bool certified = true;
  for (auto i : free) {
    for (auto j : free) {
      if (j <= i || d.adjacent(i, j)) continue;
      const double v = form.matrix()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      ++out.pairs_checked;
      out.max_offstencil = std::max(out.max_offstencil, std::abs(v));
      if (std::abs(v) > out.tolerance) certified = false;
    }
  }
  const auto loc = classify_locality(form);
  if (loc.stencil_local && certified) {
    out.outcome = LocalityOutcome::Local;
  } else {
    out.outcome = LocalityOutcome::TheoremViolation;
    out.witness = loc.witness;
  }
  return out;
}

bool Aw45Report::matches_expected() const {
  const auto n1 = n - 1;
  return !positivity.algebraic && !positivity.numerical && eventual.verdict && eventual.t_star.has_value() &&
         *eventual.t_star > 0.0 && !sandwich.verdict && !sandwich.lower.verdict && !locality.stencil_local &&
         locality.witness && locality.witness->i == 0 && locality.witness->j == n1 &&
         extraction.verdict == ExtractionVerdict::NonlocalCoupling;
}

Aw45Report example_aw45(std::size_t n, std::span<const double> grid, const std::optional<Eigen::MatrixXd>& b,
                        double t_max) {
  const auto domain = share(Domain::interval(n, 1.0));
  Aw45Report out;
  out.n = n;
  out.h = 1.0 / static_cast<double>(n - 1);
  out.b = b.value_or(Eigen::MatrixXd::Ones(2, 2));
  const FormMatrix form = nonlocal_robin_form(domain, BoundaryOperator(out.b));

  const auto last = static_cast<Eigen::Index>(n - 1);
  const Semigroup sg(form);
  out.endpoint_entry = sg.at(out.probe_time)(0, last);
  out.first_order = -out.probe_time * form.matrix()(0, last) / domain->mass()[0];

  out.positivity = is_positivity_preserving(form, grid);
  out.profile = min_entry_profile(form, grid);
  out.eventual = eventually_positive(form, t_max);
  out.sandwich = check_sandwich(form, grid);
  out.locality = classify_locality(form);
  out.extraction = extract_boundary_measure(form);
  return out;
}

}  // namespace dflab
