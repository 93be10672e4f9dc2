#include <algorithm>
#include <sstream>

#include "dflab/error.hpp"
#include "dflab/verify.hpp"
#include "numeric.hpp"

namespace dflab {

const char* to_string(SweepGenerator g) noexcept {
  switch (g) {
    case SweepGenerator::PlantedMeasure: return "planted-measure";
    case SweepGenerator::MarkovianRandom: return "markovian-random";
    case SweepGenerator::OffStencilPerturbed: return "off-stencil-perturbed";
  }
  return "unknown";
}

std::optional<SweepGenerator> parse_generator(std::string_view name) {
  for (auto g : {SweepGenerator::PlantedMeasure, SweepGenerator::MarkovianRandom, SweepGenerator::OffStencilPerturbed}) {
    if (name == to_string(g)) return g;
  }
  return std::nullopt;
}

std::vector<TrialOutcome> SweepReport::failures() const {
  std::vector<TrialOutcome> out;
  std::copy_if(outcomes.begin(), outcomes.end(), std::back_inserter(out),
               [](const TrialOutcome& o) { return o.status == "fail"; });
  return out;
}

namespace {

constexpr double kPerturbation = 0.1;

std::string describe(const Domain& d) {
  switch (d.kind()) {
    case DomainKind::Interval: return "interval n=" + std::to_string(d.size());
    case DomainKind::Rectangle:
      return "rectangle " + std::to_string(d.grid().nx) + "x" + std::to_string(d.grid().ny);
    case DomainKind::Graph: return "graph n=" + std::to_string(d.size());
  }
  return "domain";
}

std::string pair_text(NodeIndex i, NodeIndex j, double v) {
  std::ostringstream s;
  s.precision(17);
  s << "(" << i << "," << j << ") " << v;
  return s.str();
}

std::string timed_text(const TimedWitness& w) {
  std::ostringstream s;
  s.precision(17);
  s << "t=" << w.t << " (" << w.i << "," << w.j << ") " << w.value;
  return s.str();
}

DomainPtr random_domain(detail::Rng& rng, const SweepOptions& opt) {
  if (rng.bernoulli(0.5)) {
    const auto n = rng.integer(3, std::max<std::size_t>(3, opt.max_1d));
    return share(Domain::interval(n, rng.uniform(0.5, 2.0)));
  }
  const auto top = std::max<std::size_t>(3, opt.max_2d);
  const auto nx = rng.integer(3, top);
  const auto ny = rng.integer(3, top);
  return share(Domain::rectangle(nx, ny, rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)));
}

/// mu_k = +inf with probability 0.1, 0 with probability 0.1, else U[0,2].
BoundaryMeasure random_measure(detail::Rng& rng, const Domain& d) {
  std::vector<double> mu(d.boundary().size());
  for (auto& m : mu) {
    const double r = rng.uniform();
    if (r < 0.1) {
      m = BoundaryMeasure::kInfinite;
    } else if (r < 0.2) {
      m = 0.0;
    } else {
      m = rng.uniform(0.0, 2.0);
    }
  }
  return BoundaryMeasure(std::move(mu));
}

std::optional<std::pair<NodeIndex, NodeIndex>> random_offstencil_pair(detail::Rng& rng, const FormMatrix& form) {
  const auto free = form.free_nodes();
  std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
  for (auto i : free) {
    for (auto j : free) {
      if (i < j && !form.domain().adjacent(i, j)) pairs.emplace_back(i, j);
    }
  }
  if (pairs.empty()) return std::nullopt;
  return pairs[rng.integer(0, pairs.size() - 1)];
}

FormMatrix with_coupling(const FormMatrix& form, NodeIndex i, NodeIndex j, double delta) {
  Eigen::MatrixXd a = form.matrix();
  a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += delta;
  a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += delta;
  return FormMatrix(form.domain_ptr(), std::move(a), form.pinned());
}

/// A = A_N + G with 0 <= G_e <= w_e on edges and G_ii in [0,2]: Markovian
/// and Neumann-dominated by construction. One trial in four keeps only the
/// boundary diagonal (a planted Robin form); one in two then gets an extra
/// off-stencil jump in (0,1], which breaks domination.
FormMatrix random_markovian(detail::Rng& rng, const DomainPtr& domain) {
  const Domain& d = *domain;
  Eigen::MatrixXd a = neumann_form(domain).matrix();
  const bool robin_only = rng.bernoulli(0.25);
  for (const auto& e : d.edges()) {
    const double g = robin_only ? 0.0 : e.conductance * rng.uniform();
    a(static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j)) += g;
    a(static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i)) += g;
  }
  for (NodeIndex i = 0; i < d.size(); ++i) {
    const double g = (robin_only && !d.is_boundary(i)) ? 0.0 : rng.uniform(0.0, 2.0);
    a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += g;
  }
  FormMatrix form(domain, std::move(a));
  if (rng.bernoulli(0.5)) {
    if (const auto p = random_offstencil_pair(rng, form)) {
      const double jump = 1.0 - rng.uniform();
      return with_coupling(form, p->first, p->second, -jump);
    }
  }
  return form;
}

TrialOutcome run_markovian_trial(detail::Rng& rng, const DomainPtr& domain, const SweepOptions& opt) {
  TrialOutcome out;
  out.domain = describe(*domain);
  const FormMatrix form = random_markovian(rng, domain);

  const auto pos = is_positivity_preserving(form, opt.times);
  if (!pos.agree) {
    out.status = "fail";
    out.stage = "positivity-equivalence";
    out.witness = timed_text(pos.min_entry);
    return out;
  }
  const auto loc = locality_from_domination(form, opt.times, opt.rel_tol);
  out.premises_held = loc.outcome != LocalityOutcome::NotApplicable;
  if (loc.outcome == LocalityOutcome::TheoremViolation) {
    out.theorem_violation = true;
    out.status = "fail";
    out.stage = "locality";
    out.witness = loc.witness ? pair_text(loc.witness->i, loc.witness->j, loc.witness->weight) : "certificate";
    return out;
  }
  const auto sandwich = check_sandwich(form, opt.times, opt.rel_tol);
  const auto extraction = extract_boundary_measure(form);
  const bool success = extraction.verdict == ExtractionVerdict::Success;
  if (sandwich.verdict != success) {
    out.status = "fail";
    out.stage = "characterization";
    out.witness = std::string("sandwich=") + (sandwich.verdict ? "true" : "false") +
                  " extraction=" + to_string(extraction.verdict);
    return out;
  }
  out.status = "pass";
  return out;
}

TrialOutcome run_perturbed_trial(detail::Rng& rng, const DomainPtr& domain, const SweepOptions& opt) {
  TrialOutcome out;
  out.domain = describe(*domain);
  const FormMatrix base = robin_form(domain, random_measure(rng, *domain));
  const auto p = random_offstencil_pair(rng, base);
  if (!p) {
    out.status = "fail";
    out.stage = "setup";
    out.witness = "no off-stencil pair among free nodes";
    return out;
  }
  const double sign = rng.bernoulli(0.5) ? 1.0 : -1.0;
  const FormMatrix form = with_coupling(base, p->first, p->second, sign * kPerturbation);
  out.witness = pair_text(p->first, p->second, sign * kPerturbation);

  if (const auto m = is_markovian(form); !m.holds) {
    out.status = "expected-falsified";
    out.stage = "markovian";
    return out;
  }
  const auto sandwich = check_sandwich(form, opt.times, opt.rel_tol);
  if (!sandwich.verdict) {
    out.status = "expected-falsified";
    out.stage = sandwich.upper.verdict ? "sandwich-lower" : "sandwich-upper";
    return out;
  }
  out.status = "fail";
  out.stage = "unfalsified";
  return out;
}

}  // namespace

TrialOutcome run_planted_trial(const DomainPtr& domain, const BoundaryMeasure& mu, std::span<const double> grid,
                               double rel_tol) {
  TrialOutcome out;
  out.domain = describe(*domain);
  const auto report = verify_characterization(domain, mu, grid, rel_tol);
  if (!report.sandwich.lower.verdict) {
    out.stage = "sandwich-lower";
    out.witness = timed_text(report.sandwich.lower.worst);
  } else if (!report.sandwich.upper.verdict) {
    out.stage = "sandwich-upper";
    out.witness = timed_text(report.sandwich.upper.worst);
  } else if (report.extraction.verdict != ExtractionVerdict::Success) {
    out.stage = "extract";
    out.witness = to_string(report.extraction.verdict);
  } else if (!report.reverse) {
    out.stage = report.pinned_match ? "measure-error" : "pinned-set";
    std::ostringstream s;
    s.precision(17);
    s << report.max_measure_error;
    out.witness = s.str();
  }
  out.status = report.passed() ? "pass" : "fail";
  return out;
}

SweepReport sweep_random(const SweepOptions& options) {
  if (options.trials == 0) throw Error(ErrorCode::InvalidArgument, "sweep needs at least one trial");
  if (options.times.empty()) throw Error(ErrorCode::InvalidArgument, "sweep needs a nonempty time grid");

  SweepReport report;
  report.seed = options.seed;
  report.trials = options.trials;
  report.generator = options.generator;
  report.outcomes.resize(options.trials);

  detail::parallel_for(options.trials, options.threads, [&](std::size_t k) {
    detail::Rng rng(detail::trial_seed(options.seed, k));
    const DomainPtr domain = options.domain ? options.domain : random_domain(rng, options);
    TrialOutcome outcome;
    try {
      switch (options.generator) {
        case SweepGenerator::PlantedMeasure:
          outcome = run_planted_trial(domain, random_measure(rng, *domain), options.times, options.rel_tol);
          break;
        case SweepGenerator::MarkovianRandom:
          outcome = run_markovian_trial(rng, domain, options);
          break;
        case SweepGenerator::OffStencilPerturbed:
          outcome = run_perturbed_trial(rng, domain, options);
          break;
      }
    } catch (const Error& e) {
      outcome.domain = describe(*domain);
      outcome.status = "fail";
      outcome.stage = "error";
      outcome.witness = std::string(to_string(e.code())) + ": " + e.what();
    }
    outcome.trial = k;
    report.outcomes[k] = std::move(outcome);
  });

  for (const auto& o : report.outcomes) {
    if (o.status != "fail") ++report.passes;
    if (o.status == "expected-falsified") ++report.expected_falsified;
    if (o.premises_held) ++report.premises_held;
    if (o.theorem_violation) ++report.theorem_violations;
  }
  return report;
}

}  // namespace dflab
