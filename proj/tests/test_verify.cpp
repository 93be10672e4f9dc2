#include <cmath>
#include <numbers>

#include "dflab/error.hpp"
#include "dflab/verify.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dflab;
using testutil::mat;

namespace {
const std::vector<double> kGrid{1e-3, 1e-2, 0.1, 1.0, 10.0};
}

TEST_CASE("sandwich") {
  const auto p = testutil::unit_path();
  CHECK(check_sandwich(testutil::robin12(p), kGrid).verdict);
  CHECK(check_sandwich(neumann_form(p), kGrid).verdict);
  CHECK(check_sandwich(dirichlet_form(p), kGrid).verdict);

  const auto aw = check_sandwich(testutil::aw_form(p), kGrid);
  CHECK_FALSE(aw.verdict);
  CHECK_FALSE(aw.lower.verdict);
  // the lower-bound witness is the endpoint pair, where the Dirichlet kernel vanishes
  CHECK(aw.lower.worst.i + aw.lower.worst.j == 2);
  CHECK(aw.lower.worst.i != aw.lower.worst.j);
}

TEST_CASE("measure extraction") {
  const auto p = testutil::unit_path();
  const auto r = extract_boundary_measure(testutil::robin12(p));
  CHECK(r.verdict == ExtractionVerdict::Success);
  CHECK(r.mu == BoundaryMeasure({1.0, 2.0}));
  CHECK(r.beta == std::vector<double>{1.0, 2.0});

  const auto aw = extract_boundary_measure(testutil::aw_form(p));
  CHECK(aw.verdict == ExtractionVerdict::NonlocalCoupling);
  REQUIRE(aw.pair);
  CHECK(aw.pair->i == 0);
  CHECK(aw.pair->j == 2);

  Eigen::MatrixXd a = neumann_form(p).matrix();
  a(1, 1) += 0.5;
  const auto bump = extract_boundary_measure(FormMatrix(p, a));
  CHECK(bump.verdict == ExtractionVerdict::InteriorPerturbation);
  CHECK(bump.node == std::optional<NodeIndex>{1});

  Eigen::MatrixXd neg = neumann_form(p).matrix();
  neg(0, 0) -= 0.25;
  CHECK(extract_boundary_measure(FormMatrix(p, neg)).verdict == ExtractionVerdict::NonMarkovian);

  // boundary diagonal lowered and compensated through a weaker edge
  const auto d = share(Domain::interval(4, 1.0));
  Eigen::MatrixXd b = robin_form(d, BoundaryMeasure({1.0, 1.0})).matrix();
  b(0, 0) -= 1.5;
  b(0, 1) += 0.5;
  b(1, 0) += 0.5;
  CHECK(extract_boundary_measure(FormMatrix(d, b)).verdict == ExtractionVerdict::EdgePerturbation);

  Eigen::MatrixXd e = neumann_form(p).matrix();
  e(0, 1) += 0.25;
  e(1, 0) += 0.25;
  const auto edge = extract_boundary_measure(FormMatrix(p, e));
  CHECK(edge.verdict == ExtractionVerdict::EdgePerturbation);
  REQUIRE(edge.pair);
  CHECK(edge.pair->i == 0);
  CHECK(edge.pair->j == 1);

  const auto pinned = extract_boundary_measure(robin_form(p, BoundaryMeasure({BoundaryMeasure::kInfinite, 2.0})));
  CHECK(pinned.verdict == ExtractionVerdict::Success);
  CHECK(pinned.mu == BoundaryMeasure({BoundaryMeasure::kInfinite, 2.0}));
}

TEST_CASE("characterization round trip") {
  const auto p = testutil::unit_path();
  for (const auto& mu : {BoundaryMeasure({1.0, 2.0}), BoundaryMeasure({BoundaryMeasure::kInfinite, 2.0}),
                         BoundaryMeasure({0.0, 0.0})}) {
    const auto r = verify_characterization(p, mu, kGrid);
    CHECK(r.forward);
    CHECK(r.reverse);
    CHECK(r.pinned_match);
    CHECK(r.passed());
    CHECK(r.max_measure_error <= 1e-12);
  }
  const auto pinned = verify_characterization(p, BoundaryMeasure({BoundaryMeasure::kInfinite, 2.0}), kGrid);
  CHECK(pinned.extraction.mu[0] == BoundaryMeasure::kInfinite);
  const auto zero = verify_characterization(p, BoundaryMeasure({0.0, 0.0}), kGrid);
  CHECK(zero.extraction.mu == BoundaryMeasure({0.0, 0.0}));

  const auto rect = share(Domain::rectangle(5, 4, 1.0, 1.0));
  std::vector<double> mu(rect->boundary().size());
  for (std::size_t k = 0; k < mu.size(); ++k) mu[k] = (k % 3 == 0) ? BoundaryMeasure::kInfinite : 0.1 * k;
  CHECK(verify_characterization(rect, BoundaryMeasure(mu), kGrid).passed());
}

TEST_CASE("locality from domination") {
  const auto p = testutil::unit_path();
  const auto r = locality_from_domination(testutil::robin12(p), kGrid);
  CHECK(r.outcome == LocalityOutcome::Local);
  CHECK(r.pairs_checked == 1);
  CHECK(r.max_offstencil == 0.0);

  const auto aw = locality_from_domination(testutil::aw_form(p), kGrid);
  CHECK(aw.outcome == LocalityOutcome::NotApplicable);
  CHECK(aw.failed_premise == "markovian");
  REQUIRE(aw.markovian_witness);
  CHECK(aw.markovian_witness->j == 2);

  Eigen::MatrixXd a = neumann_form(p).matrix();
  a(0, 2) -= 0.5;
  a(2, 0) -= 0.5;
  a(0, 0) += 0.5;
  a(2, 2) += 0.5;
  const FormMatrix coupled(p, a);
  CHECK(is_markovian(coupled).holds);
  CHECK(ouhabaz_gap(coupled, neumann_form(p)).gap(0, 2) == -0.5);
  const auto c = locality_from_domination(coupled, kGrid);
  CHECK(c.outcome == LocalityOutcome::NotApplicable);
  CHECK(c.failed_premise == "domination");
}

TEST_CASE("exhaustive off-stencil perturbations on small grids falsify a premise") {
  for (std::size_t n : {3, 4, 5, 6}) {
    const auto d = share(Domain::interval(n, 1.0));
    const auto base = robin_form(d, BoundaryMeasure({0.5, 1.5}));
    for (NodeIndex i = 0; i < n; ++i) {
      for (NodeIndex j = i + 1; j < n; ++j) {
        if (d->adjacent(i, j)) continue;
        for (double eps : {0.1, -0.1}) {
          Eigen::MatrixXd a = base.matrix();
          a(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) += eps;
          a(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) += eps;
          const auto r = locality_from_domination(FormMatrix(d, a), kGrid);
          INFO("n=" << n << " pair (" << i << "," << j << ") eps=" << eps);
          CHECK(r.outcome == LocalityOutcome::NotApplicable);
        }
      }
    }
  }
}

TEST_CASE("tangential edge on a rectangle perimeter is sandwiched but not robin") {
  // Raising a boundary-boundary conductance keeps both bounds: the Dirichlet
  // form never sees perimeter edges, and the gap to the Neumann form stays
  // entrywise nonnegative. Extraction reports an edge perturbation, so the
  // discrete sandwich does not force a Robin form on 2D grids.
  const auto d = share(Domain::rectangle(4, 4, 1.0, 1.0));
  Eigen::MatrixXd a = neumann_form(d).matrix();
  a(0, 1) += 0.1;
  a(1, 0) += 0.1;
  const FormMatrix f(d, a);
  CHECK(is_markovian(f).holds);
  CHECK(check_sandwich(f, kGrid).verdict);
  CHECK(extract_boundary_measure(f).verdict == ExtractionVerdict::EdgePerturbation);
}

TEST_CASE("two-point nonlocal example") {
  for (std::size_t n : {3, 33}) {
    const auto r = example_aw45(n, default_time_grid());
    INFO("n = " << n);
    CHECK(r.matches_expected());
    CHECK_FALSE(r.positivity.algebraic);
    CHECK(r.endpoint_entry < 0.0);
    CHECK(r.eventual.verdict);
    REQUIRE(r.eventual.t_star);
    CHECK(*r.eventual.t_star > 0.0);
    CHECK_FALSE(r.sandwich.lower.verdict);
    CHECK_FALSE(r.locality.stencil_local);
    CHECK(r.extraction.verdict == ExtractionVerdict::NonlocalCoupling);
  }
  const auto r3 = example_aw45(3, std::vector<double>{0.01});
  CHECK(r3.profile.size() == 1);
  CHECK(r3.profile[0].second < 0.0);
  CHECK(r3.endpoint_entry == doctest::Approx(oracle::semigroup_taylor(testutil::aw_form(share(Domain::interval(3, 1.0))), 0.01)(0, 2)));

  const auto flipped = example_aw45(5, default_time_grid(), mat({{1, -1}, {-1, 1}}));
  CHECK(flipped.positivity.algebraic);
  CHECK(flipped.positivity.numerical);
  CHECK_FALSE(flipped.locality.stencil_local);
  CHECK_FALSE(flipped.matches_expected());

  CHECK_THROWS_AS(example_aw45(2, default_time_grid()), Error);
}

TEST_CASE("sweeps") {
  SweepOptions opt;
  opt.trials = 12;
  opt.seed = 9;
  opt.max_1d = 17;
  opt.max_2d = 6;
  const auto planted = sweep_random(opt);
  CHECK(planted.passes == 12);
  CHECK(planted.failures().empty());

  opt.generator = SweepGenerator::OffStencilPerturbed;
  const auto perturbed = sweep_random(opt);
  CHECK(perturbed.expected_falsified == 12);
  CHECK(perturbed.failures().empty());

  opt.generator = SweepGenerator::MarkovianRandom;
  opt.trials = 30;
  const auto markov = sweep_random(opt);
  CHECK(markov.theorem_violations == 0);
  CHECK(markov.failures().empty());
  CHECK(markov.premises_held > 0);

  opt.trials = 0;
  CHECK_THROWS_AS(sweep_random(opt), Error);

  CHECK(parse_generator("planted-measure") == SweepGenerator::PlantedMeasure);
  CHECK_FALSE(parse_generator("nope").has_value());
}

TEST_CASE("sweep results do not depend on the thread count") {
  SweepOptions opt;
  opt.trials = 16;
  opt.seed = 3;
  opt.max_1d = 17;
  opt.max_2d = 6;
  opt.generator = SweepGenerator::MarkovianRandom;
  const auto a = sweep_random(opt);
  opt.threads = 5;
  const auto b = sweep_random(opt);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (std::size_t k = 0; k < a.outcomes.size(); ++k) {
    CHECK(a.outcomes[k].status == b.outcomes[k].status);
    CHECK(a.outcomes[k].domain == b.outcomes[k].domain);
    CHECK(a.outcomes[k].witness == b.outcomes[k].witness);
  }
}

TEST_CASE("robin roots match the independent oracle") {
  for (double beta : {0.25, 1.0, 3.0}) {
    for (int k = 1; k <= 4; ++k) {
      CHECK(robin_root(beta, static_cast<std::size_t>(k)) == doctest::Approx(oracle::robin_root(beta, k)).epsilon(1e-11));
    }
  }
  CHECK(robin_root(0.0, 1) == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(robin_root(1.0, 0), Error);
}

TEST_CASE("eigenvalue convergence") {
  const std::vector<std::size_t> sizes{17, 33, 65, 129};
  const auto neumann = eigen_convergence(BoundaryKind::Neumann, sizes, 1);
  for (std::size_t k = 1; k < neumann.size(); ++k) {
    REQUIRE(neumann[k].observed_order);
    CHECK(*neumann[k].observed_order >= 1.8);
    CHECK(*neumann[k].observed_order <= 2.2);
  }
  CHECK(neumann[0].reference == doctest::Approx(std::numbers::pi * std::numbers::pi));

  const auto robin = eigen_convergence(BoundaryKind::Robin, sizes, 1, 1.0);
  const double kappa = oracle::robin_root(1.0, 1);
  for (const auto& row : robin) CHECK(row.reference == doctest::Approx(kappa * kappa).epsilon(1e-12));
  CHECK(*robin.back().observed_order == doctest::Approx(2.0).epsilon(0.1));

  const auto ground = eigen_convergence(BoundaryKind::Neumann, sizes, 0);
  for (const auto& row : ground) {
    const double rho = 4.0 * (row.n - 1) * (row.n - 1) * 2.0;  // bound on the spectral radius
    CHECK(std::abs(row.lambda) <= 16.0 * std::numeric_limits<double>::epsilon() * rho);
    CHECK_FALSE(row.observed_order.has_value());
  }

  const std::vector<std::size_t> sizes3{17, 33, 65};
  const auto k2 = eigen_convergence(BoundaryKind::Neumann, sizes3, 2);
  CHECK(*k2.back().observed_order >= 1.8);
  CHECK(*k2.back().observed_order <= 2.2);

  CHECK_THROWS_AS(eigen_convergence(BoundaryKind::Dirichlet, sizes, 0), Error);
  CHECK_THROWS_AS(eigen_convergence(BoundaryKind::Neumann, std::vector<std::size_t>{33, 17}, 1), Error);
  CHECK_THROWS_AS(eigen_convergence(BoundaryKind::Neumann, std::vector<std::size_t>{5}, 9), Error);
}
