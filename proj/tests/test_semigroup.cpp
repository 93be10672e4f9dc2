#include <cmath>
#include <random>

#include "dflab/error.hpp"
#include "dflab/semigroup.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace dflab;
using testutil::mat;

TEST_CASE("semigroup at t = 0 and for the zero form") {
  const auto d = share(Domain::interval(7, 1.0));
  const auto f = robin_form(d, BoundaryMeasure({BoundaryMeasure::kInfinite, 1.0}));
  const auto s = expm(f, 0.0).s;
  Eigen::MatrixXd want = Eigen::MatrixXd::Identity(7, 7);
  want(0, 0) = 0.0;
  CHECK(s == want);

  const FormMatrix zero(d, Eigen::MatrixXd::Zero(7, 7));
  for (double t : {0.0, 0.3, 50.0}) testutil::check_matrix(expm(zero, t).s, Eigen::MatrixXd::Identity(7, 7), 1e-15);
}

TEST_CASE("neumann path converges to the constant projection") {
  const auto s = expm(neumann_form(testutil::unit_path()), 40.0).s;
  testutil::check_matrix(s, Eigen::MatrixXd::Constant(3, 3, 1.0 / 3.0), 1e-14);
}

TEST_CASE("spectral route agrees with the Pade oracle") {
  const auto p = testutil::unit_path();
  const auto r = share(Domain::rectangle(6, 5, 1.0, 0.8));
  const std::vector<FormMatrix> forms{
      neumann_form(p), testutil::robin12(p), testutil::aw_form(p), dirichlet_form(r),
      robin_form(r, BoundaryMeasure(std::vector<double>(r->boundary().size(), 0.7))),
      robin_form(share(Domain::interval(12, 2.0)), BoundaryMeasure({BoundaryMeasure::kInfinite, 3.0}))};
  for (const auto& f : forms) {
    for (double t : {1e-3, 1e-2, 0.1, 1.0}) {
      INFO("t = " << t);
      CHECK(oracle::rel_diff(expm(f, t).s, oracle::semigroup_pade(f, t)) <= 1e-12);
    }
  }
}

TEST_CASE("semigroup law and markovian row sums") {
  const auto d = share(Domain::interval(25, 1.0));
  const auto f = neumann_form(d);
  const Semigroup sg(f);
  for (double s : {0.001, 0.05}) {
    for (double t : {0.002, 0.3}) {
      CHECK(oracle::rel_diff(sg.at(s) * sg.at(t), sg.at(s + t)) <= 1e-10);
    }
  }
  for (double t : {0.01, 1.0, 10.0}) {
    const Eigen::VectorXd rs = sg.at(t).rowwise().sum();
    CHECK((rs.array() - 1.0).abs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("invalid time") {
  const auto f = neumann_form(testutil::unit_path());
  bool raised = false;
  try {
    expm(f, -1.0);
  } catch (const Error& e) {
    raised = e.code() == ErrorCode::InvalidTime;
  }
  CHECK(raised);
  CHECK_THROWS_AS(expm(f, std::nan("")), Error);
}

TEST_CASE("positivity verdicts") {
  const auto p = testutil::unit_path();
  const auto grid = default_time_grid();
  const auto n = is_positivity_preserving(neumann_form(p), grid);
  CHECK(n.algebraic);
  CHECK(n.numerical);
  CHECK(n.agree);
  CHECK(is_positivity_preserving(testutil::robin12(p), grid).agree);

  const auto aw = is_positivity_preserving(testutil::aw_form(p), grid);
  CHECK_FALSE(aw.algebraic);
  CHECK_FALSE(aw.numerical);
  CHECK(aw.agree);
  REQUIRE(aw.algebraic_witness);
  CHECK(aw.algebraic_witness->i == 0);
  CHECK(aw.algebraic_witness->j == 2);
}

TEST_CASE("endpoint entry against the Taylor oracle") {
  const auto f = testutil::aw_form(testutil::unit_path());
  const double t = 0.01;
  const double got = expm(f, t).s(0, 2);
  const double taylor = oracle::semigroup_taylor(f, t)(0, 2);
  CHECK(got == doctest::Approx(taylor).epsilon(1e-12));
  CHECK(got < 0.0);
  CHECK(std::abs(got - (-t)) <= 0.1 * t);
  CHECK(got == doctest::Approx(-0.0099).epsilon(0.1));
}

TEST_CASE("domination on the unit path") {
  const auto p = testutil::unit_path();
  const std::vector<double> grid{0.01, 0.1, 1.0, 10.0};
  const auto r = testutil::robin12(p);
  const auto n = neumann_form(p);
  const auto d = dirichlet_form(p);

  const auto rn = dominates(r, n, grid);
  CHECK(rn.verdict);
  CHECK(rn.form_level);
  CHECK(dominates(d, r, grid).verdict);
  CHECK(dominates(d, r, grid).form_level);

  const auto nr = dominates(n, r, grid);
  CHECK_FALSE(nr.verdict);
  CHECK_FALSE(nr.form_level);
  const std::vector<double> one{1.0};
  const auto at1 = dominates(n, r, one);
  CHECK_FALSE(at1.verdict);
  CHECK(at1.worst.t == 1.0);
  CHECK(at1.worst.i == at1.worst.j);

  // entrywise check of the witness against the oracle
  const Eigen::MatrixXd diff = oracle::semigroup_pade(n, 1.0) - oracle::semigroup_pade(r, 1.0);
  CHECK(diff(static_cast<Eigen::Index>(at1.worst.i), static_cast<Eigen::Index>(at1.worst.j)) ==
        doctest::Approx(at1.worst.value).epsilon(1e-10));

  bool mismatch = false;
  try {
    dominates(n, neumann_form(share(Domain::interval(4, 1.0))), grid);
  } catch (const Error& e) {
    mismatch = e.code() == ErrorCode::DomainMismatch;
  }
  CHECK(mismatch);
  CHECK_THROWS_AS(dominates(n, r, std::vector<double>{}), Error);
}

TEST_CASE("domination agrees with the oracle on random robin pairs") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  const auto d = share(Domain::interval(9, 1.0));
  const std::vector<double> grid{1e-3, 1e-2, 0.1, 1.0};
  for (int trial = 0; trial < 20; ++trial) {
    const BoundaryMeasure a({u(gen), u(gen)}), b({u(gen), u(gen)});
    const auto fa = robin_form(d, a), fb = robin_form(d, b);
    // mu_a >= mu_b pointwise is equivalent to domination of a by b
    const bool expected = a[0] >= b[0] && a[1] >= b[1];
    CHECK(dominates(fa, fb, grid).verdict == expected);
    CHECK(dominates(fa, fb, grid).form_level == expected);
  }
}

TEST_CASE("eventual positivity") {
  const auto p = testutil::unit_path();
  const auto n = eventually_positive(neumann_form(p), 10.0);
  CHECK(n.verdict);
  CHECK(n.perron_certificate);
  REQUIRE(n.t_star);
  CHECK(*n.t_star == 0.0);
  CHECK(expm(neumann_form(p), 0.1).s.minCoeff() > 0.0);

  // On the unit path e^{-tA}(0,2) = (e^{-4t} - e^{-t}) / 3 < 0 for all t > 0.
  const auto unit = eventually_positive(testutil::aw_form(p), 10.0);
  CHECK_FALSE(unit.verdict);
  const double t = 0.7;
  CHECK(expm(testutil::aw_form(p), t).s(0, 2) == doctest::Approx((std::exp(-4 * t) - std::exp(-t)) / 3.0));

  const auto d = share(Domain::interval(3, 1.0));
  const auto f = testutil::aw_form(d);
  const auto e = eventually_positive(f, 10.0, 1e-9);
  CHECK(e.verdict);
  CHECK(e.perron_certificate);
  REQUIRE(e.t_star);
  CHECK(*e.t_star > 0.0);
  CHECK(expm(f, *e.t_star * 0.99).s.minCoeff() <= 0.0);
  CHECK(oracle::semigroup_pade(f, *e.t_star * 1.01).minCoeff() > 0.0);
  CHECK(oracle::semigroup_pade(f, 5.0).minCoeff() > 0.0);

  GraphSpec two;
  two.nodes = 4;
  two.edges = {{0, 1, 1.0}, {2, 3, 1.0}};
  two.boundary = {0, 2};
  const auto split = eventually_positive(neumann_form(share(Domain::graph(two))), 10.0);
  CHECK_FALSE(split.verdict);
  CHECK_FALSE(split.perron_certificate);
}

TEST_CASE("min entry profile") {
  const auto p = testutil::unit_path();
  const std::vector<double> one{1.0};
  const auto np = min_entry_profile(neumann_form(p), one);
  REQUIRE(np.size() == 1);
  CHECK(np[0].first == 1.0);
  CHECK(np[0].second > 0.0);

  const std::vector<double> small{0.01};
  CHECK(min_entry_profile(testutil::aw_form(p), small)[0].second < 0.0);

  const std::vector<double> zero{0.0};
  const auto z = min_entry_profile(testutil::robin12(p), zero);
  CHECK(z[0].first == 0.0);
  CHECK(z[0].second == 0.0);
}
