#include "dflab/domain.hpp"
#include "dflab/error.hpp"
#include "helpers.hpp"

using namespace dflab;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::Internal;
}

}  // namespace

TEST_CASE("interval with three nodes on length two") {
  const auto d = Domain::interval(3, 2.0);
  CHECK(d.size() == 3);
  CHECK(d.kind() == DomainKind::Interval);
  CHECK(d.boundary() == std::vector<NodeIndex>{0, 2});
  CHECK(d.interior() == std::vector<NodeIndex>{1});
  REQUIRE(d.edges().size() == 2);
  for (const auto& e : d.edges()) CHECK(e.conductance == 1.0);
  CHECK(d.sigma() == std::vector<double>{1.0, 1.0});
  CHECK(d.mass() == std::vector<double>{0.5, 1.0, 0.5});
}

TEST_CASE("interval with three nodes on the unit length") {
  const auto d = Domain::interval(3, 1.0);
  for (const auto& e : d.edges()) CHECK(e.conductance == 2.0);
  CHECK(d.mass() == std::vector<double>{0.25, 0.5, 0.25});
}

TEST_CASE("interval rejects degenerate input") {
  CHECK(code_of([] { Domain::interval(2, 1.0); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { Domain::interval(5, 0.0); }) == ErrorCode::InvalidDomain);
  CHECK(code_of([] { Domain::interval(5, -1.0); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("rectangle node counts") {
  const auto a = Domain::rectangle(3, 3, 1.0, 1.0);
  CHECK(a.size() == 9);
  CHECK(a.interior() == std::vector<NodeIndex>{4});
  CHECK(a.boundary().size() == 8);

  const auto b = Domain::rectangle(4, 3, 1.0, 1.0);
  CHECK(b.size() == 12);
  CHECK(b.interior().size() == 2);

  CHECK(code_of([] { Domain::rectangle(2, 3, 1.0, 1.0); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("rectangle weights, masses and boundary lengths") {
  const auto d = Domain::rectangle(4, 3, 3.0, 1.0);  // hx = 1, hy = 0.5
  double total_mass = 0.0;
  for (double m : d.mass()) total_mass += m;
  CHECK(total_mass == doctest::Approx(3.0));
  double perimeter = 0.0;
  for (double s : d.sigma()) perimeter += s;
  CHECK(perimeter == doctest::Approx(8.0));
  // centre x-edge: hy / hx, centre y-edge: hx / hy
  const auto ex = d.edge_index(5, 6);
  const auto ey = d.edge_index(5, 9);
  REQUIRE(ex);
  REQUIRE(ey);
  CHECK(d.edges()[*ex].conductance == doctest::Approx(0.5));
  CHECK(d.edges()[*ey].conductance == doctest::Approx(2.0));
  // perimeter edges carry half the weight
  const auto ep = d.edge_index(0, 1);
  REQUIRE(ep);
  CHECK(d.edges()[*ep].conductance == doctest::Approx(0.25));
}

TEST_CASE("graph domains") {
  const auto path = testutil::unit_path();
  CHECK(path->size() == 3);
  CHECK(path->boundary() == std::vector<NodeIndex>{0, 2});
  CHECK(path->mass() == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(path->adjacent(1, 0));
  CHECK_FALSE(path->adjacent(0, 2));

  GraphSpec tri;
  tri.edges = {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}};
  tri.boundary = {0};
  const auto t = Domain::graph(tri);
  CHECK(t.boundary() == std::vector<NodeIndex>{0});
  CHECK(t.interior() == std::vector<NodeIndex>{1, 2});

  GraphSpec loop;
  loop.edges = {{0, 0, 1.0}};
  loop.boundary = {0};
  CHECK(code_of([&] { Domain::graph(loop); }) == ErrorCode::InvalidDomain);

  GraphSpec dup;
  dup.edges = {{0, 1, 1.0}, {1, 0, 2.0}, {1, 2, 1.0}};
  dup.boundary = {0};
  CHECK(code_of([&] { Domain::graph(dup); }) == ErrorCode::InvalidDomain);

  GraphSpec negative;
  negative.edges = {{0, 1, -1.0}, {1, 2, 1.0}};
  negative.boundary = {0};
  CHECK(code_of([&] { Domain::graph(negative); }) == ErrorCode::InvalidDomain);
}

TEST_CASE("graph sigma follows the caller's boundary order") {
  GraphSpec spec;
  spec.edges = {{0, 1, 1.0}, {1, 2, 1.0}};
  spec.boundary = {2, 0};
  spec.sigma = {5.0, 7.0};
  const auto d = Domain::graph(spec);
  CHECK(d.boundary() == std::vector<NodeIndex>{0, 2});
  CHECK(d.sigma() == std::vector<double>{7.0, 5.0});
  CHECK(d.boundary_position(2) == std::optional<std::size_t>{1});
  CHECK_FALSE(d.boundary_position(1).has_value());
}

TEST_CASE("domain equality") {
  CHECK(Domain::interval(5, 1.0) == Domain::interval(5, 1.0));
  CHECK_FALSE(Domain::interval(5, 1.0) == Domain::interval(5, 2.0));
  CHECK_FALSE(Domain::interval(9, 1.0) == Domain::rectangle(3, 3, 1.0, 1.0));
}
