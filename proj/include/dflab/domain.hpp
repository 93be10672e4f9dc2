#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace dflab {

using NodeIndex = std::size_t;

enum class DomainKind { Interval, Rectangle, Graph };

struct Edge {
  NodeIndex i = 0;
  NodeIndex j = 0;
  double conductance = 1.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Parameters of a structured grid; unused fields stay zero.
struct GridParams {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double lx = 0.0;
  double ly = 0.0;

  friend bool operator==(const GridParams&, const GridParams&) = default;
};

/// Input for an abstract graph domain. Empty mass/sigma mean "all ones";
/// `nodes == 0` infers the node count from the largest referenced index.
struct GraphSpec {
  std::size_t nodes = 0;
  std::vector<Edge> edges;
  std::vector<NodeIndex> boundary;
  std::vector<double> mass;
  std::vector<double> sigma;
};

/// A finite node set split into interior and boundary, with weighted
/// symmetric edges, lumped node masses and boundary surface weights.
///
/// Immutable once built. `sigma()` is indexed by boundary position, i.e.
/// sigma()[k] belongs to node boundary()[k].
class Domain {
 public:
  static Domain interval(std::size_t n, double length);
  static Domain rectangle(std::size_t nx, std::size_t ny, double lx, double ly);
  static Domain graph(const GraphSpec& spec);

  DomainKind kind() const noexcept { return kind_; }
  const GridParams& grid() const noexcept { return grid_; }
  std::size_t size() const noexcept { return mass_.size(); }

  const std::vector<Edge>& edges() const noexcept { return edges_; }
  const std::vector<double>& mass() const noexcept { return mass_; }
  const std::vector<double>& sigma() const noexcept { return sigma_; }
  const std::vector<NodeIndex>& boundary() const noexcept { return boundary_; }
  const std::vector<NodeIndex>& interior() const noexcept { return interior_; }
  const std::vector<std::array<double, 2>>& coords() const noexcept { return coords_; }

  bool is_boundary(NodeIndex i) const { return boundary_pos_.at(i) != kNone; }
  std::optional<std::size_t> boundary_position(NodeIndex i) const;
  std::optional<std::size_t> edge_index(NodeIndex i, NodeIndex j) const;
  bool adjacent(NodeIndex i, NodeIndex j) const { return edge_index(i, j).has_value(); }

  friend bool operator==(const Domain& a, const Domain& b);

 private:
  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  Domain() = default;
  void finalize();

  DomainKind kind_ = DomainKind::Graph;
  GridParams grid_;
  std::vector<Edge> edges_;
  std::vector<double> mass_;
  std::vector<double> sigma_;
  std::vector<NodeIndex> boundary_;
  std::vector<NodeIndex> interior_;
  std::vector<std::array<double, 2>> coords_;
  std::vector<std::size_t> boundary_pos_;
  std::unordered_map<std::uint64_t, std::size_t> edge_lookup_;
};

using DomainPtr = std::shared_ptr<const Domain>;

inline DomainPtr share(Domain d) { return std::make_shared<const Domain>(std::move(d)); }

}  // namespace dflab
