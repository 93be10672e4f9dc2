#include "dflab/domain.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dflab/error.hpp"

namespace dflab {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidDomain: return "InvalidDomain";
    case ErrorCode::EmptyInterior: return "EmptyInterior";
    case ErrorCode::InvalidMeasure: return "InvalidMeasure";
    case ErrorCode::AsymmetricForm: return "AsymmetricForm";
    case ErrorCode::DomainMismatch: return "DomainMismatch";
    case ErrorCode::InvalidTime: return "InvalidTime";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Parse: return "Parse";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

namespace {

[[noreturn]] void invalid(const std::string& msg) { throw Error(ErrorCode::InvalidDomain, msg); }

std::uint64_t pair_key(NodeIndex i, NodeIndex j) {
  if (i > j) std::swap(i, j);
  return (static_cast<std::uint64_t>(i) << 32) | static_cast<std::uint64_t>(j);
}

bool positive_finite(double x) { return std::isfinite(x) && x > 0.0; }

}  // namespace

Domain Domain::interval(std::size_t n, double length) {
  if (n < 3) invalid("interval needs at least 3 nodes, got " + std::to_string(n));
  if (!positive_finite(length)) invalid("interval length must be positive");

  const double h = length / static_cast<double>(n - 1);
  Domain d;
  d.kind_ = DomainKind::Interval;
  d.grid_ = GridParams{n, 1, length, 0.0};
  d.mass_.assign(n, h);
  d.mass_.front() = d.mass_.back() = 0.5 * h;
  d.coords_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.coords_[i] = {static_cast<double>(i) * h, 0.0};
  for (std::size_t i = 0; i + 1 < n; ++i) d.edges_.push_back({i, i + 1, 1.0 / h});
  d.boundary_ = {0, n - 1};
  d.sigma_ = {1.0, 1.0};
  d.finalize();
  return d;
}

Domain Domain::rectangle(std::size_t nx, std::size_t ny, double lx, double ly) {
  if (nx < 3 || ny < 3) {
    invalid("rectangle needs at least 3 nodes per direction, got " + std::to_string(nx) + "x" +
            std::to_string(ny));
  }
  if (!positive_finite(lx) || !positive_finite(ly)) invalid("rectangle side lengths must be positive");

  const double hx = lx / static_cast<double>(nx - 1);
  const double hy = ly / static_cast<double>(ny - 1);
  const auto id = [nx](std::size_t ix, std::size_t iy) { return iy * nx + ix; };
  const auto on_x_side = [nx](std::size_t ix) { return ix == 0 || ix == nx - 1; };
  const auto on_y_side = [ny](std::size_t iy) { return iy == 0 || iy == ny - 1; };

  Domain d;
  d.kind_ = DomainKind::Rectangle;
  d.grid_ = GridParams{nx, ny, lx, ly};
  d.mass_.resize(nx * ny);
  d.coords_.resize(nx * ny);
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      double m = hx * hy;
      if (on_x_side(ix)) m *= 0.5;
      if (on_y_side(iy)) m *= 0.5;
      d.mass_[id(ix, iy)] = m;
      d.coords_[id(ix, iy)] = {static_cast<double>(ix) * hx, static_cast<double>(iy) * hy};
    }
  }

  // Edges running along the perimeter carry half a dual cell, hence half
  // the conductance.
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      if (ix + 1 < nx) {
        const double w = (on_y_side(iy) ? 0.5 : 1.0) * hy / hx;
        d.edges_.push_back({id(ix, iy), id(ix + 1, iy), w});
      }
      if (iy + 1 < ny) {
        const double w = (on_x_side(ix) ? 0.5 : 1.0) * hx / hy;
        d.edges_.push_back({id(ix, iy), id(ix, iy + 1), w});
      }
    }
  }

  for (std::size_t i = 0; i < nx * ny; ++i) {
    const std::size_t ix = i % nx;
    const std::size_t iy = i / nx;
    const bool bx = on_x_side(ix);
    const bool by = on_y_side(iy);
    if (!bx && !by) continue;
    d.boundary_.push_back(i);
    if (bx && by) {
      d.sigma_.push_back(0.5 * (hx + hy));
    } else {
      d.sigma_.push_back(bx ? hy : hx);
    }
  }
  d.finalize();
  return d;
}

Domain Domain::graph(const GraphSpec& spec) {
  std::size_t n = spec.nodes;
  if (n == 0) {
    for (const auto& e : spec.edges) n = std::max({n, e.i + 1, e.j + 1});
    for (auto b : spec.boundary) n = std::max(n, b + 1);
  }
  if (n == 0) invalid("graph has no nodes");

  Domain d;
  d.kind_ = DomainKind::Graph;
  for (const auto& e : spec.edges) {
    if (e.i >= n || e.j >= n) invalid("edge index out of range");
    if (e.i == e.j) invalid("self-loop at node " + std::to_string(e.i));
    if (!positive_finite(e.conductance)) invalid("edge conductance must be positive");
    d.edges_.push_back(e.i < e.j ? e : Edge{e.j, e.i, e.conductance});
  }

  if (!spec.mass.empty()) {
    if (spec.mass.size() != n) invalid("mass has wrong length");
    d.mass_ = spec.mass;
  } else {
    d.mass_.assign(n, 1.0);
  }
  for (double m : d.mass_) {
    if (!positive_finite(m)) invalid("node masses must be positive");
  }

  d.boundary_ = spec.boundary;
  std::sort(d.boundary_.begin(), d.boundary_.end());
  if (std::adjacent_find(d.boundary_.begin(), d.boundary_.end()) != d.boundary_.end()) {
    invalid("duplicate boundary node");
  }
  if (d.boundary_.empty()) invalid("boundary must be nonempty");
  if (d.boundary_.back() >= n) invalid("boundary index out of range");
  if (d.boundary_.size() == n) invalid("boundary must be a proper subset of the nodes");

  if (!spec.sigma.empty()) {
    if (spec.sigma.size() != d.boundary_.size()) invalid("sigma has wrong length");
    // sigma is given in the order the caller listed the boundary
    std::vector<std::pair<NodeIndex, double>> paired;
    for (std::size_t k = 0; k < spec.boundary.size(); ++k) paired.emplace_back(spec.boundary[k], spec.sigma[k]);
    std::sort(paired.begin(), paired.end());
    for (const auto& [node, s] : paired) d.sigma_.push_back(s);
  } else {
    d.sigma_.assign(d.boundary_.size(), 1.0);
  }
  for (double s : d.sigma_) {
    if (!positive_finite(s)) invalid("boundary weights must be positive");
  }

  d.coords_.resize(n);
  for (std::size_t i = 0; i < n; ++i) d.coords_[i] = {static_cast<double>(i), 0.0};
  d.grid_ = GridParams{n, 0, 0.0, 0.0};
  d.finalize();
  return d;
}

void Domain::finalize() {
  const std::size_t n = mass_.size();
  boundary_pos_.assign(n, kNone);
  for (std::size_t k = 0; k < boundary_.size(); ++k) boundary_pos_[boundary_[k]] = k;
  interior_.clear();
  for (std::size_t i = 0; i < n; ++i) {
    if (boundary_pos_[i] == kNone) interior_.push_back(i);
  }
  edge_lookup_.clear();
  for (std::size_t e = 0; e < edges_.size(); ++e) {
    if (!edge_lookup_.emplace(pair_key(edges_[e].i, edges_[e].j), e).second) {
      invalid("duplicate edge {" + std::to_string(edges_[e].i) + "," + std::to_string(edges_[e].j) + "}");
    }
  }
}

std::optional<std::size_t> Domain::boundary_position(NodeIndex i) const {
  const auto pos = boundary_pos_.at(i);
  if (pos == kNone) return std::nullopt;
  return pos;
}

std::optional<std::size_t> Domain::edge_index(NodeIndex i, NodeIndex j) const {
  if (i == j) return std::nullopt;
  const auto it = edge_lookup_.find(pair_key(i, j));
  if (it == edge_lookup_.end()) return std::nullopt;
  return it->second;
}

bool operator==(const Domain& a, const Domain& b) {
  return a.kind_ == b.kind_ && a.grid_ == b.grid_ && a.edges_ == b.edges_ && a.mass_ == b.mass_ &&
         a.sigma_ == b.sigma_ && a.boundary_ == b.boundary_ && a.coords_ == b.coords_;
}

}  // namespace dflab
