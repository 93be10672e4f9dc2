#pragma once

#include <optional>
#include <vector>

#include "dflab/forms.hpp"

namespace dflab {

struct JumpEntry {
  NodeIndex i = 0;  // i < j
  NodeIndex j = 0;
  double weight = 0.0;

  friend bool operator==(const JumpEntry&, const JumpEntry&) = default;
};

/// Discrete Beurling-Deny-LeJan triple of a symmetric form:
///
///   u^T A v = sum_i k_i u_i v_i + sum_{i<j} J_ij (u_i - u_j)(v_i - v_j)
///
/// with J_ij = -A_ij and k_i = sum_j A_ij. Jumps along domain edges are the
/// stencil (local) part, everything else is the nonlocal jump measure.
/// A finite set has no strongly local part, so the gradient energy of the
/// discretization shows up as stencil jumps.
struct BdlParts {
  std::vector<double> stencil;      ///< one weight per domain edge, in edge order
  std::vector<JumpEntry> nonlocal;  ///< nonzero off-stencil jumps, sorted by (i,j)
  std::vector<double> killing;      ///< k_i per node
  std::vector<NodeIndex> pinned;
  bool markovian = true;
};

BdlParts bdl_decompose(const FormMatrix& form);
FormMatrix bdl_reconstruct(const BdlParts& parts, const DomainPtr& domain);

struct LocalityClass {
  bool stencil_local = true;
  std::optional<JumpEntry> witness;  ///< largest |J| off the stencil
};

LocalityClass classify_locality(const FormMatrix& form);

}  // namespace dflab
