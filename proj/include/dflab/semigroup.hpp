#pragma once

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "dflab/forms.hpp"

namespace dflab {

/// Relative tolerance of entrywise semigroup comparisons.
inline constexpr double kDominationTolerance = 1e-10;

/// {0} and 10^k for k = -3..1.
std::vector<double> default_time_grid();

/// Spectral data of the generator L = M^-1 A restricted to the free nodes,
/// kept in the symmetric frame M^-1/2 A M^-1/2.
class Semigroup {
 public:
  explicit Semigroup(const FormMatrix& form);

  /// e^{-tL}, zero-extended over pinned nodes. Throws InvalidTime for t < 0.
  Eigen::MatrixXd at(double t) const;

  const FormMatrix& form() const noexcept { return form_; }
  const std::vector<NodeIndex>& free_nodes() const noexcept { return free_; }
  /// Ascending eigenvalues of the generator on the free nodes.
  const Eigen::VectorXd& eigenvalues() const noexcept { return eigenvalues_; }
  /// Orthonormal eigenvectors in the symmetric frame (columns).
  const Eigen::MatrixXd& eigenvectors() const noexcept { return eigenvectors_; }
  /// max |eigenvalue|.
  double spectral_radius() const noexcept { return radius_; }

 private:
  FormMatrix form_;
  std::vector<NodeIndex> free_;
  Eigen::VectorXd inv_sqrt_mass_;
  Eigen::VectorXd sqrt_mass_;
  Eigen::VectorXd eigenvalues_;
  Eigen::MatrixXd eigenvectors_;
  double radius_ = 0.0;
};

struct SemigroupSnapshot {
  double t = 0.0;
  Eigen::MatrixXd s;
};

SemigroupSnapshot expm(const FormMatrix& form, double t);

struct TimedWitness {
  double t = 0.0;
  NodeIndex i = 0;
  NodeIndex j = 0;
  double value = 0.0;
};

struct PositivityReport {
  bool algebraic = true;   ///< off-diagonal sign check on A
  bool numerical = true;   ///< min entry of e^{-tL} >= -tol on grid and probes
  bool agree = true;
  std::optional<PairWitness> algebraic_witness;
  TimedWitness min_entry;  ///< smallest entry seen, negative iff numerical fails
  std::vector<double> times;
  std::vector<double> probe_times;
};

/// Both verdicts of the first Beurling-Deny criterion. The numerical side
/// samples `grid` plus short probe times 10^-k / rho(L), k = 1..6, where the
/// first-order term -tL_ij dominates; a disagreement is reported in `agree`.
PositivityReport is_positivity_preserving(const FormMatrix& form, std::span<const double> grid);

struct DominationReport {
  bool verdict = true;
  std::vector<double> times;
  std::vector<double> probe_times;  ///< 10^-k / rho, k = 1..6, sampled in addition to times
  TimedWitness worst;        ///< largest S_lower - S_upper observed
  double tolerance = 0.0;    ///< relative tolerance used
  bool form_level = true;    ///< ideal condition + A_lower - A_upper >= 0 on the lower form's free nodes
  bool positivity = true;    ///< lower form has a positive semigroup (algebraic)
};

/// Checks e^{-tL_lower} <= e^{-tL_upper} entrywise for every t in the grid
/// and at short probe times, within rel_tol times the largest entry of
/// either snapshot.
DominationReport dominates(const FormMatrix& lower, const FormMatrix& upper, std::span<const double> grid,
                           double rel_tol = kDominationTolerance, std::size_t threads = 1);

struct EventualPositivity {
  bool verdict = false;
  bool perron_certificate = false;
  std::optional<double> t_star;  ///< 0 means positive for every sampled t > 0
  double ground_eigenvalue = 0.0;
  std::string reason;
};

/// Perron certificate (simple ground state with strictly positive eigenvector,
/// tolerance 1e-10) plus a bisection for the onset of entrywise positivity
/// of the free block on (0, t_max].
EventualPositivity eventually_positive(const FormMatrix& form, double t_max, double bisection_tol = 1e-6);

/// (t, min entry of e^{-tL}) for each grid time, in grid order.
std::vector<std::pair<double, double>> min_entry_profile(const FormMatrix& form, std::span<const double> grid,
                                                         std::size_t threads = 1);

}  // namespace dflab
