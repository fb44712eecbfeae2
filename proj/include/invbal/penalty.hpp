#pragma once

#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace invbal {

/// Tolerances shared by every penalty-function check.
inline constexpr double kPenaltyBoundaryTol = 1e-12;
inline constexpr double kPenaltyConcavityTol = 1e-12;
inline constexpr double kPenaltyInverseTol = 1e-12;
inline constexpr int kPenaltyDefaultGrid = 1001;

enum class PenaltyKind { Exponential, Identity, Step, Tabulated };

std::string_view to_string(PenaltyKind kind);

struct Knot {
  double x = 0.0;
  double y = 0.0;
};

/// Scarcity discount Psi: [0,1] -> [0,1] with Psi(0) = 0 and Psi(1) = 1.
///
/// Immutable once built. Exponential is (e^{1-x} - e) / (1 - e), Identity is
/// x, Step is 1{x > 0} and Tabulated interpolates concave knots linearly.
class Penalty {
 public:
  Penalty() : Penalty(PenaltyKind::Exponential) {}

  static Penalty exponential() { return Penalty(PenaltyKind::Exponential); }
  static Penalty identity() { return Penalty(PenaltyKind::Identity); }
  static Penalty step() { return Penalty(PenaltyKind::Step); }
  /// Throws std::invalid_argument unless the knots start at (0,0), end at
  /// (1,1), have strictly increasing x and non-increasing, non-negative
  /// slopes.
  static Penalty tabulated(std::vector<Knot> knots);

  PenaltyKind kind() const { return kind_; }
  std::span<const Knot> knots() const { return knots_; }

  /// Throws std::domain_error for x outside [0,1] (a 1e-12 slack is clamped).
  double operator()(double x) const;
  double eval(double x) const { return (*this)(x); }

  /// Throws std::domain_error for the step kind or y outside [0,1].
  double inverse(double y) const;

  /// Boundary, monotonicity and concavity on a uniform grid. Step is always
  /// rejected: it is discontinuous at 0 and outside the bound's hypotheses.
  bool check_concave(int grid_points = kPenaltyDefaultGrid) const;

  bool operator==(const Penalty& other) const;

 private:
  explicit Penalty(PenaltyKind kind) : kind_(kind) {}

  double eval_unchecked(double x) const;

  PenaltyKind kind_;
  std::vector<Knot> knots_;
};

}  // namespace invbal
