#include "invbal/penalty.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace invbal {

std::string_view to_string(PenaltyKind kind) {
  switch (kind) {
    case PenaltyKind::Exponential:
      return "exponential";
    case PenaltyKind::Identity:
      return "identity";
    case PenaltyKind::Step:
      return "step";
    case PenaltyKind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

Penalty Penalty::tabulated(std::vector<Knot> knots) {
  if (knots.size() < 2) {
    throw std::invalid_argument("tabulated penalty needs at least two knots");
  }
  if (std::abs(knots.front().x) > kPenaltyBoundaryTol ||
      std::abs(knots.front().y) > kPenaltyBoundaryTol) {
    throw std::invalid_argument("tabulated penalty must start at (0, 0)");
  }
  if (std::abs(knots.back().x - 1.0) > kPenaltyBoundaryTol ||
      std::abs(knots.back().y - 1.0) > kPenaltyBoundaryTol) {
    throw std::invalid_argument("tabulated penalty must end at (1, 1)");
  }
  knots.front() = {0.0, 0.0};
  knots.back() = {1.0, 1.0};
  double prev_slope = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k < knots.size(); ++k) {
    const double dx = knots[k].x - knots[k - 1].x;
    if (!(dx > 0.0)) {
      throw std::invalid_argument("tabulated knots must have increasing x");
    }
    const double slope = (knots[k].y - knots[k - 1].y) / dx;
    if (slope < -kPenaltyConcavityTol) {
      throw std::invalid_argument("tabulated penalty must be non-decreasing");
    }
    if (slope > prev_slope + kPenaltyConcavityTol) {
      throw std::invalid_argument("tabulated penalty must be concave");
    }
    prev_slope = slope;
  }
  Penalty p(PenaltyKind::Tabulated);
  p.knots_ = std::move(knots);
  return p;
}

double Penalty::operator()(double x) const {
  if (!(x >= -kPenaltyBoundaryTol && x <= 1.0 + kPenaltyBoundaryTol)) {
    throw std::domain_error("penalty argument outside [0,1]: " +
                            std::to_string(x));
  }
  return eval_unchecked(std::clamp(x, 0.0, 1.0));
}

double Penalty::eval_unchecked(double x) const {
  constexpr double e = std::numbers::e;
  switch (kind_) {
    case PenaltyKind::Exponential:
      if (x == 0.0) return 0.0;
      if (x == 1.0) return 1.0;
      return (std::exp(1.0 - x) - e) / (1.0 - e);
    case PenaltyKind::Identity:
      return x;
    case PenaltyKind::Step:
      return x > 0.0 ? 1.0 : 0.0;
    case PenaltyKind::Tabulated: {
      auto it = std::upper_bound(
          knots_.begin(), knots_.end(), x,
          [](double v, const Knot& k) { return v < k.x; });
      if (it == knots_.end()) return knots_.back().y;
      if (it == knots_.begin()) return knots_.front().y;
      const Knot& hi = *it;
      const Knot& lo = *(it - 1);
      const double w = (x - lo.x) / (hi.x - lo.x);
      return lo.y + w * (hi.y - lo.y);
    }
  }
  return 0.0;
}

double Penalty::inverse(double y) const {
  if (kind_ == PenaltyKind::Step) {
    throw std::domain_error("step penalty is not invertible");
  }
  if (!(y >= -kPenaltyBoundaryTol && y <= 1.0 + kPenaltyBoundaryTol)) {
    throw std::domain_error("penalty inverse argument outside [0,1]");
  }
  y = std::clamp(y, 0.0, 1.0);
  constexpr double e = std::numbers::e;
  switch (kind_) {
    case PenaltyKind::Exponential:
      if (y == 0.0) return 0.0;
      if (y == 1.0) return 1.0;
      return std::clamp(1.0 - std::log(e + y * (1.0 - e)), 0.0, 1.0);
    case PenaltyKind::Identity:
      return y;
    default:
      break;
  }
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > kPenaltyInverseTol) {
    const double mid = 0.5 * (lo + hi);
    if (eval_unchecked(mid) < y) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

bool Penalty::check_concave(int grid_points) const {
  if (grid_points < 3) {
    throw std::invalid_argument("check_concave needs at least 3 grid points");
  }
  if (kind_ == PenaltyKind::Step) return false;
  if (std::abs(eval_unchecked(0.0)) > kPenaltyBoundaryTol) return false;
  if (std::abs(eval_unchecked(1.0) - 1.0) > kPenaltyBoundaryTol) return false;
  const double h = 1.0 / (grid_points - 1);
  std::vector<double> v(grid_points);
  for (int k = 0; k < grid_points; ++k) {
    v[k] = eval_unchecked(std::min(1.0, k * h));
  }
  for (int k = 1; k < grid_points; ++k) {
    if (v[k] < v[k - 1] - kPenaltyConcavityTol) return false;
  }
  for (int k = 1; k + 1 < grid_points; ++k) {
    if (v[k - 1] - 2.0 * v[k] + v[k + 1] > kPenaltyConcavityTol) return false;
  }
  return true;
}

bool Penalty::operator==(const Penalty& other) const {
  if (kind_ != other.kind_) return false;
  if (knots_.size() != other.knots_.size()) return false;
  for (std::size_t k = 0; k < knots_.size(); ++k) {
    if (knots_[k].x != other.knots_[k].x || knots_[k].y != other.knots_[k].y) {
      return false;
    }
  }
  return true;
}

}  // namespace invbal
