#include "invbal/instance.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace invbal {

Instance::Instance(std::vector<Product> products, Period horizon)
    : products_(std::move(products)) {
  set_horizon(horizon);
}

std::int64_t Instance::shock(ProductId i, Period t) const {
  for (const Shock& s : shocks_at(t)) {
    if (s.product == i) return s.units;
  }
  return 0;
}

std::int64_t Instance::min_initial_inventory() const {
  std::int64_t c0 = std::numeric_limits<std::int64_t>::max();
  bool any = false;
  for (const Product& p : products_) {
    if (p.unlimited) continue;
    c0 = std::min(c0, p.initial_inventory);
    any = true;
  }
  return any ? c0 : 0;
}

double Instance::max_price() const {
  double m = 0.0;
  for (const Product& p : products_) m = std::max(m, p.price);
  return m;
}

ProductId Instance::add_product(const Product& p) {
  products_.push_back(p);
  return static_cast<ProductId>(products_.size() - 1);
}

void Instance::set_horizon(Period horizon) {
  if (horizon < 0) throw std::invalid_argument("horizon must be >= 0");
  horizon_ = horizon;
  shocks_.resize(static_cast<std::size_t>(horizon));
  consumers_.resize(static_cast<std::size_t>(horizon));
}

void Instance::set_shock(ProductId i, Period t, std::int64_t units) {
  if (t < 1 || t > horizon_) throw std::out_of_range("shock period out of range");
  auto& row = shocks_[static_cast<std::size_t>(t - 1)];
  auto it = std::lower_bound(row.begin(), row.end(), i,
                             [](const Shock& s, ProductId p) { return s.product < p; });
  if (it != row.end() && it->product == i) {
    if (units == 0) {
      row.erase(it);
    } else {
      it->units = units;
    }
  } else if (units != 0) {
    row.insert(it, Shock{i, units});
  }
}

void Instance::add_shock(ProductId i, Period t, std::int64_t units) {
  set_shock(i, t, shock(i, t) + units);
}

void Instance::set_consumer(Period t, std::shared_ptr<const ChoiceModel> model) {
  if (t < 1 || t > horizon_) throw std::out_of_range("consumer period out of range");
  consumers_[static_cast<std::size_t>(t - 1)] = std::move(model);
}

Period Instance::push_period(std::shared_ptr<const ChoiceModel> model) {
  set_horizon(horizon_ + 1);
  consumers_.back() = std::move(model);
  return horizon_;
}

void Instance::validate() const {
  if (horizon_ < 1) throw std::invalid_argument("horizon must be positive");
  for (std::size_t i = 0; i < products_.size(); ++i) {
    const Product& p = products_[i];
    const std::string tag = "product " + std::to_string(i);
    if (!(p.price > 0.0)) throw std::invalid_argument(tag + ": price must be > 0");
    if (p.initial_inventory < 0) {
      throw std::invalid_argument(tag + ": initial inventory must be >= 0");
    }
    if (p.duration < 1) throw std::invalid_argument(tag + ": duration must be >= 1");
  }
  if (consumers_.size() != static_cast<std::size_t>(horizon_) ||
      shocks_.size() != static_cast<std::size_t>(horizon_)) {
    throw std::invalid_argument("per-period data does not match the horizon");
  }
  for (Period t = 1; t <= horizon_; ++t) {
    if (!consumers_[t - 1]) {
      throw std::invalid_argument("period " + std::to_string(t) + " has no consumer");
    }
    for (ProductId i : consumers_[t - 1]->support()) {
      if (static_cast<std::size_t>(i) >= products_.size()) {
        throw std::invalid_argument("period " + std::to_string(t) +
                                    ": consumer references unknown product");
      }
    }
    for (const Shock& s : shocks_[t - 1]) {
      if (static_cast<std::size_t>(s.product) >= products_.size()) {
        throw std::invalid_argument("shock references unknown product");
      }
      if (s.units < 0 && !negative_shocks_) {
        throw std::invalid_argument("negative shock in a non-negative instance");
      }
    }
  }
}

bool Instance::operator==(const Instance& other) const {
  if (products_ != other.products_ || horizon_ != other.horizon_ ||
      shocks_ != other.shocks_ || feasible_ != other.feasible_ ||
      negative_shocks_ != other.negative_shocks_ ||
      stochastic_duration_ != other.stochastic_duration_ ||
      stylized_ != other.stylized_) {
    return false;
  }
  for (std::size_t t = 0; t < consumers_.size(); ++t) {
    const auto& a = consumers_[t];
    const auto& b = other.consumers_[t];
    if (a == b) continue;
    if (!a || !b || !(*a == *b)) return false;
  }
  return true;
}

}  // namespace invbal
