#include "vofrac/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "vofrac/errors.hpp"
#include "vofrac/special_functions.hpp"

namespace vofrac {

Grid::Grid(double a, int n) : a_(a), n_(n) {
  if (!std::isfinite(a)) throw DomainError("grid: base point must be finite");
  if (n < 2) throw DomainError("grid: n >= 2 required, got " + std::to_string(n));
}

double Grid::point(int offset) const {
  if (!contains(offset)) {
    throw DomainError("grid: offset " + std::to_string(offset) + " outside [0, " +
                      std::to_string(n_) + "]");
  }
  return a_ + offset;
}

GridFunction::GridFunction(Grid grid, std::vector<double> values)
    : GridFunction(grid, 0, grid.n(), std::move(values)) {}

GridFunction::GridFunction(Grid grid, int lo, int hi, std::vector<double> values)
    : grid_(grid), lo_(lo), hi_(hi), values_(std::move(values)) {
  if (lo < 0 || hi > grid.n() || lo > hi) {
    throw DomainError("grid function: support [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "] not inside [0, " + std::to_string(grid.n()) + "]");
  }
  if (values_.size() != static_cast<std::size_t>(hi - lo + 1)) {
    throw InvalidArgument("grid function: expected " + std::to_string(hi - lo + 1) +
                          " values, got " + std::to_string(values_.size()));
  }
}

GridFunction GridFunction::sample(Grid grid, const std::function<double(double)>& fn) {
  return sample(grid, 0, grid.n(), fn);
}

GridFunction GridFunction::sample(Grid grid, int lo, int hi,
                                  const std::function<double(double)>& fn) {
  std::vector<double> v;
  for (int k = lo; k <= hi; ++k) v.push_back(fn(grid.a() + k));
  return GridFunction(grid, lo, hi, std::move(v));
}

GridFunction GridFunction::constant(Grid grid, double value) {
  return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), value));
}

double GridFunction::at(int offset) const {
  if (!supports(offset)) {
    throw DomainError("grid function: offset " + std::to_string(offset) +
                      " outside support [" + std::to_string(lo_) + ", " +
                      std::to_string(hi_) + "]");
  }
  return (*this)[offset];
}

const char* to_string(OrderClass cls) {
  switch (cls) {
    case OrderClass::Sum: return "sum (0 < alpha <= 1)";
    case OrderClass::Difference: return "difference (0 < alpha < 1/2)";
    case OrderClass::ABSum: return "ab_sum (0 <= alpha <= 1)";
  }
  return "?";
}

bool order_in_class(double alpha, OrderClass cls) {
  switch (cls) {
    case OrderClass::Sum: return alpha > 0.0 && alpha <= 1.0;
    case OrderClass::Difference: return alpha > 0.0 && alpha < 0.5;
    case OrderClass::ABSum: return alpha >= 0.0 && alpha <= 1.0;
  }
  return false;
}

OrderFunction::OrderFunction(Grid grid, std::vector<double> alpha, OrderClass cls)
    : grid_(grid), alpha_(std::move(alpha)), class_(cls) {
  if (alpha_.size() != static_cast<std::size_t>(grid.size())) {
    throw DomainError("order function: expected " + std::to_string(grid.size()) +
                      " values, got " + std::to_string(alpha_.size()));
  }
  for (std::size_t k = 0; k < alpha_.size(); ++k) {
    if (!order_in_class(alpha_[k], cls)) {
      throw DomainError("order function: alpha[" + std::to_string(k) + "] = " +
                        format_real(alpha_[k]) + " violates class " + to_string(cls));
    }
  }
}

OrderFunction OrderFunction::constant(Grid grid, double alpha, OrderClass cls) {
  return OrderFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.size()), alpha),
                       cls);
}

bool OrderFunction::is_constant() const {
  return std::all_of(alpha_.begin(), alpha_.end(), [&](double v) { return v == alpha_.front(); });
}

const char* to_string(Normalization norm) {
  return norm == Normalization::Unit ? "unit" : "ab";
}

double b_of(double alpha, Normalization norm) {
  if (norm == Normalization::Unit) return 1.0;
  return 1.0 - alpha + alpha * reciprocal_gamma(alpha);
}

GridFunction nabla(const GridFunction& f) {
  if (f.hi() - f.lo() < 1) throw DomainError("nabla: support needs two consecutive points");
  std::vector<double> v;
  for (int k = f.lo() + 1; k <= f.hi(); ++k) v.push_back(f[k] - f[k - 1]);
  return GridFunction(f.grid(), f.lo() + 1, f.hi(), std::move(v));
}

GridFunction delta(const GridFunction& f) {
  if (f.hi() - f.lo() < 1) throw DomainError("delta: support needs two consecutive points");
  std::vector<double> v;
  for (int k = f.lo(); k < f.hi(); ++k) v.push_back(f[k + 1] - f[k]);
  return GridFunction(f.grid(), f.lo(), f.hi() - 1, std::move(v));
}

GridFunction reverse(const GridFunction& f) {
  const int n = f.grid().n();
  std::vector<double> v(f.values().rbegin(), f.values().rend());
  return GridFunction(f.grid(), n - f.hi(), n - f.lo(), std::move(v));
}

}  // namespace vofrac
