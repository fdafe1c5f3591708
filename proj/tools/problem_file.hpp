#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "vofrac/vofrac.h"

namespace mlgrid {

/// Problem file does not match the schema (exit code 2).
class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FunctionData {
  std::vector<double> values;  // n + 1 slots
  int lo = 0;
  int hi = 0;
};

struct QuadraticSpec {
  std::vector<double> c1{0.0}, c2{0.0}, c3{0.0}, c4{0.0};
};

struct VariationalSpec {
  QuadraticSpec lagrangian;
  double A = 0.0;
  double B = 0.0;
  vof_variant variant = VOF_TYPE_I;
};

struct OperatorChoice {
  vof_side side = VOF_LEFT;
  vof_family family = VOF_FRAC_SUM;
  vof_variant variant = VOF_TYPE_I;
};

struct Problem {
  double a = 0.0;
  int n = 0;
  vof_order_class order_class = VOF_ORDER_SUM;
  std::vector<double> alpha;
  vof_normalization norm = VOF_NORM_UNIT;
  std::optional<OperatorChoice> op;
  std::optional<FunctionData> f;
  std::optional<FunctionData> g;
  std::optional<VariationalSpec> variational;
  vof_series_control series{};
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a problem file. CSV paths inside it resolve against
/// the file's directory. Throws SchemaError on any schema violation.
Problem load_problem(const std::filesystem::path& path);

}  // namespace mlgrid
