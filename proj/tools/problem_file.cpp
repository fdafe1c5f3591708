#include "problem_file.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <json.hpp>
#include <limits>
#include <set>

namespace mlgrid {

using nlohmann::json;

namespace {

[[noreturn]] void schema(const std::string& where, const std::string& what) {
  throw SchemaError(where + ": " + what);
}

void only_keys(const json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) schema(where, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!ok.count(it.key())) schema(where, "unknown key \"" + it.key() + "\"");
  }
}

const json& required(const json& obj, const std::string& where, const char* key) {
  if (!obj.contains(key)) schema(where, std::string("missing \"") + key + "\"");
  return obj.at(key);
}

double number(const json& v, const std::string& where) {
  if (!v.is_number()) schema(where, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) schema(where, "not finite");
  return x;
}

int integer(const json& v, const std::string& where) {
  if (!v.is_number_integer()) schema(where, "expected an integer");
  const auto x = v.get<std::int64_t>();
  if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
    schema(where, "integer out of range");
  }
  return static_cast<int>(x);
}

std::string text(const json& v, const std::string& where) {
  if (!v.is_string()) schema(where, "expected a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const json& v, const std::string& where) {
  if (!v.is_array()) schema(where, "expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

template <class E>
E pick(const json& v, const std::string& where,
       std::initializer_list<std::pair<const char*, E>> choices) {
  const std::string s = text(v, where);
  std::string names;
  for (const auto& [name, value] : choices) {
    if (s == name) return value;
    names += names.empty() ? name : std::string("|") + name;
  }
  schema(where, "\"" + s + "\" is not one of " + names);
}

vof_variant variant_of(const json& v, const std::string& where) {
  return pick<vof_variant>(v, where,
                           {{"type1", VOF_TYPE_I}, {"type2", VOF_TYPE_II}, {"convolution", VOF_CONVOLUTION}});
}

FunctionData function_data(const json& v, const std::string& where, const Problem& p,
                           const std::filesystem::path& base) {
  FunctionData fd;
  if (v.is_array()) {
    fd.values = numbers(v, where);
    if (fd.values.size() != static_cast<std::size_t>(p.n + 1)) {
      schema(where, "needs n + 1 = " + std::to_string(p.n + 1) + " values");
    }
    fd.lo = 0;
    fd.hi = p.n;
    return fd;
  }
  if (!v.is_string()) schema(where, "expected an inline array or a CSV path");
  std::filesystem::path csv = v.get<std::string>();
  if (csv.is_relative()) csv = base / csv;
  fd.values.assign(static_cast<std::size_t>(p.n + 1), 0.0);
  const vof_status s = vof_read_csv(csv.string().c_str(), p.a, p.n, fd.values.data(), fd.values.size(),
                                    &fd.lo, &fd.hi);
  if (s != VOF_OK) schema(where, vof_last_error());
  return fd;
}

QuadraticSpec quadratic(const json& v, const std::string& where, int n) {
  only_keys(v, where, {"kind", "c1", "c2", "c3", "c4"});
  const std::string kind = text(required(v, where, "kind"), where + ".kind");
  if (kind != "quadratic") schema(where + ".kind", "only \"quadratic\" is in the catalog");
  QuadraticSpec q;
  auto coef = [&](const char* key, std::vector<double>& out) {
    if (!v.contains(key)) return;
    const std::string w = where + "." + key;
    const json& c = v.at(key);
    if (c.is_array()) {
      out = numbers(c, w);
      if (out.size() != static_cast<std::size_t>(n - 1)) {
        schema(w, "needs n - 1 = " + std::to_string(n - 1) + " values, one per t = a+1..b-1");
      }
    } else {
      out = {number(c, w)};
    }
  };
  coef("c1", q.c1);
  coef("c2", q.c2);
  coef("c3", q.c3);
  coef("c4", q.c4);
  return q;
}

}  // namespace

Problem load_problem(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError("cannot open problem file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("problem file is not valid JSON: ") + e.what());
  }
  only_keys(doc, "problem",
            {"grid", "order", "normalization", "operator", "functions", "variational", "series", "seed"});
  const std::filesystem::path base = path.parent_path();
  Problem p;
  p.series = vof_series_control_default();

  const json& grid = required(doc, "problem", "grid");
  only_keys(grid, "grid", {"a", "n"});
  p.a = number(required(grid, "grid", "a"), "grid.a");
  p.n = integer(required(grid, "grid", "n"), "grid.n");
  if (p.n < 2) schema("grid.n", "must be >= 2");
  if (p.n > 100000) schema("grid.n", "must be <= 100000");

  const json& order = required(doc, "problem", "order");
  only_keys(order, "order", {"class", "constant", "values"});
  p.order_class = pick<vof_order_class>(required(order, "order", "class"), "order.class",
                                        {{"sum", VOF_ORDER_SUM},
                                         {"diff", VOF_ORDER_DIFFERENCE},
                                         {"ab_sum", VOF_ORDER_AB_SUM}});
  const bool has_const = order.contains("constant"), has_values = order.contains("values");
  if (has_const == has_values) schema("order", "give exactly one of \"constant\" or \"values\"");
  if (has_const) {
    p.alpha.assign(static_cast<std::size_t>(p.n + 1), number(order.at("constant"), "order.constant"));
  } else {
    p.alpha = numbers(order.at("values"), "order.values");
    if (p.alpha.size() != static_cast<std::size_t>(p.n + 1)) {
      schema("order.values", "needs n + 1 = " + std::to_string(p.n + 1) + " values");
    }
  }

  if (doc.contains("normalization")) {
    p.norm = pick<vof_normalization>(doc.at("normalization"), "normalization",
                                     {{"unit", VOF_NORM_UNIT}, {"ab", VOF_NORM_AB}});
  }

  if (doc.contains("operator")) {
    const json& op = doc.at("operator");
    only_keys(op, "operator", {"side", "family", "variant"});
    OperatorChoice c;
    c.side = pick<vof_side>(required(op, "operator", "side"), "operator.side",
                            {{"left", VOF_LEFT}, {"right", VOF_RIGHT}});
    c.family = pick<vof_family>(required(op, "operator", "family"), "operator.family",
                                {{"frac_sum", VOF_FRAC_SUM},
                                 {"gen_integral", VOF_GEN_INTEGRAL},
                                 {"ab_sum", VOF_AB_SUM},
                                 {"abr_diff", VOF_ABR_DIFF},
                                 {"abc_diff", VOF_ABC_DIFF}});
    if (op.contains("variant")) c.variant = variant_of(op.at("variant"), "operator.variant");
    p.op = c;
  }

  if (doc.contains("functions")) {
    const json& fns = doc.at("functions");
    only_keys(fns, "functions", {"f", "g"});
    if (fns.contains("f")) p.f = function_data(fns.at("f"), "functions.f", p, base);
    if (fns.contains("g")) p.g = function_data(fns.at("g"), "functions.g", p, base);
  }

  if (doc.contains("variational")) {
    const json& v = doc.at("variational");
    only_keys(v, "variational", {"lagrangian", "A", "B", "variant"});
    VariationalSpec vs;
    vs.lagrangian = quadratic(required(v, "variational", "lagrangian"), "variational.lagrangian", p.n);
    vs.A = number(required(v, "variational", "A"), "variational.A");
    vs.B = number(required(v, "variational", "B"), "variational.B");
    if (v.contains("variant")) {
      vs.variant = variant_of(v.at("variant"), "variational.variant");
      if (vs.variant == VOF_CONVOLUTION) schema("variational.variant", "must be type1 or type2");
    }
    p.variational = vs;
  }

  if (doc.contains("series")) {
    const json& s = doc.at("series");
    only_keys(s, "series", {"rel_tol", "k_max"});
    if (s.contains("rel_tol")) p.series.rel_tol = number(s.at("rel_tol"), "series.rel_tol");
    if (s.contains("k_max")) p.series.k_max = integer(s.at("k_max"), "series.k_max");
    if (!(p.series.rel_tol > 0.0)) schema("series.rel_tol", "must be positive");
    if (p.series.k_max <= p.series.k_min) {
      schema("series.k_max", "must exceed " + std::to_string(p.series.k_min));
    }
  }

  if (doc.contains("seed")) {
    const json& s = doc.at("seed");
    if (!s.is_number_unsigned() && !(s.is_number_integer() && s.get<std::int64_t>() >= 0)) {
      schema("seed", "expected a non-negative integer");
    }
    p.seed = s.get<std::uint64_t>();
  }
  return p;
}

}  // namespace mlgrid
