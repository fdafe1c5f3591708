// mlgrid: command-line front end to the vofrac C library.
//
// Exit codes: 0 ok, 1 identity failure, 2 schema/usage, 3 domain,
// 4 non-convergence.

#include <CLI11.hpp>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "problem_file.hpp"
#include "vofrac/vofrac.h"

namespace fs = std::filesystem;

namespace {

enum Exit { kOk = 0, kIdentityFailure = 1, kUsage = 2, kDomain = 3, kNoConvergence = 4 };

enum class Level { Error = 0, Warn = 1, Info = 2, Debug = 3 };

Level log_level() {
  const char* env = std::getenv("MLGRID_LOG");
  if (env == nullptr) return Level::Warn;
  const std::string v = env;
  if (v == "error" || v == "0") return Level::Error;
  if (v == "warn" || v == "1") return Level::Warn;
  if (v == "info" || v == "2") return Level::Info;
  if (v == "debug" || v == "3") return Level::Debug;
  return Level::Warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level > threshold) return;
  static const char* names[] = {"error", "warn", "info", "debug"};
  std::cerr << "mlgrid: " << names[static_cast<int>(level)] << ": " << msg << '\n';
}

struct Failure {
  int code;
  std::string message;
};

int exit_for(vof_status s) {
  switch (s) {
    case VOF_OK: return kOk;
    case VOF_INVALID_ARGUMENT:
    case VOF_BUFFER_TOO_SMALL: return kUsage;
    case VOF_NO_CONVERGENCE:
    case VOF_NOT_CONVERGED: return kNoConvergence;
    default: return kDomain;
  }
}

void check(vof_status s, const std::string& what) {
  if (s != VOF_OK) throw Failure{exit_for(s), what + ": " + vof_last_error()};
}

std::string real(double x) {
  char buf[40];
  if (vof_format_real(x, buf, sizeof buf) != VOF_OK) return "nan";
  return buf;
}

// Flat JSON object with keys in insertion order; values are preformatted.
class JsonObject {
 public:
  JsonObject& num(const std::string& k, double v) {
    return raw(k, std::isfinite(v) ? real(v) : std::string("null"));
  }
  JsonObject& integer(const std::string& k, long long v) { return raw(k, std::to_string(v)); }
  JsonObject& uinteger(const std::string& k, std::uint64_t v) { return raw(k, std::to_string(v)); }
  JsonObject& boolean(const std::string& k, bool v) { return raw(k, v ? "true" : "false"); }
  JsonObject& str(const std::string& k, const std::string& v) { return raw(k, "\"" + v + "\""); }
  JsonObject& object(const std::string& k, const JsonObject& v) { return raw(k, v.dump(indent_ + 2)); }
  JsonObject& raw(const std::string& k, std::string v) {
    entries_.emplace_back(k, std::move(v));
    return *this;
  }
  std::string dump(int indent = 0) const {
    std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    std::string out = "{\n";
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      out += pad + "\"" + entries_[i].first + "\": " + entries_[i].second;
      out += i + 1 < entries_.size() ? ",\n" : "\n";
    }
    return out + std::string(static_cast<std::size_t>(indent), ' ') + "}";
  }

 private:
  int indent_ = 0;
  std::vector<std::pair<std::string, std::string>> entries_;
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Failure{kUsage, "cannot write " + path.string()};
  out << content;
  if (!out) throw Failure{kUsage, "write failed: " + path.string()};
  log(Level::Info, "wrote " + path.string());
}

void make_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure{kUsage, "cannot create directory " + dir.string()};
}

// Writes to `out` if given, stdout otherwise.
void emit(const std::string& out, const std::string& content) {
  if (out.empty()) {
    std::cout << content;
  } else {
    write_file(out, content);
  }
}

std::string offset_csv(double a, int lo, const std::vector<double>& values) {
  std::ostringstream os;
  os << "offset,t,value\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const int k = lo + static_cast<int>(i);
    os << k << ',' << real(a + k) << ',' << real(values[i]) << '\n';
  }
  return os.str();
}

mlgrid::Problem load(const std::string& path) {
  try {
    return mlgrid::load_problem(path);
  } catch (const mlgrid::SchemaError& e) {
    throw Failure{kUsage, std::string("schema error: ") + e.what()};
  }
}

// ---- eval ------------------------------------------------------------------

int cmd_eval(const std::string& problem_path, const std::string& out) {
  const mlgrid::Problem p = load(problem_path);
  if (!p.op) throw Failure{kUsage, "schema error: problem: eval needs an \"operator\" section"};
  if (!p.f) throw Failure{kUsage, "schema error: problem: eval needs \"functions.f\""};

  vof_operator_desc d{};
  d.a = p.a;
  d.n = p.n;
  d.alpha = p.alpha.data();
  d.order_class = p.order_class;
  d.side = p.op->side;
  d.family = p.op->family;
  d.variant = p.op->variant;
  d.norm = p.norm;
  d.ctrl = &p.series;
  vof_operator op = nullptr;
  check(vof_operator_create(&d, &op), "operator");
  std::unique_ptr<vof_operator_s, void (*)(vof_operator)> guard(op, vof_operator_destroy);

  const std::vector<double> f(p.f->values.begin() + p.f->lo, p.f->values.begin() + p.f->hi + 1);
  int lo = 0, hi = -1;
  check(vof_operator_domain(op, p.f->lo, p.f->hi, &lo, &hi), "operator");
  std::vector<double> result(static_cast<std::size_t>(hi - lo + 1));
  check(vof_operator_apply(op, f.data(), p.f->lo, p.f->hi, result.data(), result.size(), &lo, &hi),
        "operator");
  emit(out, offset_csv(p.a, lo, result));
  return kOk;
}

// ---- ml --------------------------------------------------------------------

int cmd_ml(double alpha, double beta, double lambda, int z_max, const std::string& out) {
  if (z_max < 1) throw Failure{kUsage, "--z-max must be >= 1"};
  std::ostringstream os;
  os << "z,value,terms,method\n";
  for (int z = 1; z <= z_max; ++z) {
    vof_ml_result r{};
    check(vof_ml(alpha, beta, lambda, z, nullptr, &r), "ml at z = " + std::to_string(z));
    os << z << ',' << real(r.value) << ',' << r.terms << ',' << (r.finite_form ? "finite" : "series")
       << '\n';
  }
  emit(out, os.str());
  return kOk;
}

// ---- verify ----------------------------------------------------------------

struct VerifyArgs {
  std::string identity = "all";
  int trials = 100;
  std::uint64_t seed = 0;
  int n_min = 3;
  int n_max = 12;
  double tol = 1e-9;
  std::string norm = "random";
  std::string out;
  std::optional<std::uint64_t> replay;
  double inject = 0.0;
  bool quiet = false;
};

std::string report_header() {
  return "identity,trial,trial_seed,n,a,norm,lhs,rhs,abs_residual,rel_residual,alpha\n";
}

std::string report_row(const vof_identity_report& r, const std::vector<double>& alpha) {
  std::ostringstream os;
  os << vof_identity_name(r.identity) << ',' << r.trial_index << ',' << r.trial_seed << ',' << r.n << ','
     << real(r.a) << ',' << (r.norm == VOF_NORM_AB ? "ab" : "unit") << ',' << real(r.lhs) << ','
     << real(r.rhs) << ',' << real(r.abs_residual) << ',' << real(r.rel_residual) << ',';
  for (std::size_t i = 0; i < alpha.size(); ++i) os << (i ? ";" : "") << real(alpha[i]);
  os << '\n';
  return os.str();
}

bool passes(double rel, double tol) { return rel <= tol; }  // false for NaN

std::string replay_hint(const VerifyArgs& a, int identity, std::uint64_t trial_seed) {
  std::string s = "mlgrid verify " + std::string(vof_identity_name(identity)) + " --replay " +
                  std::to_string(trial_seed) + " --n-min " + std::to_string(a.n_min) + " --n-max " +
                  std::to_string(a.n_max);
  if (a.norm != "random") s += " --norm " + a.norm;
  return s;
}

int cmd_verify(const VerifyArgs& a) {
  if (a.trials < 1) throw Failure{kUsage, "--trials must be >= 1"};
  if (!(a.tol >= 0.0)) throw Failure{kUsage, "--tol must be non-negative"};
  vof_fuzz_desc d{};
  d.identity = -1;
  if (a.identity != "all") {
    check(vof_identity_parse(a.identity.c_str(), &d.identity), "identity");
  }
  d.trials = a.trials;
  d.seed = a.seed;
  d.n_min = a.n_min;
  d.n_max = a.n_max;
  d.norm = a.norm == "unit" ? VOF_NORM_UNIT : a.norm == "ab" ? VOF_NORM_AB : -1;
  d.corrupt = a.inject;
  if (a.inject != 0.0) log(Level::Warn, "fault injection active: left-hand kernels scaled by 1 + " + real(a.inject));

  if (a.replay) {
    if (d.identity < 0) throw Failure{kUsage, "--replay needs a single identity, not \"all\""};
    vof_identity_report r{};
    check(vof_replay(&d, *a.replay, &r), "replay");
    std::vector<double> alpha;  // not exposed for single replays
    const std::string csv = report_header() + report_row(r, alpha);
    if (a.out.empty()) {
      std::cout << csv;
    } else {
      make_dir(a.out);
      write_file(fs::path(a.out) / "reports.csv", csv);
    }
    if (!passes(r.rel_residual, a.tol)) {
      log(Level::Error, std::string(vof_identity_name(r.identity)) + " fails: relative residual " +
                            real(r.rel_residual));
      return kIdentityFailure;
    }
    return kOk;
  }

  vof_fuzz_result res = nullptr;
  check(vof_fuzz(&d, &res), "verify");
  std::unique_ptr<vof_fuzz_result_s, void (*)(vof_fuzz_result)> guard(res, vof_fuzz_result_destroy);

  std::string csv = report_header();
  std::vector<double> per_identity(VOF_IDENTITY_COUNT, -1.0);
  bool ok = true;
  vof_identity_report worst{};
  double worst_rel = -1.0;
  const std::size_t count = vof_fuzz_result_count(res);
  for (std::size_t i = 0; i < count; ++i) {
    vof_identity_report r{};
    check(vof_fuzz_result_report(res, i, &r), "verify");
    std::vector<double> alpha(static_cast<std::size_t>(r.alpha_count));
    check(vof_fuzz_result_alpha(res, i, alpha.data(), alpha.size()), "verify");
    csv += report_row(r, alpha);
    if (!passes(r.rel_residual, a.tol)) ok = false;
    const double key = std::isnan(r.rel_residual) ? INFINITY : r.rel_residual;
    double& m = per_identity[static_cast<std::size_t>(r.identity)];
    m = std::max(m, key);
    if (key > worst_rel) {
      worst_rel = key;
      worst = r;
    }
  }
  const double max_rel = vof_fuzz_result_max_rel_residual(res);

  JsonObject per;
  for (int id = 0; id < VOF_IDENTITY_COUNT; ++id) {
    if (per_identity[static_cast<std::size_t>(id)] >= 0.0) per.num(vof_identity_name(id), per_identity[static_cast<std::size_t>(id)]);
  }
  JsonObject w;
  w.str("identity", vof_identity_name(worst.identity))
      .integer("trial", worst.trial_index)
      .uinteger("trial_seed", worst.trial_seed)
      .num("rel_residual", worst.rel_residual);
  JsonObject summary;
  summary.str("identity", a.identity)
      .num("max_rel_residual", max_rel)
      .integer("trials", a.trials)
      .boolean("pass", ok)
      .num("tol", a.tol)
      .uinteger("seed", a.seed)
      .integer("n_min", a.n_min)
      .integer("n_max", a.n_max)
      .str("norm", a.norm)
      .object("worst", w)
      .object("per_identity", per);
  const std::string json = summary.dump() + "\n";

  if (a.out.empty()) {
    if (!a.quiet) std::cout << json;
  } else {
    make_dir(a.out);
    write_file(fs::path(a.out) / "reports.csv", csv);
    write_file(fs::path(a.out) / "summary.json", json);
    if (!a.quiet) {
      std::cout << (ok ? "PASS" : "FAIL") << " max_rel_residual=" << real(max_rel) << " trials=" << a.trials
                << '\n';
    }
  }
  if (!ok) {
    std::cerr << "mlgrid: identity failure: " << vof_identity_name(worst.identity) << " trial "
              << worst.trial_index << " relative residual " << real(worst.rel_residual) << " > "
              << real(a.tol) << "\n"
              << "mlgrid: replay seed " << worst.trial_seed << ": " << replay_hint(a, worst.identity, worst.trial_seed)
              << '\n';
    return kIdentityFailure;
  }
  return kOk;
}

// ---- solve -----------------------------------------------------------------

struct SolveArgs {
  std::string problem;
  std::string out;
  std::string method = "auto";
  int max_iter = -1;
  double tol = -1.0;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

int cmd_solve(const SolveArgs& a) {
  const mlgrid::Problem p = load(a.problem);
  if (!p.variational) throw Failure{kUsage, "schema error: problem: solve needs a \"variational\" section"};
  if (p.order_class != VOF_ORDER_DIFFERENCE) {
    throw Failure{kUsage, "schema error: order.class: solve needs \"diff\""};
  }
  const mlgrid::VariationalSpec& v = *p.variational;

  vof_problem_desc d{};
  d.a = p.a;
  d.n = p.n;
  d.alpha = p.alpha.data();
  d.A = v.A;
  d.B = v.B;
  d.variant = v.variant;
  d.norm = p.norm;
  d.ctrl = &p.series;
  const auto& q = v.lagrangian;
  const vof_quadratic cq{q.c1.data(), q.c1.size(), q.c2.data(), q.c2.size(),
                         q.c3.data(), q.c3.size(), q.c4.data(), q.c4.size()};
  vof_problem prob = nullptr;
  check(vof_problem_create_quadratic(&d, &cq, &prob), "problem");
  std::unique_ptr<vof_problem_s, void (*)(vof_problem)> guard(prob, vof_problem_destroy);

  vof_solve_options opts = vof_solve_options_default();
  if (a.max_iter >= 0) opts.max_iter = a.max_iter;
  if (a.tol > 0.0) opts.grad_tol = a.tol;
  opts.method = a.method == "gd" ? VOF_SOLVE_GRADIENT_DESCENT
                : a.method == "linear" ? VOF_SOLVE_LINEAR
                                       : VOF_SOLVE_AUTO;

  vof_solution sol = nullptr;
  const vof_status st = vof_problem_solve(prob, &opts, &sol);
  if (st != VOF_OK && st != VOF_NOT_CONVERGED) check(st, "solve");
  std::unique_ptr<vof_solution_s, void (*)(vof_solution)> sguard(sol, vof_solution_destroy);

  vof_solution_info info{};
  check(vof_solution_get_info(sol, &info), "solve");
  std::vector<double> f(static_cast<std::size_t>(p.n));
  check(vof_solution_get_f(sol, f.data(), f.size()), "solve");
  std::vector<double> r(static_cast<std::size_t>(p.n - 2));
  check(vof_solution_get_residual(sol, r.data(), r.size()), "solve");

  JsonObject summary;
  summary.num("J", info.J)
      .num("max_abs_residual", info.max_abs_residual)
      .integer("iterations", info.iterations)
      .boolean("converged", info.converged != 0)
      .num("max_abs_l2", info.max_abs_l2)
      .num("gradient_norm", info.gradient_norm)
      .str("method", info.method == VOF_SOLVE_LINEAR ? "linear" : "gradient_descent");
  const std::optional<std::uint64_t> seed = a.seed ? a.seed : p.seed;
  if (seed) summary.uinteger("seed", *seed);
  const std::string json = summary.dump() + "\n";

  if (a.out.empty()) {
    if (!a.quiet) std::cout << offset_csv(p.a, 0, f) << json;
  } else {
    make_dir(a.out);
    write_file(fs::path(a.out) / "solution.csv", offset_csv(p.a, 0, f));
    write_file(fs::path(a.out) / "residual.csv", offset_csv(p.a, 1, r));
    write_file(fs::path(a.out) / "summary.json", json);
    if (!a.quiet) {
      std::cout << (info.converged ? "converged" : "not converged") << " J=" << real(info.J)
                << " max_abs_residual=" << real(info.max_abs_residual) << '\n';
    }
  }
  if (!info.converged) {
    log(Level::Error, "solver did not converge after " + std::to_string(info.iterations) + " iterations");
    return kNoConvergence;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mlgrid: variable-order discrete fractional operators with Mittag-Leffler kernels"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress progress output on stdout");

  std::string eval_problem, eval_out;
  auto* eval = app.add_subcommand("eval", "Apply the problem file's operator to f");
  eval->add_option("problem", eval_problem, "Problem file (JSON)")->required();
  eval->add_option("--out", eval_out, "Output CSV (default stdout)");

  double alpha = 0, beta = 1, lambda = 0;
  int z_max = 10;
  std::string ml_out;
  auto* mlc = app.add_subcommand("ml", "Tabulate E_{alpha,beta}(lambda, z) for z = 1..z_max");
  mlc->add_option("--alpha", alpha, "Order alpha")->required();
  mlc->add_option("--beta", beta, "Second parameter beta")->capture_default_str();
  mlc->add_option("--lambda", lambda, "Argument lambda, |lambda| < 1")->required();
  mlc->add_option("--z-max", z_max, "Largest z")->capture_default_str();
  mlc->add_option("--out", ml_out, "Output CSV (default stdout)");

  VerifyArgs va;
  std::uint64_t replay_seed = 0;
  auto* ver = app.add_subcommand("verify", "Fuzz the summation-by-parts identities");
  ver->add_option("identity", va.identity, "Identity name or \"all\"")->capture_default_str();
  ver->add_option("--trials", va.trials, "Trials per identity")->capture_default_str();
  ver->add_option("--seed", va.seed, "Base seed")->capture_default_str();
  ver->add_option("--n-min", va.n_min, "Smallest grid length")->capture_default_str();
  ver->add_option("--n-max", va.n_max, "Largest grid length")->capture_default_str();
  ver->add_option("--tol", va.tol, "Relative residual threshold")->capture_default_str();
  ver->add_option("--norm", va.norm, "unit, ab, or random per trial")
      ->check(CLI::IsMember({"unit", "ab", "random"}))
      ->capture_default_str();
  ver->add_option("--out", va.out, "Output directory for reports.csv and summary.json");
  auto* replay_opt = ver->add_option("--replay", replay_seed, "Re-run one trial from its trial seed");
  ver->add_option("--inject-fault", va.inject)->group("");

  SolveArgs sa;
  std::uint64_t solve_seed = 0;
  auto* sol = app.add_subcommand("solve", "Minimize the variational functional");
  sol->add_option("problem", sa.problem, "Problem file (JSON)")->required();
  sol->add_option("--out", sa.out, "Output directory");
  sol->add_option("--method", sa.method, "auto, gd, or linear")
      ->check(CLI::IsMember({"auto", "gd", "linear"}))
      ->capture_default_str();
  sol->add_option("--max-iter", sa.max_iter, "Iteration limit for gradient descent");
  sol->add_option("--tol", sa.tol, "Gradient norm tolerance");
  auto* solve_seed_opt = sol->add_option("--seed", solve_seed, "Seed recorded in the summary");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*eval) return cmd_eval(eval_problem, eval_out);
    if (*mlc) return cmd_ml(alpha, beta, lambda, z_max, ml_out);
    if (*ver) {
      va.quiet = quiet;
      if (*replay_opt) va.replay = replay_seed;
      return cmd_verify(va);
    }
    if (*sol) {
      sa.quiet = quiet;
      if (*solve_seed_opt) sa.seed = solve_seed;
      return cmd_solve(sa);
    }
  } catch (const Failure& f) {
    log(Level::Error, f.message);
    return f.code;
  } catch (const std::exception& e) {
    log(Level::Error, e.what());
    return kDomain;
  }
  return kUsage;
}
