// superad: command-line front end.
//
// Exit status: 0 success, 1 usage/configuration error, 2 failed numerical
// assertion (machine-readable record on stderr).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "superad/expansion.hpp"
#include "superad/oscillatory.hpp"
#include "superad/propagator.hpp"
#include "superad/superadiabatic.hpp"
#include "superad/transition_lab.hpp"

#ifndef SUPERAD_VERSION
#define SUPERAD_VERSION "0.0.0"
#endif

namespace {

using nlohmann::json;
using namespace superad;

constexpr const char* kInterfaceVersion = "1";

// Config files are JSON objects keyed by subcommand, e.g.
//   {"switching": {"epsilon": 0.125, "gap": 1}}
// Any emitted JSON report (key "run_config") or CSV (JSON on its first
// '#' line) is accepted as well.
class JsonConfig : public CLI::Config {
 public:
  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    std::stringstream ss;
    ss << input.rdbuf();
    std::string text = ss.str();
    if (text.rfind("# ", 0) == 0) text = text.substr(2, text.find('\n') - 2);
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw CLI::ConversionError("config is not valid JSON: " + std::string(e.what()));
    }
    if (j.is_object() && j.contains("meta") && j["meta"].contains("run_config")) j = j["meta"]["run_config"];
    if (j.is_object() && j.contains("run_config")) j = j["run_config"];
    if (!j.is_object()) throw CLI::ConversionError("config must be a JSON object");
    std::vector<CLI::ConfigItem> out;
    walk(j, "", {}, out);
    return out;
  }

 private:
  static void walk(const json& j, const std::string& name, std::vector<std::string> prefix,
                   std::vector<CLI::ConfigItem>& out) {
    if (j.is_object()) {
      if (!name.empty()) prefix.push_back(name);
      for (auto it = j.begin(); it != j.end(); ++it) walk(*it, it.key(), prefix, out);
      return;
    }
    if (name.empty()) throw CLI::ConversionError("config values must sit under a subcommand key");
    CLI::ConfigItem item;
    item.name = name;
    item.parents = prefix;
    if (j.is_string()) {
      item.inputs = {j.get<std::string>()};
    } else if (j.is_boolean() || j.is_number()) {
      item.inputs = {j.dump()};  // round-trip digits
    } else if (j.is_array()) {
      for (const auto& v : j) item.inputs.push_back(v.is_string() ? v.get<std::string>() : v.dump());
    } else {
      throw CLI::ConversionError("unsupported config value for " + name);
    }
    out.push_back(std::move(item));
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Precision effective_precision(const std::string& flag, double signal) {
  Precision p;
  if (flag == "auto") {
    p = signal < double_precision_floor() ? Precision::extended : Precision::double_;
  } else {
    p = parse_precision(flag);
  }
  return precision_from_env(p);
}

std::optional<Precision> requested_precision(const std::string& flag) {
  const char* env = std::getenv("SUPERAD_PRECISION");
  if (env && *env) return parse_precision(env);
  if (flag == "auto") return std::nullopt;
  return parse_precision(flag);
}

void emit(const std::string& path, const std::string& text) {
  if (path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open output path '" + path + "'");
  f << text;
  f.close();
  if (!f) throw UsageError("failed writing output path '" + path + "'");
}

json header(const std::string& sub, json params) {
  return {{"code_version", SUPERAD_VERSION},
          {"interface_version", kInterfaceVersion},
          {"run_config", {{sub, std::move(params)}}}};
}

std::string csv_header(const json& meta) { return "# " + meta.dump() + "\n"; }

// ------------------------------------------------------------------ params

struct CoeffsParams {
  int n = 10;
  std::string backend = "exact";
  std::string precision = "auto";
  std::string out = "-";
};

struct BetaParams {
  int n = 100;
  std::string precision = "auto";
  std::string out = "-";
};

struct BoundsParams {
  int n = 40;
  std::string backend = "exact";
  std::string out = "-";
};

struct StatesParams {
  double epsilon = 0.125;
  int level = 1;
  double t_min = -10, t_max = 10;
  int points = 201;
  std::string precision = "auto";
  std::string out = "-";
};

struct IntegralsParams {
  int m = 50;
  std::optional<double> epsilon;
  std::string pole = "plus";
  int phase_sign = 1;
  double t_min = -1, t_max = 1;
  int points = 41;
  double tol = 1e-10;
  std::string out = "-";
};

struct PropagateParams {
  double epsilon = 0;
  double gap = 1, delta = 1;
  std::optional<double> rtol, atol, t0, t1;
  int level = 1;
  int uniform_points = 2001, refined_points = 501;
  std::string precision = "auto";
  std::string out = "-";
};

struct SwitchingParams {
  double epsilon = 0;
  double gap = 1, delta = 1;
  std::optional<double> rtol, atol;
  int uniform_points = 2001, refined_points = 501;
  std::string precision = "auto";
  bool timing = false;
  std::string out = "-";
  std::string curve;
};

struct CrosscheckParams {
  int n = 5000;
  double epsilon = 0.25;
  std::string out = "-";
};

template <class T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

// ------------------------------------------------------------------ commands

int cmd_coeffs(const CoeffsParams& p) {
  if (p.backend != "exact" && p.backend != "float") throw UsageError("backend must be exact or float");
  json params{{"n", p.n}, {"backend", p.backend}, {"out", p.out}};
  json doc;
  if (p.backend == "exact") {
    doc = header("coeffs", params);
    doc["table"] = table_to_json(ExactTable::build(p.n));
  } else {
    const Precision prec = effective_precision(p.precision == "auto" ? "double" : p.precision, 1);
    params["precision"] = to_string(prec);
    doc = header("coeffs", params);
    doc["table"] = with_precision(prec, [&](auto zero) {
      return table_to_json(FloatTable<decltype(zero)>::build(p.n));
    });
  }
  emit(p.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_beta(const BetaParams& p) {
  if (p.n < 1) throw UsageError("--n must be >= 1");
  const Precision prec = effective_precision(p.precision == "auto" ? "double" : p.precision, 1);
  json params{{"n", p.n}, {"precision", to_string(prec)}, {"out", p.out}};
  std::ostringstream os;
  os << csv_header(header("beta", params)) << "n,beta\n";
  with_precision(prec, [&](auto zero) {
    using Real = decltype(zero);
    const auto beta = beta_sequence<Real>(p.n);
    for (std::size_t i = 0; i < beta.size(); ++i) os << i + 1 << ',' << format_real(beta[i]) << '\n';
  });
  emit(p.out, os.str());
  return 0;
}

int cmd_bounds(const BoundsParams& p) {
  if (p.backend != "exact" && p.backend != "float") throw UsageError("backend must be exact or float");
  json doc = header("bounds", {{"n", p.n}, {"backend", p.backend}, {"out", p.out}});
  const BoundReport rep =
      p.backend == "exact" ? verify_bounds(ExactTable::build(p.n)) : verify_bounds(FloatTable<double>::build(p.n));
  doc["report"] = rep.to_json();
  if (p.n >= 1) {
    const FactorialSums fs = factorial_sum_check(p.n);
    doc["factorial_sums"] = {{"n", p.n},
                             {"full", fs.full.get_d()},
                             {"drop_one", fs.drop_one.get_d()},
                             {"inner", fs.inner.get_d()}};
  }
  doc["all_bounds_hold"] = true;
  emit(p.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_states(const StatesParams& p) {
  if (p.level != 1 && p.level != 2) throw UsageError("--level must be 1 or 2");
  if (p.points < 2 || !(p.t_min < p.t_max)) throw UsageError("need --points >= 2 and --t-min < --t-max");
  if (!(p.epsilon > 0)) throw UsageError("--epsilon must be positive");
  const Precision prec = effective_precision(p.precision, std::exp(-1 / p.epsilon));
  json params{{"epsilon", p.epsilon}, {"level", p.level},          {"t-min", p.t_min},  {"t-max", p.t_max},
              {"points", p.points},   {"precision", to_string(prec)}, {"out", p.out}};
  std::ostringstream os;
  with_precision(prec, [&](auto zero) {
    using Real = decltype(zero);
    const int n = optimal_order(p.epsilon);
    if (n < 1) throw TruncationOrderZero("epsilon > 1/2 leaves no terms in the truncated expansion");
    BuildOptions bo;
    bo.exec = Exec::serial;
    const auto table = FloatTable<Real>::build(n, bo);
    const auto st = make_state<Real>(p.epsilon, p.level, table);
    const ResidualNorms rn = residual_norms(st);
    json meta = header("states", params);
    meta["order"] = n;
    meta["residual_norms"] = {{"leading", rn.leading},
                              {"leading_identity", rn.leading_identity},
                              {"remainder", rn.remainder},
                              {"ratio", rn.ratio}};
    os << csv_header(meta) << "t,re_psi1,im_psi1,re_psi2,im_psi2,norm,abs_residual\n";
    for (int i = 0; i < p.points; ++i) {
      const double t = i == p.points - 1 ? p.t_max : p.t_min + i * (p.t_max - p.t_min) / (p.points - 1);
      const Vec2<Real> v = evaluate_state(st, Real(t));
      const Vec2<Real> z = residual(st, Real(t));
      os << format_real(t) << ',' << format_real(v[0].real()) << ',' << format_real(v[0].imag()) << ','
         << format_real(v[1].real()) << ',' << format_real(v[1].imag()) << ',' << format_real(Real(norm(v))) << ','
         << format_real(Real(norm(z))) << '\n';
    }
  });
  emit(p.out, os.str());
  return 0;
}

int cmd_integrals(const IntegralsParams& p) {
  if (p.pole != "plus" && p.pole != "minus") throw UsageError("--pole must be plus or minus");
  if (p.phase_sign != 1 && p.phase_sign != -1) throw UsageError("--phase-sign must be 1 or -1");
  if (p.points < 1 || !(p.t_min <= p.t_max)) throw UsageError("need --points >= 1 and --t-min <= --t-max");
  IntegralSpec spec = IntegralSpec::with_m(p.m, p.pole == "plus" ? PoleSign::plus : PoleSign::minus, 0);
  if (p.epsilon) spec.epsilon = *p.epsilon;
  spec.phase_sign = p.phase_sign;
  spec.validate();
  json params{{"m", p.m},         {"pole", p.pole},   {"phase-sign", p.phase_sign}, {"t-min", p.t_min},
              {"t-max", p.t_max}, {"points", p.points}, {"tol", p.tol},             {"out", p.out}};
  put_opt(params, "epsilon", p.epsilon);
  std::vector<double> ts;
  for (int i = 0; i < p.points; ++i) {
    ts.push_back(p.points == 1 ? p.t_min
                 : i == p.points - 1 ? p.t_max
                                     : p.t_min + i * (p.t_max - p.t_min) / (p.points - 1));
  }
  const auto res = quadrature_grid(spec, ts, p.tol);
  json meta = header("integrals", params);
  const auto at_inf = residue_value(spec);
  meta["residue_value"] = {at_inf.real(), at_inf.imag()};
  std::ostringstream os;
  os << csv_header(meta) << "t,re_quadrature,im_quadrature,error_estimate,re_asymptotic,im_asymptotic,abs_difference\n";
  double sup = 0;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    IntegralSpec s = spec;
    s.t = ts[i];
    const auto asym = asymptotic_value(s);
    const double d = std::abs(res[i].value - asym);
    sup = std::max(sup, d);
    os << format_real(ts[i]) << ',' << format_real(res[i].value.real()) << ',' << format_real(res[i].value.imag())
       << ',' << format_real(res[i].error_estimate) << ',' << format_real(asym.real()) << ','
       << format_real(asym.imag()) << ',' << format_real(d) << '\n';
  }
  emit(p.out, os.str());
  return 0;
}

int cmd_propagate(const PropagateParams& p) {
  PropagationConfig cfg;
  cfg.epsilon = p.epsilon;
  cfg.rtol = p.rtol;
  cfg.atol = p.atol;
  cfg.t0 = p.t0;
  cfg.t1 = p.t1;
  cfg.initial_level = p.level;
  cfg.uniform_points = p.uniform_points;
  cfg.refined_points = p.refined_points;
  cfg.precision = requested_precision(p.precision);
  const ResolvedConfig r = resolve(HamiltonianSpec{p.gap, p.delta}, cfg);
  json params{{"epsilon", p.epsilon},
              {"gap", p.gap},
              {"delta", p.delta},
              {"rtol", r.rtol},
              {"atol", r.atol},
              {"t0", r.t0},
              {"t1", r.t1},
              {"level", p.level},
              {"uniform-points", p.uniform_points},
              {"refined-points", p.refined_points},
              {"precision", to_string(r.precision)},
              {"out", p.out}};
  std::ostringstream os;
  with_precision(r.precision, [&](auto zero) {
    using Real = decltype(zero);
    auto rec = propagate<Real>(r);
    const json h = header("propagate", params);
    for (auto it = h.begin(); it != h.end(); ++it) rec.meta[it.key()] = it.value();
    write_csv(os, rec);
  });
  emit(p.out, os.str());
  return 0;
}

int cmd_switching(const SwitchingParams& p) {
  ExperimentConfig cfg;
  cfg.epsilon = p.epsilon;
  cfg.E = p.gap;
  cfg.delta = p.delta;
  cfg.rtol = p.rtol;
  cfg.atol = p.atol;
  cfg.precision = requested_precision(p.precision);
  cfg.uniform_points = p.uniform_points;
  cfg.refined_points = p.refined_points;
  cfg.timing = p.timing;
  const ComparisonReport rep = run_experiment(cfg);
  json params{{"epsilon", p.epsilon},
              {"gap", p.gap},
              {"delta", p.delta},
              {"rtol", rep.resolved["rtol"]},
              {"atol", rep.resolved["atol"]},
              {"uniform-points", p.uniform_points},
              {"refined-points", p.refined_points},
              {"precision", to_string(rep.precision)},
              {"out", p.out}};
  if (p.timing) params["timing"] = true;
  if (!p.curve.empty()) params["curve"] = p.curve;
  json doc = header("switching", params);
  doc["report"] = rep.to_json();
  if (!p.curve.empty()) {
    std::ostringstream cs;
    cs << csv_header(header("switching", params)) << "t,measured,predicted,difference\n";
    for (std::size_t k = 0; k < rep.curve.t.size(); ++k) {
      cs << format_real(rep.curve.t[k]) << ',' << format_real(rep.curve.measured[k]) << ','
         << format_real(rep.curve.predicted[k]) << ','
         << format_real(rep.curve.measured[k] - rep.curve.predicted[k]) << '\n';
    }
    emit(p.curve, cs.str());
  }
  emit(p.out, doc.dump(2) + "\n");
  return 0;
}

int cmd_crosscheck(const CrosscheckParams& p) {
  json doc = header("crosscheck", {{"n", p.n}, {"epsilon", p.epsilon}, {"out", p.out}});
  doc["report"] = beta_star_crosscheck(p.n, p.epsilon).to_json();
  emit(p.out, doc.dump(2) + "\n");
  return 0;
}

json failure_record(const Error& e) {
  json j{{"error", e.kind()}, {"assertion", e.is_assertion()}, {"message", e.what()}};
  if (const auto* b = dynamic_cast<const BoundViolation*>(&e)) {
    j["order"] = b->order();
    j["bound"] = b->bound();
  }
  if (const auto* a = dynamic_cast<const AccuracyFailure*>(&e)) j["achieved"] = a->achieved();
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Superadiabatic transition histories: coefficients, bounds, states, integrals, propagation"};
  app.config_formatter(std::make_shared<JsonConfig>());
  app.set_config("--config", "", "JSON config file (any emitted report or CSV works)");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_version_flag("--version", std::string("superad ") + SUPERAD_VERSION + " (interface " + kInterfaceVersion + ")");
  app.require_subcommand(1);
  // nothing draws random numbers; the flag only states that
  app.add_flag("--seed-free", "Accepted for scripts; every path is deterministic");

  const auto precision_check = CLI::IsMember({"auto", "double", "extended"});

  CoeffsParams coeffs;
  auto* c = app.add_subcommand("coeffs", "Expansion coefficients g_n (normalized) as JSON");
  c->add_option("--n", coeffs.n, "Highest order")->capture_default_str()->check(CLI::Range(1, 5000));
  c->add_option("--backend", coeffs.backend, "exact | float")->capture_default_str();
  c->add_option("--precision", coeffs.precision, "Float backend precision")->check(precision_check);
  c->add_option("--out", coeffs.out, "Output path, - for stdout")->capture_default_str();

  BetaParams beta;
  auto* b = app.add_subcommand("beta", "beta_n sequence as CSV");
  b->add_option("--n", beta.n, "Highest order")->capture_default_str()->check(CLI::Range(1, 10'000'000));
  b->add_option("--precision", beta.precision)->check(precision_check);
  b->add_option("--out", beta.out)->capture_default_str();

  BoundsParams bounds;
  auto* bd = app.add_subcommand("bounds", "Verify the coefficient bounds up to order n");
  bd->add_option("--n", bounds.n)->capture_default_str()->check(CLI::Range(1, 5000));
  bd->add_option("--backend", bounds.backend, "exact | float")->capture_default_str();
  bd->add_option("--out", bounds.out)->capture_default_str();

  StatesParams states;
  auto* s = app.add_subcommand("states", "Optimal superadiabatic state and its residual on a grid");
  s->add_option("--epsilon", states.epsilon)->capture_default_str();
  s->add_option("--level", states.level)->capture_default_str();
  s->add_option("--t-min", states.t_min)->capture_default_str();
  s->add_option("--t-max", states.t_max)->capture_default_str();
  s->add_option("--points", states.points)->capture_default_str();
  s->add_option("--precision", states.precision)->check(precision_check);
  s->add_option("--out", states.out)->capture_default_str();

  IntegralsParams integrals;
  auto* ig = app.add_subcommand("integrals", "Oscillatory pole integrals against their asymptotics");
  ig->add_option("--m", integrals.m)->capture_default_str();
  ig->add_option("--epsilon", integrals.epsilon, "Defaults to 1/m");
  ig->add_option("--pole", integrals.pole, "plus | minus")->capture_default_str();
  ig->add_option("--phase-sign", integrals.phase_sign)->capture_default_str();
  ig->add_option("--t-min", integrals.t_min)->capture_default_str();
  ig->add_option("--t-max", integrals.t_max)->capture_default_str();
  ig->add_option("--points", integrals.points)->capture_default_str();
  ig->add_option("--tol", integrals.tol)->capture_default_str();
  ig->add_option("--out", integrals.out)->capture_default_str();

  PropagateParams prop;
  auto* pr = app.add_subcommand("propagate", "Integrate the Schroedinger equation; CSV of psi and overlaps");
  pr->add_option("--epsilon", prop.epsilon)->required();
  pr->add_option("--gap", prop.gap, "E")->capture_default_str();
  pr->add_option("--delta", prop.delta)->capture_default_str();
  pr->add_option("--rtol", prop.rtol);
  pr->add_option("--atol", prop.atol);
  pr->add_option("--t0", prop.t0);
  pr->add_option("--t1", prop.t1);
  pr->add_option("--level", prop.level, "Initial superadiabatic level")->capture_default_str();
  pr->add_option("--uniform-points", prop.uniform_points)->capture_default_str();
  pr->add_option("--refined-points", prop.refined_points)->capture_default_str();
  pr->add_option("--precision", prop.precision)->check(precision_check);
  pr->add_option("--out", prop.out)->capture_default_str();

  SwitchingParams sw;
  auto* swc = app.add_subcommand("switching", "Compare the measured transition with the erf law");
  swc->add_option("--epsilon", sw.epsilon)->required();
  swc->add_option("--gap", sw.gap)->capture_default_str();
  swc->add_option("--delta", sw.delta)->capture_default_str();
  swc->add_option("--rtol", sw.rtol);
  swc->add_option("--atol", sw.atol);
  swc->add_option("--uniform-points", sw.uniform_points)->capture_default_str();
  swc->add_option("--refined-points", sw.refined_points)->capture_default_str();
  swc->add_option("--precision", sw.precision)->check(precision_check);
  swc->add_flag("--timing", sw.timing, "Include wall-clock runtimes (breaks byte reproducibility)");
  swc->add_option("--out", sw.out, "Report JSON path")->capture_default_str();
  swc->add_option("--curve", sw.curve, "Curve CSV path");

  CrosscheckParams cc;
  auto* ccc = app.add_subcommand("crosscheck", "beta_N, 1/(pi sqrt 2) and the propagated amplitude");
  ccc->add_option("--n", cc.n)->capture_default_str();
  ccc->add_option("--epsilon", cc.epsilon)->capture_default_str();
  ccc->add_option("--out", cc.out)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*c) return cmd_coeffs(coeffs);
    if (*b) return cmd_beta(beta);
    if (*bd) return cmd_bounds(bounds);
    if (*s) return cmd_states(states);
    if (*ig) return cmd_integrals(integrals);
    if (*pr) return cmd_propagate(prop);
    if (*swc) return cmd_switching(sw);
    if (*ccc) return cmd_crosscheck(cc);
  } catch (const Error& e) {
    if (e.is_assertion()) {
      std::cerr << failure_record(e).dump() << '\n';
      return 2;
    }
    std::cerr << "superad: " << e.kind() << ": " << e.what() << '\n';
    return 1;
  } catch (const UsageError& e) {
    std::cerr << "superad: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "superad: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
