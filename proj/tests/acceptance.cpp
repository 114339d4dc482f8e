// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "superad/expansion.hpp"
#include "superad/oscillatory.hpp"
#include "superad/precision.hpp"
#include "superad/propagator.hpp"
#include "superad/superadiabatic.hpp"
#include "superad/transition_lab.hpp"

using namespace superad;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome exact_low_orders() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = ExactTable::build(4);
  const Rational want[] = {Rational(1, 2), Rational(1, 2), Rational(17, 32), Rational(197, 384)};
  bool ok = true;
  std::ostringstream os;
  for (int n = 1; n <= 4; ++n) {
    ok = ok && table.norm_g(n) == want[n - 1];
    os << "a_" << n << "=" << table.norm_g(n).get_str() << " ";
  }
  const double dt = seconds_since(t0);
  os << "time=" << fmt(dt) << "s";
  return {ok && dt < 1, os.str()};
}

Outcome bound_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  std::ostringstream os;
  try {
    const auto ex = verify_bounds(ExactTable::build(40));
    const auto fl = verify_bounds(FloatTable<double>::build(300));
    os << "exact n<=40 rows=" << ex.rows.size() << ", float n<=300 rows=" << fl.rows.size();
    bool e12 = true;
    for (const auto& r : ex.rows) e12 = e12 && r.e12_equal;
    for (const auto& r : fl.rows) e12 = e12 && r.e12_equal;
    const double dt = seconds_since(t0);
    os << ", e1/e2 equal=" << (e12 ? "yes" : "no") << " time=" << fmt(dt) << "s";
    return {e12 && ex.rows.size() == 40 && fl.rows.size() == 300 && dt < 120, os.str()};
  } catch (const BoundViolation& e) {
    return {false, e.what()};
  }
}

Outcome beta_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto b = beta_sequence<double>(5000);
  bool strict_from_2 = true, nonincreasing = true, above = true;
  for (std::size_t i = 1; i < b.size(); ++i) {
    if (!(b[i] <= b[i - 1])) nonincreasing = false;
    if (i >= 2 && !(b[i] < b[i - 1])) strict_from_2 = false;
  }
  for (double v : b) above = above && v > 5.0 / 24;
  const double star = 1 / (M_PI * std::sqrt(2.0));
  const double err = std::abs(b.back() - star);
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << "beta_1=beta_2=" << fmt(b[0]) << ", strictly decreasing for n>=2: " << (strict_from_2 ? "yes" : "no")
     << ", > 5/24: " << (above ? "yes" : "no") << ", |beta_5000 - 1/(pi sqrt2)|=" << fmt(err)
     << " time=" << fmt(dt) << "s";
  return {strict_from_2 && nonincreasing && above && err <= 1e-3 && dt < 60, os.str()};
}

Outcome oscillatory_asymptotics() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<double> ts;
  for (int i = 0; i <= 40; ++i) ts.push_back(-1 + i * 0.05);
  ts.back() = 1;
  bool ok = true;
  std::ostringstream os;
  for (int m : {50, 100, 200}) {
    const double bound = 2 * std::pow(m, -0.75);
    double sup_plus = 0, sup_minus = 0;
    for (PoleSign pole : {PoleSign::plus, PoleSign::minus}) {
      const IntegralSpec spec = IntegralSpec::with_m(m, pole, 0);
      const auto res = quadrature_grid(spec, ts, 1e-10);
      for (std::size_t i = 0; i < ts.size(); ++i) {
        IntegralSpec s = spec;
        s.t = ts[i];
        if (pole == PoleSign::plus) {
          sup_plus = std::max(sup_plus, std::abs(res[i].value - asymptotic_value(s)));
        } else {
          sup_minus = std::max(sup_minus, std::abs(res[i].value));
        }
      }
    }
    ok = ok && sup_plus <= bound && sup_minus <= bound;
    os << "m=" << m << ": " << fmt(sup_plus) << "/" << fmt(sup_minus) << " (bound " << fmt(bound) << ") ";
  }
  const double dt = seconds_since(t0);
  os << "time=" << fmt(dt) << "s";
  return {ok && dt < 120, os.str()};
}

// criteria 5, 6 and 8 share these runs
struct HeadlineRuns {
  ComparisonReport quarter, eighth;
  double seconds = 0;
};

HeadlineRuns headline_runs() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<ExperimentConfig> cfgs(2);
  cfgs[0].epsilon = 0.25;
  cfgs[1].epsilon = 0.125;
  cfgs[0].precision = cfgs[1].precision = Precision::double_;
  auto reps = sweep(cfgs);
  return {reps[0], reps[1], seconds_since(t0)};
}

Outcome switching_law(const HeadlineRuns& h) {
  bool ok = true;
  std::ostringstream os;
  for (const ComparisonReport* r : {&h.quarter, &h.eighth}) {
    const double tol = std::pow(r->config.epsilon, 0.25);
    const bool sup_ok = r->forward.sup_error <= tol * r->amplitude;
    const bool amp_ok = r->forward.amplitude_relative_error <= tol;
    ok = ok && sup_ok && amp_ok;
    os << "eps=" << r->config.epsilon << ": sup/amp=" << fmt(r->forward.sup_error_relative)
       << " final=" << fmt(r->forward.final_amplitude) << " vs " << fmt(r->amplitude)
       << " relerr=" << fmt(r->forward.amplitude_relative_error) << " (limit " << fmt(tol) << "); ";
  }
  const bool improves = h.eighth.forward.amplitude_relative_error < h.quarter.forward.amplitude_relative_error &&
                        h.eighth.forward.sup_error_relative < h.quarter.forward.sup_error_relative;
  os << "improves=" << (improves ? "yes" : "no") << " time=" << fmt(h.seconds) << "s";
  return {ok && improves && h.seconds < 300, os.str()};
}

Outcome switch_shape(const HeadlineRuns& h) {
  const auto& r = h.eighth.forward;
  const double w = std::sqrt(2 * 0.125);
  std::ostringstream os;
  os << "half-value time=" << fmt(r.half_time) << " (|t| <= " << fmt(w) << "), rise within |t|<=" << fmt(2 * w)
     << " = " << fmt(100 * r.rise_fraction) << "%";
  return {std::abs(r.half_time) <= w && r.rise_fraction >= 0.9, os.str()};
}

Outcome residual_structure() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto table = ExactTable::build(20);
  bool ok = true;
  double prev = INFINITY;
  std::ostringstream os;
  for (int k : {8, 12, 16}) {
    const auto st = make_state<Extended>(1.0 / k, 1, table);
    const ResidualNorms rn = residual_norms(st);
    const double ident = std::abs(rn.leading - rn.leading_identity) / rn.leading_identity;
    ok = ok && rn.ratio <= 1 && rn.ratio < prev && ident <= 1e-12;
    prev = rn.ratio;
    os << "eps=1/" << k << ": ratio=" << fmt(rn.ratio) << " identity relerr=" << fmt(ident) << "; ";
  }
  const double dt = seconds_since(t0);
  os << "time=" << fmt(dt) << "s";
  return {ok && dt < 60, os.str()};
}

Outcome basis_quality(const HeadlineRuns& h) {
  const auto& b = h.eighth.basis;
  const double bound = 2 * std::exp(-8.0);
  std::ostringstream os;
  os << "max|norm-1|=" << fmt(std::max(b.norm_defect_1, b.norm_defect_2)) << " max|<psi1,psi2>|=" << fmt(b.overlap)
     << " (bound " << fmt(bound) << ")";
  return {b.norm_defect_1 <= bound && b.norm_defect_2 <= bound && b.overlap <= bound, os.str()};
}

Outcome unit_covariance() {
  const auto t0 = std::chrono::steady_clock::now();
  const HamiltonianSpec phys{2.0, 0.5};
  PropagationConfig cfg;
  cfg.epsilon = 0.125;
  const auto rescaled = propagate<double>(HamiltonianSpec{}, cfg);
  const auto mapped = propagate<double>(phys, cfg);

  double dmap = 0, dtime = 0;
  for (std::size_t k = 0; k < rescaled.times.size(); ++k) {
    dtime = std::max(dtime, std::abs(mapped.times[k] / phys.delta - rescaled.times[k]));
    dmap = std::max(dmap, std::abs(std::abs(mapped.b2[k]) - std::abs(rescaled.b2[k])));
  }

  // the same problem integrated directly in the caller's units, chi_j(t) = psi_j(t/delta)
  const ResolvedConfig r = resolve(phys, cfg);
  const auto table = FloatTable<double>::build(r.order);
  const auto s1 = make_state<double>(r.epsilon_rescaled, 1, table);
  const auto s2 = make_state<double>(r.epsilon_rescaled, 2, table);
  std::vector<double> tgrid;
  for (double s : r.s_grid) tgrid.push_back(phys.delta * s);
  const Generator<double> H = [&](const double& t) { return hamiltonian(phys, t); };
  IntegratorOptions io;
  io.rtol = r.rtol;
  io.atol = r.atol;
  io.stages = r.stages;
  io.time_unit = phys.delta;
  const auto psi = evolve(H, cfg.epsilon, tgrid, evaluate_state(s1, r.s_grid.front()), io);
  double ddirect = 0;
  for (std::size_t k = 0; k < tgrid.size(); ++k) {
    const double b2 = std::abs(inner(evaluate_state(s2, tgrid[k] / phys.delta), psi[k]));
    ddirect = std::max(ddirect, std::abs(b2 - std::abs(rescaled.b2[k])));
  }
  const double dt = seconds_since(t0);
  std::ostringstream os;
  os << "max | |b2|(E=2,delta=.5) - |b2|(rescaled) | = " << fmt(dmap) << ", time map defect " << fmt(dtime)
     << ", direct original-unit integration " << fmt(ddirect) << " time=" << fmt(dt) << "s";
  return {dmap <= 1e-10 && dtime <= 1e-12 && ddirect <= 1e-10 && dt < 300, os.str()};
}

}  // namespace

int main() {
  std::vector<std::pair<int, std::function<Outcome()>>> jobs;
  HeadlineRuns headline;
  bool headline_ready = false;
  auto need_headline = [&]() -> const HeadlineRuns& {
    if (!headline_ready) {
      headline = headline_runs();
      headline_ready = true;
    }
    return headline;
  };

  jobs.emplace_back(1, exact_low_orders);
  jobs.emplace_back(2, bound_suite);
  jobs.emplace_back(3, beta_convergence);
  jobs.emplace_back(4, oscillatory_asymptotics);
  jobs.emplace_back(5, [&] { return switching_law(need_headline()); });
  jobs.emplace_back(6, [&] { return switch_shape(need_headline()); });
  jobs.emplace_back(7, residual_structure);
  jobs.emplace_back(8, [&] { return basis_quality(need_headline()); });
  jobs.emplace_back(9, unit_covariance);

  int failures = 0;
  for (auto& [id, job] : jobs) {
    Outcome o;
    try {
      o = job();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    failures += o.pass ? 0 : 1;
    std::printf("criterion %d: %s  %s\n", id, o.pass ? "PASS" : "FAIL", o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(jobs.size()) - failures, jobs.size());
  return failures == 0 ? 0 : 1;
}
