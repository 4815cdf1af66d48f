// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <new>
#include <random>
#include <string>
#include <vector>

#include "trendboot/engine.hpp"
#include "trendboot/harness.hpp"
#include "trendboot/multipliers.hpp"
#include "trendboot/rng.hpp"
#include "trendboot/smoothers.hpp"

namespace {

std::atomic<long long> g_live_bytes{0};
std::atomic<long long> g_allocations{0};
constexpr std::size_t kHeader = alignof(std::max_align_t);

}  // namespace

void* operator new(std::size_t n) {
  auto* p = static_cast<unsigned char*>(std::malloc(n + kHeader));
  if (!p) throw std::bad_alloc();
  *reinterpret_cast<std::size_t*>(p) = n;
  g_live_bytes.fetch_add(static_cast<long long>(n), std::memory_order_relaxed);
  g_allocations.fetch_add(1, std::memory_order_relaxed);
  return p + kHeader;
}
void operator delete(void* q) noexcept {
  if (!q) return;
  auto* p = static_cast<unsigned char*>(q) - kHeader;
  g_live_bytes.fetch_sub(static_cast<long long>(*reinterpret_cast<std::size_t*>(p)),
                         std::memory_order_relaxed);
  std::free(p);
}
void operator delete(void* q, std::size_t) noexcept { operator delete(q); }

namespace tb = trendboot;

namespace {

struct Outcome {
  int id;
  std::string title;
  bool ok;
  std::string detail;
};

std::vector<Outcome> g_outcomes;

void report(int id, const char* title, bool ok, const std::string& detail) {
  std::fprintf(stderr, "criterion %d done\n", id);
  g_outcomes.push_back({id, title, ok, detail});
}

std::string num(double v, int digits = 4) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

void criterion_1() {
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n01;
  double worst = 0.0;
  for (int inst = 0; inst < 200; ++inst) {
    tb::EngineConfig c;
    const double eta = 0.01 + 0.7 * u(gen);
    c.smoother = inst % 2 ? tb::SmootherParams::brown(eta) : tb::SmootherParams::ewma(eta);
    c.t0 = static_cast<std::uint64_t>(20 * u(gen));
    const auto len = 2 + static_cast<std::uint64_t>(298 * u(gen));
    c.t1 = c.t0 + 1;
    c.t2 = c.t0 + len;
    c.b1 = 2;
    c.b2 = 2;
    c.seed = gen();
    std::vector<double> x(c.t2);
    for (std::size_t k = 0; k < x.size(); ++k) x[k] = 0.01 * k + n01(gen);
    tb::Engine e(c, std::span(x).first(c.t0));
    std::vector<std::vector<double>> v(c.replicates());
    std::vector<double> xs, lagged;
    for (std::uint64_t t = c.t0 + 1; t <= c.t2; ++t) {
      lagged.push_back(e.level());
      xs.push_back(x[t - 1]);
      e.step(x[t - 1]);
      for (std::size_t b = 0; b < v.size(); ++b) {
        v[b].push_back(e.last_multipliers()[b]);
        const double direct = tb::bootstrap_delta_direct(c.smoother, v[b], xs, lagged, xs.size());
        worst = std::max(worst, std::fabs(direct - e.replicate_deltas()[b]));
      }
    }
  }
  report(1, "online bootstrap replicates equal the direct weighted sum", worst <= 1e-9,
         "200 instances, max abs error " + num(worst));
}

void criterion_2() {
  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> n01;
  double worst_rec = 0.0;
  for (int inst = 0; inst < 100; ++inst) {
    const double eta = 0.01 + 0.9 * u(gen);
    const auto p = inst % 2 ? tb::SmootherParams::brown(eta) : tb::SmootherParams::ewma(eta);
    tb::Smoother s(p);
    std::vector<double> x(300);
    for (auto& v : x) v = n01(gen);
    for (std::uint64_t t = 1; t <= x.size(); ++t) {
      const double online = s.update(x[t - 1]);
      double direct = 0.0;
      for (std::uint64_t i = 1; i <= t; ++i) direct += tb::weight(p, t, i) * x[i - 1];
      worst_rec = std::max(worst_rec, std::fabs(online - direct));
    }
  }
  double worst_nu = 0.0;
  for (double eta = 0.001; eta < 1.0; eta += 0.0137) {
    const double nu = tb::effective_sample_size(tb::SmootherParams::ewma(eta));
    worst_nu = std::max(worst_nu, std::fabs(nu - (2.0 - eta) / eta) / nu);
  }
  int points = 0, violations = 0;
  for (double eta : {0.01, 0.03, 0.1, 0.2, 0.5}) {
    for (std::uint32_t c : {1u, 2u, 4u, 8u}) {
      for (double gamma : {2.5, 3.0, 5.0, 8.0, 12.0}) {
        const double lo = 1.0 / c;
        for (int a = 0; a < 4; ++a) {
          for (int b = 0; b < 3; ++b) {
            const double s = lo + (1.0 - lo) * a / 3.0;
            const double t = lo + (1.0 - lo) * (b + 0.5) / 3.0;
            const double bound = 4.0 * std::pow(static_cast<double>(c), 1.0 / gamma) *
                                 std::pow(std::fabs(s - t) + eta, 1.0 / gamma);
            if (tb::weight_distance(eta, s, t, gamma, c) > bound) ++violations;
            ++points;
          }
        }
      }
    }
  }
  const bool ok = worst_rec <= 1e-10 && worst_nu <= 1e-14 && violations == 0 && points >= 1000;
  report(2, "smoother closed forms and weight-distance bound", ok,
         "recursion err " + num(worst_rec) + ", EWMA nu rel err " + num(worst_nu) + ", bound " +
             std::to_string(points - violations) + "/" + std::to_string(points));
}

void criterion_3() {
  bool ok = true;
  std::string detail;
  for (double dof : {3.0, 4.0, 8.0, 30.0}) {
    const tb::Transform T(tb::TransformKind::kStudent, dof);
    tb::RandomStream rs(7, tb::StreamTag::kReplicate, static_cast<std::uint64_t>(dof));
    const int n = 1000000;
    double s1 = 0.0, s2 = 0.0;
    for (int k = 0; k < n; ++k) {
      const double v = T(rs.normal());
      s1 += v;
      s2 += v * v;
    }
    const double mean = s1 / n, var = s2 / n - mean * mean;
    ok = ok && std::fabs(mean) <= 0.01 && std::fabs(var - 1.0) <= 0.02;
    detail += "dof " + num(dof, 3) + ": mean " + num(mean, 3) + " var " + num(var) + "; ";
  }
  detail.resize(detail.size() - 2);
  report(3, "transform T has mean 0 and variance 1", ok, detail);
}

void criterion_4() {
  const double rho = tb::persistence(50.0, tb::kDefaultChi);
  tb::RandomStream rs(11, tb::StreamTag::kReplicate, 0);
  const tb::Transform id(tb::TransformKind::kIdentity, 0.0);
  tb::MultiplierState st;
  std::vector<double> z(1000000);
  for (auto& v : z) v = tb::multiplier_step(st, rho, rs.normal(), id);
  bool ok = true;
  std::string detail = "rho " + num(rho) + ";";
  for (std::size_t h : {1u, 5u, 20u}) {
    const std::size_t m = z.size() - h;
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t k = 0; k < m; ++k) {
      sx += z[k];
      sy += z[k + h];
      sxy += z[k] * z[k + h];
      sxx += z[k] * z[k];
      syy += z[k + h] * z[k + h];
    }
    const double cov = sxy / m - sx / m * sy / m;
    const double corr = cov / std::sqrt((sxx / m - sx / m * sx / m) * (syy / m - sy / m * sy / m));
    const double target = std::pow(rho, static_cast<double>(h));
    ok = ok && std::fabs(corr - target) <= 0.01;
    detail += " h=" + std::to_string(h) + ": " + num(corr) + " vs " + num(target);
  }
  report(4, "latent multiplier autocorrelation is rho^h", ok, detail);
}

tb::ExperimentConfig reference_setup(double phi) {
  tb::ExperimentConfig c;
  c.dgp_id = "stationary";
  c.dgp = tb::DgpParams::preset("stationary", phi);
  c.t0 = 500;
  c.t1 = 900;
  c.t2 = 3500;
  c.b1 = 40;
  c.b2 = 160;
  c.alpha = 0.1;
  c.replications = 150;
  c.seed = 1;
  c.nu_grid = {30.0, 50.0, 100.0};
  return c;
}

const tb::MetricsRow& row(const tb::ExperimentResult& r, std::string_view method, double nu) {
  for (const auto& x : r.rows) {
    if (x.method == method && x.nu == nu) return x;
  }
  std::fprintf(stderr, "missing row %s nu=%g\n", std::string(method).c_str(), nu);
  std::abort();
}

std::string coverage_list(const tb::ExperimentResult& r, std::string_view method) {
  std::string out = std::string(method) + ":";
  for (const auto& x : r.rows) {
    if (x.method == method) out += " nu=" + num(x.nu, 3) + " " + num(x.uniform_coverage, 3);
  }
  return out;
}

void criteria_5_6_10() {
  const auto r03 = tb::run_experiment(reference_setup(0.3));
  const auto r06 = tb::run_experiment(reference_setup(0.6));

  bool ok5 = true;
  for (double nu : {30.0, 50.0, 100.0}) {
    const auto& a = row(r03, "ours", nu);
    ok5 = ok5 && a.uniform_coverage >= 0.90 - 3.0 * a.mc_stderr;
    ok5 = ok5 && row(r06, "ours", nu).uniform_coverage >= 0.80;
  }
  report(5, "uniform coverage of the bootstrap band", ok5,
         "phi=0.3 " + coverage_list(r03, "ours") + " | phi=0.6 " + coverage_list(r06, "ours"));

  bool ok6 = true;
  for (double nu : {30.0, 50.0, 100.0}) {
    const double ours = row(r06, "ours", nu).uniform_coverage;
    ok6 = ok6 && row(r06, "iid", nu).uniform_coverage <= ours - 0.05;
    ok6 = ok6 && row(r06, "ws", nu).uniform_coverage <= ours - 0.05;
  }
  report(6, "baselines undercover relative to the bootstrap band at phi=0.6", ok6,
         coverage_list(r06, "ours") + " | " + coverage_list(r06, "iid") + " | " +
             coverage_list(r06, "ws"));

  auto ablation = reference_setup(0.6);
  ablation.methods = {"ours"};
  ablation.nu_grid = {30.0};
  ablation.transform = tb::TransformKind::kIdentity;
  const auto rid = tb::run_experiment(ablation);
  auto heavy = reference_setup(0.6);
  heavy.methods = {"ours"};
  heavy.dgp.innovation = tb::InnovationKind::kStandardizedT;
  heavy.dgp.innovation_df = 6.0;
  const auto rt6 = tb::run_experiment(heavy);
  const double with_t = row(r06, "ours", 30.0).uniform_coverage;
  const double without = row(rid, "ours", 30.0).uniform_coverage;
  bool ok10 = without < with_t;
  std::string detail = "nu=30 identity " + num(without, 3) + " vs T " + num(with_t, 3) + "; t6 innovations";
  for (double nu : {30.0, 50.0, 100.0}) {
    const double g = row(r06, "ours", nu).uniform_coverage;
    const double t = row(rt6, "ours", nu).uniform_coverage;
    ok10 = ok10 && std::fabs(g - t) < 0.05;
    detail += " nu=" + num(nu, 3) + " " + num(t, 3) + " vs " + num(g, 3);
  }
  report(10, "ablation: identity transform lowers coverage, t6 innovations do not move it", ok10,
         detail);
}

void criterion_7() {
  auto c = reference_setup(0.3);
  c.methods = {"ours"};
  c.nu_grid = {10.0, 30.0, 100.0, 300.0};
  const auto r = tb::run_experiment(c);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::string detail;
  for (const auto& x : r.rows) {
    const double lx = std::log(x.nu), ly = std::log(x.avg_width);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    detail += "nu=" + num(x.nu, 3) + " width " + num(x.avg_width) + "; ";
  }
  const double n = static_cast<double>(r.rows.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  report(7, "average width scales like nu^-1/2", std::fabs(slope + 0.5) <= 0.1,
         detail + "slope " + num(slope));
}

void criterion_8() {
  auto base = reference_setup(0.3);
  base.methods = {"ours"};
  base.nu_grid = {50.0};
  auto run = [&](double a, double amplitude) {
    auto c = base;
    c.dgp_id = "trend_seasonal";
    c.dgp = tb::DgpParams::preset("trend_seasonal", 0.3);
    c.dgp.a = a;
    c.dgp.amplitude = amplitude;
    return tb::run_experiment(c).rows.front();
  };
  const auto null = run(0.0, 0.0);
  const double null_power = null.power_curve.back();
  const double null_se = tb::coverage_stderr(null_power, null.replications);
  bool ok = null_power <= base.alpha + 3.0 * null_se;
  std::string detail = "null " + num(null_power, 3);
  double prev = -1.0;
  for (double a : {0.0005, 0.001, 0.005}) {
    const double p = run(a, tb::DgpParams::preset("trend_seasonal", 0.3).amplitude).power_curve.back();
    ok = ok && p >= prev;
    prev = p;
    detail += "; a=" + num(a, 3) + " " + num(p, 3);
  }
  ok = ok && prev >= 0.9;
  report(8, "power is ordered in the trend slope and controlled under the null", ok, detail);
}

void criterion_9() {
  tb::EngineConfig c;
  c.smoother = tb::SmootherParams::ewma(2.0 / 51.0);
  c.t0 = 500;
  c.t1 = 900;
  c.t2 = 50000;
  c.seed = 9;
  tb::RandomStream data(9, tb::StreamTag::kDgpNoise, 0);
  std::vector<double> x(c.t2);
  for (auto& v : x) v = data.normal();
  tb::Engine e(c, std::span(x).first(c.t0));
  using clock = std::chrono::steady_clock;
  const std::uint64_t steps = c.t2 - c.t0;
  std::vector<double> ns(steps);
  long long bytes_1000 = 0;
  long long allocs_1000 = 0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const auto start = clock::now();
    e.step(x[c.t0 + k - 1]);
    ns[k - 1] = std::chrono::duration<double, std::nano>(clock::now() - start).count();
    if (k == 1000) {
      bytes_1000 = g_live_bytes.load();
      allocs_1000 = g_allocations.load();
    }
  }
  const long long bytes_end = g_live_bytes.load();
  const long long allocs_end = g_allocations.load();
  auto mean = [&](std::size_t from, std::size_t to) {
    double s = 0.0;
    for (std::size_t k = from; k < to; ++k) s += ns[k];
    return s / static_cast<double>(to - from);
  };
  const double early = mean(1000, 2000);
  const double late = mean(steps - 1000, steps);
  const bool ok = bytes_end == bytes_1000 && allocs_end == allocs_1000 && late <= 2.0 * early;
  report(9, "constant memory and per-step latency", ok,
         "heap bytes " + std::to_string(bytes_1000) + " -> " + std::to_string(bytes_end) +
             ", allocations during steps " + std::to_string(allocs_end - allocs_1000) +
             ", mean step " + num(early) + " ns -> " + num(late) + " ns");
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_9();
  criteria_5_6_10();
  criterion_7();
  criterion_8();
  std::sort(g_outcomes.begin(), g_outcomes.end(),
            [](const Outcome& a, const Outcome& b) { return a.id < b.id; });
  int failures = 0;
  for (const auto& o : g_outcomes) {
    std::printf("%s criterion %d: %s (%s)\n", o.ok ? "PASS" : "FAIL", o.id, o.title.c_str(),
                o.detail.c_str());
    if (!o.ok) ++failures;
  }
  std::printf("%d of %zu criteria failed\n", failures, g_outcomes.size());
  return failures == 0 ? 0 : 1;
}
