#include "ufem/adapt.hpp"
#include "ufem/io.hpp"
#include "ufem/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

using namespace ufem;

namespace {

constexpr int kMaxDofs = 30000;
constexpr double kPatchErr = 1e-8, kPatchEta = 1e-7, kPatchSeconds = 10;
constexpr double kSlopeTol1 = 0.25, kSlopeTol2 = 0.3;
constexpr int kLast = 5;
constexpr double kEffVariation = 0.5;
constexpr double kEffRange[3][2] = {{2, 12}, {3, 15}, {4, 20}};
constexpr int kMinTrials = 10000;
constexpr double kSuiteSeconds = 60;
constexpr double kAsymmetry = 1e-12, kCgTol = 1e-10;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Run {
  std::string label;
  int p = 1;
  AdaptState st;
  bool audits = true;
  double asym = 0, cg = 0;
  std::string failure;
};

struct Tally {
  bool audits = true;
  double asym = 0, cg = 0;
  std::string note;
};

Tally tally;

Run run(const std::string& label, const ProblemSpec& pb, int p, int max_iters = 40) {
  Run r;
  r.label = label;
  r.p = p;
  AdaptOptions o;
  o.p = p;
  o.max_dofs = kMaxDofs;
  o.max_iters = max_iters;
  try {
    r.st = adapt_loop(pb, o, [&](const IterationView& v) {
      r.audits = r.audits && v.row.audit_ok;
      r.asym = std::max(r.asym, v.row.asymmetry);
      r.cg = std::max(r.cg, v.row.cg_residual);
    });
  } catch (const Error& e) {
    r.failure = e.what();
  }
  tally.audits = tally.audits && r.audits && r.failure.empty();
  tally.asym = std::max(tally.asym, r.asym);
  tally.cg = std::max(tally.cg, r.cg);
  if (!r.failure.empty()) tally.note += " " + label + " threw: " + r.failure;
  else if (!r.audits) tally.note += " " + label + " audit failed";
  return r;
}

std::pair<double, double> slopes(const Run& r) {
  const auto& h = r.st.history;
  if (h.size() < 3) return {NAN, NAN};
  size_t s = h.size() > size_t(kLast) ? h.size() - kLast : 0;
  std::vector<double> n, e, d;
  for (size_t k = s; k < h.size(); ++k) {
    n.push_back(h[k].n_dofs);
    e.push_back(h[k].eta);
    d.push_back(h[k].err_dg.value_or(NAN));
  }
  return {loglog_slope(n, e), std::isnan(d[0]) ? NAN : loglog_slope(n, d)};
}

bool report(int c, const std::string& name, bool ok, const std::string& detail) {
  std::printf("criterion %d %-32s %s  %s\n", c, name.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  return ok;
}

std::string fmt(const char* f, double a, double b = 0, double c = 0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

}  // namespace

int main() {
  bool all = true;

  // 1. patch test, first iteration only
  {
    bool ok = true;
    std::string d;
    for (int p = 1; p <= 3; ++p) {
      auto t0 = std::chrono::steady_clock::now();
      Run r = run("patch p" + std::to_string(p), patch_problem(), p, 1);
      double sec = seconds_since(t0);
      if (!r.failure.empty() || r.st.history.empty()) {
        ok = false;
        d += " p" + std::to_string(p) + " failed";
        continue;
      }
      const auto& row = r.st.history.front();
      double err = row.err_dg.value_or(INFINITY);
      ok = ok && err <= kPatchErr && row.eta <= kPatchEta && sec < kPatchSeconds;
      d += fmt(" p%.0f: err %.2e eta %.2e", p, err, row.eta) + fmt(" %.1fs", sec);
    }
    all &= report(1, "patch test", ok, d);
  }

  // 2 and 3. example 1
  std::vector<Run> ex1;
  for (int p = 1; p <= 3; ++p) ex1.push_back(run("example1 p" + std::to_string(p), example1(), p));
  {
    bool ok = true;
    std::string d;
    for (const auto& r : ex1) {
      auto [se, sd] = slopes(r);
      double target = -0.5 * r.p;
      ok = ok && r.failure.empty() && std::abs(se - target) <= kSlopeTol1 && std::abs(sd - target) <= kSlopeTol1;
      d += fmt(" p%.0f: eta %.3f err %.3f", r.p, se, sd) + fmt(" (target %.1f)", target);
    }
    all &= report(2, "example 1 rates", ok, d);
  }
  {
    bool ok = true;
    std::string d;
    for (const auto& r : ex1) {
      const auto& h = r.st.history;
      double lo = kEffRange[r.p - 1][0], hi = kEffRange[r.p - 1][1];
      double emin = INFINITY, emax = 0;
      for (size_t k = 3; k < h.size(); ++k) {
        double e = h[k].eff.value_or(NAN);
        ok = ok && e >= lo && e <= hi;
        emin = std::min(emin, e);
        emax = std::max(emax, e);
      }
      double tmin = INFINITY, tmax = 0;
      for (size_t k = h.size() > size_t(kLast) ? h.size() - kLast : 0; k < h.size(); ++k) {
        tmin = std::min(tmin, h[k].eff.value_or(NAN));
        tmax = std::max(tmax, h[k].eff.value_or(NAN));
      }
      double var = (tmax - tmin) / tmin;
      ok = ok && r.failure.empty() && h.size() > 3 && var <= kEffVariation;
      d += fmt(" p%.0f: eff in [%.2f, %.2f]", r.p, emin, emax) + fmt(" var %.2f", var);
    }
    all &= report(3, "example 1 effectivity", ok, d);
  }

  // 4. examples 2 and 3
  {
    bool ok = true;
    std::string d;
    for (int ex = 2; ex <= 3; ++ex)
      for (int p = 1; p <= 3; ++p) {
        Run r = run("example" + std::to_string(ex) + " p" + std::to_string(p), ex == 2 ? example2() : example3(), p);
        double se = slopes(r).first, target = -0.5 * p;
        ok = ok && r.failure.empty() && std::abs(se - target) <= kSlopeTol2;
        d += fmt(" ex%.0f p%.0f: eta %.3f", ex, p, se);
        if (ex == 3 && r.failure.empty()) {
          int top = r.st.mesh.max_level(), low = top;
          auto pb = example3();
          for (const auto& sp : pb.curve.singular_points())
            for (const auto& L : r.st.mesh.leaves())
              if (L.rect.contains(sp.point, 1e-12)) low = std::min(low, L.level);
          bool deep = low >= top - 1;
          ok = ok && deep;
          d += fmt(" (singular level %.0f of %.0f)", low, top);
        }
      }
    all &= report(4, "examples 2 and 3 rates", ok, d);
  }

  // 5. inequality suites
  {
    auto t0 = std::chrono::steady_clock::now();
    int trials = 0, viol = 0;
    for (const auto& n : suite_names())
      for (const auto& r : run_suite(n, 2024)) {
        trials += r.trials;
        viol += r.violations;
      }
    double sec = seconds_since(t0);
    all &= report(5, "inequality suites", viol == 0 && trials >= kMinTrials && sec < kSuiteSeconds,
                  fmt("trials %.0f violations %.0f time %.1fs", trials, viol, sec));
  }

  // 6 and 7 cover every run above
  all &= report(6, "mesh audit on every iteration", tally.audits, tally.note);
  all &= report(7, "symmetry and solver", tally.asym <= kAsymmetry && tally.cg <= kCgTol,
                fmt("max asymmetry %.2e max cg residual %.2e", tally.asym, tally.cg));
  return all ? 0 : 1;
}
