#include "ufem/adapt.hpp"
#include "ufem/io.hpp"
#include "ufem/verify.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>

namespace fs = std::filesystem;
using namespace ufem;

namespace {

struct RunArgs {
  std::string config, problem, out = ".";
  int p = -1, N0 = -1, max_dofs = -1, max_iters = -1, quad_offset = -1, beta = -1, threads = 1;
  double alpha0 = -1, delta0 = -1, tol = -1, theta = -1;
  long seed = -1;
  bool dump_meshes = false, dump_matrix = false, quiet = false;
};

double as_double(const std::map<std::string, std::string>& kv, const std::string& k, double def) {
  auto it = kv.find(k);
  if (it == kv.end()) return def;
  try {
    size_t pos;
    double v = std::stod(it->second, &pos);
    if (pos == it->second.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::BadInput, "config key " + k + " is not a number");
}

int cmd_run(const RunArgs& a) {
  std::map<std::string, std::string> kv;
  if (!a.config.empty()) kv = read_config(a.config);
  std::string name = !a.problem.empty() ? a.problem : (kv.count("problem") ? kv.at("problem") : "example1");
  ProblemSpec pb = name == "custom" ? custom_problem(kv) : problem_by_name(name);

  AdaptOptions opt;
  opt.p = a.p > 0 ? a.p : static_cast<int>(as_double(kv, "p", 1));
  opt.alpha0 = a.alpha0 > 0 ? a.alpha0 : as_double(kv, "alpha0", 1);
  opt.delta0 = a.delta0 > 0 ? a.delta0 : as_double(kv, "delta0", 0.25);
  opt.N0 = a.N0 > 0 ? a.N0 : static_cast<int>(as_double(kv, "N0", 3));
  opt.tol = a.tol >= 0 ? a.tol : as_double(kv, "TOL", 0);
  opt.max_dofs = a.max_dofs > 0 ? a.max_dofs : static_cast<int>(as_double(kv, "max_dofs", 200000));
  opt.max_iters = a.max_iters > 0 ? a.max_iters : static_cast<int>(as_double(kv, "max_iters", 40));
  opt.quad_offset = a.quad_offset >= 0 ? a.quad_offset : static_cast<int>(as_double(kv, "quad_order_offset", 3));
  opt.beta = a.beta >= 0 ? a.beta : static_cast<int>(as_double(kv, "beta_convention", 1));
  opt.theta = a.theta > 0 ? a.theta : as_double(kv, "theta", 0.5);
  std::string out = a.out != "." ? a.out : (kv.count("output") ? kv.at("output") : ".");
  if (!(opt.delta0 > 0 && opt.delta0 < 0.5)) throw Error(ErrorKind::BadInput, "delta0 must lie in (0, 0.5)");
  if (opt.p < 1 || opt.p > 12) throw Error(ErrorKind::BadInput, "p must lie in 1..12");
  if (opt.N0 < 1) throw Error(ErrorKind::BadInput, "N0 must be at least 1");
  if (opt.beta != 0 && opt.beta != 1) throw Error(ErrorKind::BadInput, "beta_convention must be 0 or 1");
  fs::create_directories(out);

  if (!a.quiet) std::cout << history_header() << ",cg_iters,audit\n";
  AdaptState st = adapt_loop(pb, opt, [&](const IterationView& v) {
    if (!a.quiet) std::cout << history_line(v.row) << ',' << v.row.cg_iterations << ','
                            << (v.row.audit_ok ? "ok" : "FAIL") << std::endl;
    if (!v.row.audit_ok && v.row.audit) {
      const auto& au = *v.row.audit;
      std::cerr << "audit: all_large " << au.all_large << " max_eta " << au.max_eta << " max_hanging "
                << au.max_hanging << " area_error " << au.area_error << " merge_ratio " << au.max_merge_ratio << '\n';
    }
    char buf[32];
    if (a.dump_meshes) {
      std::snprintf(buf, sizeof buf, "mesh_%04d", v.row.iter);
      write_mesh_dump((fs::path(out) / (std::string(buf) + ".txt")).string(), v.induced.induced, v.induced.mesh);
      write_text((fs::path(out) / (std::string(buf) + ".svg")).string(),
                 mesh_svg(v.induced.induced, pb.curve, pb.domain));
    }
    if (a.dump_matrix) {
      std::snprintf(buf, sizeof buf, "matrix_%04d.txt", v.row.iter);
      write_matrix(assemble(v.ctx).A, (fs::path(out) / buf).string());
    }
  });
  write_history((fs::path(out) / "history.csv").string(), st.history);
  bool audits = true;
  for (const auto& r : st.history) audits = audits && r.audit_ok;
  if (!a.quiet) std::cout << "stopped: " << st.stop_reason << '\n';
  if (!audits) {
    std::cerr << "error: mesh audit failed on at least one iteration\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::vector<std::string>& suites, std::uint64_t seed) {
  std::vector<std::string> names = suites.empty() ? suite_names() : suites;
  for (const auto& n : names) {
    bool known = false;
    for (const auto& k : suite_names()) known = known || k == n;
    if (!known) {
      std::cerr << "error: unknown suite '" << n << "'\n";
      return 2;
    }
  }
  bool ok = true;
  int total = 0;
  std::printf("%-24s %8s %14s %6s\n", "suite", "trials", "worst_margin", "pass");
  for (const auto& n : names)
    for (const auto& r : run_suite(n, seed)) {
      std::printf("%-24s %8d %14.6e %6s", r.name.c_str(), r.trials, r.worst_margin, r.pass() ? "yes" : "NO");
      if (!r.note.empty()) std::printf("  %s", r.note.c_str());
      std::printf("\n");
      ok = ok && r.pass();
      total += r.trials;
    }
  std::printf("total trials %d\n", total);
  return ok ? 0 : 1;
}

int cmd_rates(const std::vector<std::string>& files, int p, int last) {
  std::printf("%-40s %10s %10s %10s\n", "file", "eta_slope", "err_slope", "target");
  for (const auto& f : files) {
    auto pts = read_history(f);
    if (pts.size() < 3) throw Error(ErrorKind::BadInput, f + " has fewer than 3 rows");
    size_t start = pts.size() > size_t(last) ? pts.size() - last : 0;
    std::vector<double> n, e, d;
    bool has_err = true;
    for (size_t k = start; k < pts.size(); ++k) {
      n.push_back(pts[k].n_dofs);
      e.push_back(pts[k].eta);
      d.push_back(pts[k].err_dg);
      has_err = has_err && pts[k].err_dg > 0;
    }
    std::string target = p > 0 ? std::to_string(-0.5 * p) : "n/a";
    std::string es = has_err ? std::to_string(loglog_slope(n, d)) : "n/a";
    std::printf("%-40s %10.6f %10s %10s\n", f.c_str(), loglog_slope(n, e), es.c_str(), target.c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive unfitted LDG solver for elliptic interface problems"};
  app.require_subcommand(1);

  RunArgs ra;
  auto* run = app.add_subcommand("run", "adaptive solve; writes history.csv");
  run->add_option("--config", ra.config, "key = value configuration file");
  run->add_option("--problem", ra.problem, "example1 | example2 | example3 | patch | custom");
  run->add_option("-p,--degree", ra.p, "polynomial degree");
  run->add_option("--alpha0", ra.alpha0);
  run->add_option("--delta0", ra.delta0);
  run->add_option("--N0", ra.N0, "hanging nodes per side");
  run->add_option("--tol", ra.tol, "stop when eta <= tol");
  run->add_option("--max-dofs", ra.max_dofs);
  run->add_option("--max-iters", ra.max_iters);
  run->add_option("--quad-offset", ra.quad_offset);
  run->add_option("--beta", ra.beta, "lifting flux side: 1 minus, 0 plus");
  run->add_option("--theta", ra.theta, "Dorfler fraction");
  run->add_option("--seed", ra.seed);
  run->add_option("--threads", ra.threads, "accepted; assembly runs single-threaded");
  run->add_option("-o,--out", ra.out, "output directory");
  run->add_flag("--dump-meshes", ra.dump_meshes);
  run->add_flag("--dump-matrix", ra.dump_matrix);
  run->add_flag("-q,--quiet", ra.quiet);

  std::vector<std::string> suites;
  std::uint64_t seed = 2024;
  auto* ver = app.add_subcommand("verify", "randomized inequality suites");
  ver->add_option("--suite", suites, "laplace | inverse1d | strip | inscribed | trace | coercivity");
  ver->add_option("--seed", seed);

  std::vector<std::string> files;
  int rp = -1, last = 5;
  auto* rates = app.add_subcommand("rates", "log-log slopes from history files");
  rates->add_option("files", files)->required();
  rates->add_option("-p,--degree", rp, "degree for the -p/2 target");
  rates->add_option("--last", last, "number of trailing rows in the fit");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  try {
    if (*run) return cmd_run(ra);
    if (*ver) return cmd_verify(suites, seed);
    if (*rates) return cmd_rates(files, rp, last);
  } catch (const Error& e) {
    std::cerr << "error [" << error_name(e.kind()) << "]: " << e.detail() << '\n';
    return e.kind() == ErrorKind::BadInput ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
