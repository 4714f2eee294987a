#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ufem {

struct SuiteReport {
  std::string name;
  int trials = 0;
  int violations = 0;
  double worst_margin = 1;  // min over trials of 1 - lhs/rhs
  std::string note;
  bool pass() const { return violations == 0; }
};

SuiteReport suite_laplace(int n_max = 12, int n_t = 81);
SuiteReport suite_domain_inverse_1d(int trials, std::uint64_t seed);
SuiteReport suite_triangle_inverse(int trials, std::uint64_t seed);   // base-strip version
SuiteReport suite_inscribed_inverse(int trials, std::uint64_t seed);  // inner homothetic triangle
SuiteReport suite_trace(int trials, std::uint64_t seed);
/// Two reports: the measured lifting constant and the coercivity bound that uses it.
std::vector<SuiteReport> suite_lifting_and_coercivity(int p, int trials, std::uint64_t seed);

std::vector<std::string> suite_names();
std::vector<SuiteReport> run_suite(const std::string& name, std::uint64_t seed);

/// ||L_p||^2 outside (-1,1) over the bound, at the given lambda.
double legendre_tightness(int p, double lambda);

}  // namespace ufem
