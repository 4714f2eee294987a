#include "ufem/adapt.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace ufem;

TEST_CASE("dorfler marking") {
  CHECK(dorfler_mark({4, 1, 1, 1, 1}, 0.5) == std::vector<int>{0});
  for (int n : {1, 4, 7, 8, 13}) {
    std::vector<double> eq(n, 2.0);
    auto m = dorfler_mark(eq, 0.5);
    CHECK(int(m.size()) == (n + 3) / 4);
    // ties broken by element id
    for (size_t k = 0; k < m.size(); ++k) CHECK(m[k] == int(k));
  }
  auto all = dorfler_mark({1, 2, 3}, 1.0);
  std::sort(all.begin(), all.end());
  CHECK(all == std::vector<int>{0, 1, 2});
  auto m = dorfler_mark({0.1, 5, 0.2, 3}, 0.8);
  CHECK(m == std::vector<int>{1, 3});
}

TEST_CASE("dorfler prefix is minimal") {
  std::vector<double> xi2;
  for (int k = 0; k < 200; ++k) xi2.push_back(std::pow(1.03, (k * 37) % 200));
  double total = 0;
  for (double v : xi2) total += v;
  for (double theta : {0.3, 0.5, 0.7}) {
    auto m = dorfler_mark(xi2, theta);
    double s = 0;
    for (int k : m) s += xi2[k];
    CHECK(s >= theta * theta * total);
    CHECK(s - xi2[m.back()] < theta * theta * total);
  }
}

TEST_CASE("large tolerance stops after the first iteration") {
  AdaptOptions o;
  o.tol = 1e6;
  auto st = adapt_loop(example1(), o);
  CHECK(st.history.size() == 1);
  CHECK(st.stop_reason == "tolerance");
}

TEST_CASE("short adaptive run on example 1") {
  AdaptOptions o;
  o.p = 1;
  o.max_iters = 5;
  int calls = 0;
  auto st = adapt_loop(example1(), o, [&](const IterationView& v) {
    ++calls;
    CHECK(v.row.audit_ok);
    CHECK(v.row.asymmetry <= 1e-12);
    CHECK(v.row.cg_residual <= 1e-10);
    CHECK(v.row.n_dofs == v.ctx.ndofs());
    CHECK(v.row.err_dg.has_value());
  });
  CHECK(calls == 5);
  CHECK(st.stop_reason == "iteration budget");
  REQUIRE(st.history.size() == 5);
  for (size_t k = 1; k < st.history.size(); ++k) {
    CHECK(st.history[k].n_dofs > st.history[k - 1].n_dofs);
    CHECK(st.history[k].max_level >= st.history[k - 1].max_level);
  }
  CHECK(st.history.back().eta < st.history.front().eta);
  CHECK(st.history.back().eff.value() > 1.0);
}

TEST_CASE("dof budget") {
  AdaptOptions o;
  o.max_dofs = 3000;
  auto st = adapt_loop(example1(), o);
  CHECK(st.stop_reason == "dof budget");
  CHECK(st.history.back().n_dofs >= 3000);
  CHECK(st.history[st.history.size() - 2].n_dofs < 3000);
}
