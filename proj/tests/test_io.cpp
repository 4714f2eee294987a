#include "ufem/io.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace ufem;

TEST_CASE("config parsing") {
  auto kv = parse_config("# comment\np = 2\n  problem=example3  # trailing\n\nTOL = 1e-3\n");
  CHECK(kv.size() == 3);
  CHECK(kv.at("p") == "2");
  CHECK(kv.at("problem") == "example3");
  CHECK(kv.at("TOL") == "1e-3");
  CHECK_THROWS_AS(parse_config("no equals sign\n"), Error);
}

TEST_CASE("loglog slope") {
  std::vector<double> n, e;
  for (int k = 0; k < 6; ++k) {
    n.push_back(1000.0 * (1 << k));
    e.push_back(3.0 / n.back());
  }
  CHECK(loglog_slope(n, e) == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_THROWS_AS(loglog_slope({1, 2}, {1, 2}), Error);
}

TEST_CASE("history round trip") {
  std::vector<HistoryRow> rows;
  for (int k = 0; k < 4; ++k) {
    HistoryRow r;
    r.iter = k;
    r.n_dofs = 100 * (k + 1);
    r.eta = 1.0 / (k + 1);
    if (k % 2 == 0) {
      r.err_dg = 0.5 / (k + 1);
      r.eff = 2.0;
    }
    rows.push_back(r);
  }
  auto path = (std::filesystem::temp_directory_path() / "ufem_history_test.csv").string();
  write_history(path, rows);
  auto pts = read_history(path);
  REQUIRE(pts.size() == 4);
  CHECK(pts[2].n_dofs == 300);
  CHECK(pts[1].eta == doctest::Approx(0.5));
  CHECK(pts[0].err_dg == doctest::Approx(0.5));
  CHECK(pts[1].err_dg < 0);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header == history_header());
  std::remove(path.c_str());
  CHECK_THROWS_AS(read_history(path), Error);
}
