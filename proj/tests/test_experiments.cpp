#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <harmlat/experiments.hpp>
#include <harmlat/report.hpp>

using namespace harmlat;

TEST_CASE("report: json round trip is lossless") {
  ExperimentReport r;
  r.id = "demo";
  r.params = {{"count", 3}, {"label", "x,y"}};
  r.columns = {"n", "value", "name"};
  r.add_row({Json(1), Json(0.5), Json("plain")});
  r.add_row({Json(2), Json(-1.25), Json("needs,\"quoting\"\nhere")});
  r.provenance = {{"seed", 7}, {"tol", 1e-9}, {"version", kCodeVersion}};
  r.add_verdict("some-check", "C1", true, "ok");
  r.add_verdict("bad-check", "C2", false, "broken");
  r.add_report_only("note", "C3", "reference 1.23");

  auto j = report_to_json(r);
  auto back = report_from_json(j);
  CHECK(report_to_json(back) == j);
  CHECK(back.id == "demo");
  CHECK(back.rows.size() == 2);
  CHECK(back.verdicts.size() == 3);
  CHECK_FALSE(back.all_pass());

  ExperimentReport ok;
  ok.add_verdict("a", "C1", true);
  ok.add_report_only("b", "C2", "informational");
  CHECK(ok.all_pass());
}

TEST_CASE("report: csv header, order and escaping") {
  ExperimentReport r;
  r.columns = {"n", "value", "name"};
  // empty report gives a header-only csv
  CHECK(report_to_csv(r) == "n,value,name\n");

  r.add_row({Json(1), Json(0.5), Json("plain")});
  r.add_row({Json(2), Json(3), Json("a,\"b\"")});
  std::string csv = report_to_csv(r);
  CHECK(csv == "n,value,name\n1,0.5,plain\n2,3,\"a,\"\"b\"\"\"\n");

  // mismatched row width is rejected
  CHECK_THROWS(r.add_row({Json(1)}));
}

TEST_CASE("rho ensemble: determinism, trivial pair row, bound verdict") {
  RhoEnsembleParams p;
  p.count = 12;
  auto a = exp_rho_ensemble(p, 42);
  auto b = exp_rho_ensemble(p, 42);
  CHECK(report_to_json(a) == report_to_json(b));
  auto c = exp_rho_ensemble(p, 43);
  CHECK(report_to_json(a) != report_to_json(c));
  CHECK(a.rows.size() == 12);
  CHECK(a.columns.size() == a.rows[0].size());
  // rho >= 1 on every row (removal enlarges the measure)
  for (const auto& row : a.rows) {
    CHECK(row[6].get<double>() >= 1.0 - 1e-9);
    CHECK(row[9].get<double>() >= 1.0 - 1e-9);
    CHECK(row[9].get<double>() <= row[6].get<double>() + 1e-9);
  }
  bool has_bound = false;
  for (const auto& v : a.verdicts)
    if (v.name == "type-i-removal-price-bound") {
      has_bound = true;
      CHECK(v.status == "pass");
      CHECK(v.criterion == "C7");
    }
  CHECK(has_bound);
  CHECK_THROWS(exp_rho_ensemble(RhoEnsembleParams{.count = 1, .size_min = 0}, 1));
}

TEST_CASE("least-positive-measure brute force: frozen regression values") {
  MnBruteforceParams p;
  p.n_max = 4;
  auto r = exp_mn_bruteforce(p);
  CHECK(r.all_pass());
  REQUIRE(r.rows.size() == 3);
  CHECK(r.rows[0][4].get<double>() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r.rows[1][4].get<double>() ==
        doctest::Approx(0.214601836603).epsilon(1e-9));
  CHECK(r.rows[2][4].get<double>() ==
        doctest::Approx(0.098389664681).epsilon(1e-9));
  // enumeration sizes: C(24, n-1) candidate sets
  CHECK(r.rows[0][1].get<int>() == 24);
  CHECK(r.rows[1][1].get<int>() == 276);
  CHECK(r.rows[2][1].get<int>() == 2024);
  CHECK_THROWS(exp_mn_bruteforce(MnBruteforceParams{.n_max = 6}));
}

TEST_CASE("rate fits: tree ratio verdict and measured tetration values") {
  RateFitParams p;
  p.spiral_min = 6;
  p.spiral_max = 10;
  p.spiral_fit_min = 7;
  auto r = exp_rate_fits(p);
  bool saw_tree = false, saw_tet = false, saw_spiral = false;
  for (const auto& v : r.verdicts) {
    if (v.name == "tree-ratio-limit") {
      saw_tree = true;
      CHECK(v.status == "pass");
    }
    if (v.name == "tetration-ratio-final") saw_tet = true;
    if (v.name == "spiral-slope") {
      saw_spiral = true;
      CHECK(v.status == "report-only");
    }
  }
  CHECK(saw_tree);
  CHECK(saw_tet);
  CHECK(saw_spiral);
  // measured successive tetration ratios at the computable scales; these are
  // regression pins for the dense route (validated against the wired solver
  // and the three-point asymptotics)
  for (const auto& row : r.rows) {
    if (row[0].get<std::string>() != "tetration") continue;
    int n = row[1].get<int>();
    double ratio = row[3].get<double>();
    if (n == 3) CHECK(ratio == doctest::Approx(0.785398163).epsilon(1e-6));
    if (n == 6) CHECK(ratio == doctest::Approx(0.558868012).epsilon(1e-6));
  }
}

TEST_CASE("klein ratios: single small instance sanity") {
  KleinRatioParams p;
  p.n_list = {4};
  p.margin = 5;
  auto r = exp_klein_ratio(p);
  bool saw = false;
  for (const auto& v : r.verdicts)
    if (v.name == "escape-ratio-at-least-one") {
      saw = true;
      CHECK(v.status == "pass");
    }
  CHECK(saw);
  CHECK(r.rows.size() == 1);  // only the minimizing row outside n=6
  CHECK(r.rows[0][4].get<double>() >= 1.0);
  CHECK_THROWS(exp_klein_ratio(KleinRatioParams{.n_list = {5}}));
  CHECK_THROWS(exp_klein_ratio(KleinRatioParams{.n_list = {10}}));
}

TEST_CASE("lemma battery: deterministic and all pass") {
  auto r = exp_lemma_battery(2026);
  CHECK(r.all_pass());
  CHECK(r.rows.size() == r.verdicts.size());
  auto r2 = exp_lemma_battery(2026);
  CHECK(report_to_json(r) == report_to_json(r2));
}
