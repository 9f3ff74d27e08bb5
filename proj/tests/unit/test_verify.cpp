#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "polydens/counting.hpp"
#include "polydens/error.hpp"
#include "polydens/experiment.hpp"
#include "polydens/hypotheses.hpp"
#include "polydens/parser.hpp"
#include "polydens/report.hpp"
#include "polydens/sieve.hpp"

using namespace polydens;

namespace {

MultiPoly P(const char* text, std::size_t n) { return parse_polynomial(text, n); }

Box B(std::initializer_list<std::pair<long, long>> sides) {
  std::vector<ClosedInterval> iv;
  for (auto [a, b] : sides) iv.push_back({Rational(a), Rational(b)});
  return Box(std::move(iv));
}

CheckStatus status_of(const HypothesisReport& r, const std::string& name) {
  for (const auto& c : r.checks) {
    if (c.name == name) return c.status;
  }
  FAIL("missing check " << name);
  return CheckStatus::unknown;
}

ExperimentConfig config(std::vector<std::string> polys, Box box, DensityMode mode, std::vector<std::int64_t> grid) {
  ExperimentConfig c;
  c.polynomials = std::move(polys);
  c.box = std::move(box);
  c.mode = mode;
  c.P_grid = std::move(grid);
  return c;
}

}  // namespace

TEST_CASE("hypothesis examples") {
  HypothesisOptions zero;
  zero.sigma_override = 0;
  const MultiPoly q4[] = {P("x1^2+x2^2+x3^2+x4^2", 4)};
  const auto a = check_hypotheses(q4, Box::cube(4, 1, 2), DensityMode::prime, zero);
  CHECK(status_of(a, "variables") == CheckStatus::pass);
  CHECK(a.all_passed());

  const MultiPoly q2[] = {P("x1^2+x2^2", 2)};
  CHECK(status_of(check_hypotheses(q2, Box::cube(2, 1, 2), DensityMode::prime, zero), "variables") ==
        CheckStatus::fail);
  const auto sf = check_hypotheses(q2, Box::cube(2, 1, 2), DensityMode::squarefree, zero);
  CHECK(status_of(sf, "variables") == CheckStatus::pass);
  CHECK(sf.all_passed());

  const MultiPoly fixed[] = {P("x1^2+x1+2*x2", 2)};
  const auto c = check_hypotheses(fixed, Box::cube(2, 1, 2), DensityMode::prime, zero);
  CHECK(status_of(c, "fixed-prime-divisor") == CheckStatus::fail);

  const auto est = check_hypotheses(q4, Box::cube(4, 1, 2), DensityMode::prime);
  CHECK(est.sigma_used.value == 0);
  CHECK(est.sigma_used.method == SigmaMethod::mod_p_estimated);

  const MultiPoly neg[] = {P("x1^2+x2^2+x3^2+x4^2", 4)};
  CHECK(status_of(check_hypotheses(neg, Box::cube(4, 0, 1), DensityMode::prime, zero), "box-positivity") ==
        CheckStatus::fail);

  const MultiPoly twins[] = {P("x1", 1), P("x1+2", 1)};
  CHECK(check_hypotheses(twins, B({{1, 2}}), DensityMode::joint).all_passed());
  const MultiPoly evens[] = {P("x1", 1), P("x1+1", 1)};
  CHECK(status_of(check_hypotheses(evens, B({{1, 2}}), DensityMode::joint), "fixed-prime-divisor") ==
        CheckStatus::fail);
}

TEST_CASE("prime baseline ratios") {
  auto c = config({"x1"}, B({{2, 3}}), DensityMode::prime, {10'000, 100'000, 1'000'000});
  c.force = true;
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 3);
  CHECK(r.heuristic);
  CHECK_FALSE(r.gated);
  const double tol[] = {0.02, 0.01, 0.005};
  const std::uint64_t sieve_counts[] = {primes_in_interval(20'000, 30'000).size(),
                                        primes_in_interval(200'000, 300'000).size(),
                                        primes_in_interval(2'000'000, 3'000'000).size()};
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(*r.rows[i].empirical == sieve_counts[i]);
    CHECK(*r.rows[i].euler_value == 1.0);
    CHECK(std::abs(*r.rows[i].ratio - 1) < tol[i]);
  }
}

TEST_CASE("square-free baseline") {
  auto c = config({"x1"}, B({{1, 2}}), DensityMode::squarefree, {100'000, 1'000'000});
  CHECK(run_experiment(c).gated);
  c.force = true;
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.heuristic);
  for (const auto& row : r.rows) {
    CHECK(*row.li_value == static_cast<double>(row.lattice_points));
    const double density = static_cast<double>(*row.empirical) / static_cast<double>(row.lattice_points);
    CHECK(std::abs(density / (6 / (std::numbers::pi * std::numbers::pi)) - 1) < 0.005);
    CHECK(std::abs(*row.ratio - 1) < 0.005);
  }
}

TEST_CASE("gating") {
  const auto c = config({"x1^2+x2^2"}, Box::cube(2, 1, 2), DensityMode::prime, {10, 20});
  const auto r = run_experiment(c);
  CHECK(r.gated);
  CHECK(r.rows.empty());
  CHECK_FALSE(r.hypotheses.all_passed());
  std::ostringstream os;
  emit_report(r, ReportFormat::plot_data, os);
  std::istringstream lines(os.str());
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);) {
    ++count;
    CHECK(line.rfind("#", 0) == 0);
  }
  CHECK(count > 0);
}

TEST_CASE("reports") {
  auto c = config({"x1"}, B({{2, 3}}), DensityMode::prime, {100, 1000, 10'000});
  c.force = true;
  const auto r = run_experiment(c);
  std::ostringstream csv;
  emit_report(r, ReportFormat::csv, csv);
  const auto text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 4);
  CHECK(text.rfind("P,lattice_points,empirical,predicted,ratio,euler_value,euler_tail,li_value,li_error\r\n", 0) ==
        0);
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  CHECK(csv_field("plain") == "plain");

  std::ostringstream js;
  emit_report(r, ReportFormat::json, js);
  CHECK(report_from_json(nlohmann::json::parse(js.str())) == r);

  std::ostringstream plot;
  emit_report(r, ReportFormat::plot_data, plot);
  std::istringstream lines(plot.str());
  std::size_t data = 0;
  for (std::string line; std::getline(lines, line);) data += !line.empty() && line[0] != '#';
  CHECK(data == 3);

  for (const auto& row : r.rows) {
    REQUIRE(row.predicted);
    CHECK(std::abs(*row.ratio - static_cast<double>(*row.empirical) / *row.predicted) <=
          1e-12 * std::abs(*row.ratio));
    CHECK(std::abs(*row.predicted - *row.euler_value * *row.li_value) <= 1e-12 * *row.predicted);
  }
  CHECK_THROWS_AS(report_format_from_string("xml"), ConfigError);
}

TEST_CASE("config echo re-runs to identical counts") {
  auto c = config({"x1^2+x2^2"}, Box::cube(2, 1, 2), DensityMode::squarefree, {30, 60});
  c.threads = 3;
  const auto first = run_experiment(c);
  const auto echoed = config_from_json(to_json(first.config));
  CHECK(echoed == c);
  const auto second = run_experiment(echoed);
  REQUIRE(first.rows.size() == second.rows.size());
  for (std::size_t i = 0; i < first.rows.size(); ++i) CHECK(first.rows[i].empirical == second.rows[i].empirical);
}

TEST_CASE("fixed prime divisor spot check") {
  // f(x) is always even, so the only possible prime value is 2.
  const auto f = P("x1^2+x1+2*x2", 2);
  const MultiPoly one[] = {f};
  for (std::int64_t p : {3, 5, 10}) {
    const auto box = Box::cube(2, -1, 1);
    const auto ranges = box.lattice_ranges(p);
    std::uint64_t twos = 0;
    for (auto a = ranges[0].first; a <= ranges[0].second; ++a) {
      for (auto b = ranges[1].first; b <= ranges[1].second; ++b) {
        const std::int64_t pt[] = {a, b};
        const BigInt v = f.evaluate(std::span<const std::int64_t>(pt));
        twos += v == 2 || v == -2;
      }
    }
    CHECK(count_values(one, box, p, DensityMode::prime).count <= twos);
  }
}

TEST_CASE("config errors") {
  using nlohmann::json;
  const json good = {{"polynomials", {"x1"}}, {"box", {{2, 3}}}, {"mode", "prime"}, {"P_grid", {100}}};
  CHECK_NOTHROW(config_from_json(good));
  auto bad = good;
  bad["colour"] = 1;
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = good;
  bad["mode"] = "theorem";
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = good;
  bad["P_grid"] = {1.5};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = good;
  bad["box"] = {{3, 2}};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = good;
  bad["polynomials"] = {"x1 +"};
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  bad = good;
  bad.erase("box");
  CHECK_THROWS_AS(config_from_json(bad), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("a budget failure aborts one row only") {
  auto c = config({"x1"}, B({{2, 3}}), DensityMode::prime, {100, 100'000});
  c.force = true;
  c.lattice_budget = 1000;
  const auto r = run_experiment(c);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].ratio.has_value());
  CHECK_FALSE(r.rows[1].ratio.has_value());
  REQUIRE(r.rows[1].error.has_value());
  CHECK(r.rows[1].error->rfind("budget: ", 0) == 0);
  CHECK(r.any_budget_abort());
}
