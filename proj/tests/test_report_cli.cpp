#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "qfoundry/errors.hpp"
#include "qfoundry/report.hpp"
#include "qfoundry/scenarios.hpp"
#include "qfoundry/verify.hpp"

using namespace qfoundry;
using nlohmann::json;

namespace {

cli::Evaluation eval(const std::string& scenario, std::map<std::string, std::string> params = {},
                     std::optional<cli::Scan> scan = std::nullopt) {
  cli::ScenarioConfig c;
  c.scenario = scenario;
  c.params = std::move(params);
  c.scan = std::move(scan);
  return cli::evaluate(c);
}

int run_code(cli::ScenarioConfig c, std::string* out = nullptr, std::string* err = nullptr) {
  std::ostringstream o, e;
  const int code = cli::run(c, o, e);
  if (out) *out = o.str();
  if (err) *err = e.str();
  return code;
}

std::size_t column(const report::ResultTable& t, const std::string& name) {
  for (std::size_t i = 0; i < t.columns.size(); ++i)
    if (t.columns[i].name == name) return i;
  throw std::out_of_range(name);
}

double as_double(const report::Value& v) { return std::get<double>(v); }

}  // namespace

TEST(Report, FormatDouble) {
  EXPECT_EQ(report::format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(report::format_double(-3.0), "-3");
  EXPECT_EQ(report::format_double(1e-20), "9.9999999999999995e-21");
  EXPECT_EQ(report::format_double(std::nan("")), "nan");
  // 17 significant digits round-trip exactly.
  for (double v : {std::numbers::pi, 1.0 / 3.0, 2.449489742783178, -3.9442719099991592}) {
    EXPECT_EQ(std::stod(report::format_double(v)), v);
  }
}

TEST(Report, JsonShapeAndNulls) {
  report::ResultTable t;
  t.columns = {{"x", "test"}, {"label", "test"}, {"ok", "test"}, {"n", "test"}};
  t.add_row({1.5, std::string("a \"q\""), true, std::int64_t{7}});
  t.add_row({std::nan(""), std::string("b"), false, std::int64_t{-1}});
  EXPECT_THROW(t.add_row({1.0}), ValidationError);
  report::Meta m{"demo", 42, {{"points", std::int64_t{2}}}, {{"k", std::string("v")}}, {{"best", 0.25}}};
  const json j = json::parse(report::to_json(t, m));
  EXPECT_EQ(j["meta"]["scenario"], "demo");
  EXPECT_EQ(j["meta"]["seed"], 42);
  EXPECT_EQ(j["meta"]["toolkit"], "qfoundry");
  EXPECT_EQ(j["meta"]["version"], QFOUNDRY_VERSION);
  EXPECT_EQ(j["meta"]["grid"]["points"], 2);
  EXPECT_EQ(j["meta"]["provenance"]["x"], "test");
  EXPECT_EQ(j["columns"], json({"x", "label", "ok", "n"}));
  EXPECT_EQ(j["rows"][0][1], "a \"q\"");
  EXPECT_TRUE(j["rows"][1][0].is_null());
  EXPECT_EQ(j["rows"][1][3], -1);
}

TEST(Report, CsvQuotingAndEndings) {
  report::ResultTable t;
  t.columns = {{"name", ""}, {"value", ""}};
  t.add_row({std::string("a,b"), 0.5});
  t.add_row({std::string("say \"hi\""), 2.0});
  EXPECT_EQ(report::to_csv(t), "name,value\n\"a,b\",0.5\n\"say \"\"hi\"\"\",2\n");
}

TEST(Scenarios, KcbsDefault) {
  const auto ev = eval("kcbs");
  ASSERT_EQ(ev.table.rows.size(), 1u);
  EXPECT_NEAR(as_double(ev.table.rows[0][column(ev.table, "value")]), 5.0 - 4.0 * std::sqrt(5.0), 1e-12);
  EXPECT_NEAR(as_double(ev.table.rows[0][column(ev.table, "value")]), -3.9442719, 1e-7);
}

TEST(Scenarios, LeggettScanCsv) {
  const auto ev = eval("leggett", {}, cli::Scan::parse("phi", "0:90:0.01"));
  const std::string csv = report::to_csv(ev.table);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "phi,S_QM,bound,violation");
  EXPECT_EQ(ev.table.rows.size(), 9001u);
  double best = 0.0, best_phi = 0.0;
  for (const auto& r : ev.table.rows) {
    if (as_double(r[3]) > best) {
      best = as_double(r[3]);
      best_phi = as_double(r[0]);
    }
  }
  EXPECT_NEAR(best_phi, 18.32, 1e-9);
  EXPECT_GT(best, 0.10);
}

TEST(Scenarios, HardyAt45) {
  const auto ev = eval("hardy", {{"gamma", "45"}});
  EXPECT_NEAR(as_double(ev.table.rows[0][column(ev.table, "p4")]), 0.0, 1e-15);
}

TEST(Scenarios, EveryScenarioRunsWithDefaults) {
  for (const auto& spec : cli::scenario_specs()) {
    std::map<std::string, std::string> p;
    if (spec.name == "leggett") p["samples"] = "1000";
    const auto ev = eval(spec.name, p);
    EXPECT_FALSE(ev.table.rows.empty()) << spec.name;
    for (const auto& row : ev.table.rows) EXPECT_EQ(row.size(), ev.table.columns.size());
    EXPECT_NO_THROW(json::parse(report::to_json(ev.table, ev.meta))) << spec.name;
  }
}

TEST(Scenarios, NoonOneReportsAtomEntanglement) {
  const auto ev = eval("noon", {{"n", "1"}});
  ASSERT_FALSE(ev.meta.summary.empty());
  EXPECT_EQ(ev.meta.summary[0].first, "atom_entropy_bits");
  EXPECT_NEAR(std::get<double>(ev.meta.summary[0].second), 1.0, 1e-12);
}

TEST(Scenarios, HomColumns) {
  const auto ev = eval("hom");
  const auto& r = ev.table.rows[0];
  EXPECT_NEAR(as_double(r[column(ev.table, "amp_20")]), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(as_double(r[column(ev.table, "amp_02")]), -1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(as_double(r[column(ev.table, "coincidence")]), 0.0, 1e-24);
}

TEST(Scenarios, TlmSources) {
  const auto pr = eval("tlm", {{"source", "pr-box"}});
  const auto& r = pr.table.rows[0];
  EXPECT_EQ(as_double(r[column(pr.table, "lhs")]) - as_double(r[column(pr.table, "rhs")]), 2.0);
  EXPECT_FALSE(std::get<bool>(r[column(pr.table, "satisfied")]));
  const auto random = eval("tlm", {{"source", "random"}, {"trials", "200"}});
  EXPECT_EQ(random.table.rows.size(), 200u);
}

TEST(Scenarios, PopperScanWidth) {
  const auto ev = eval("popper", {}, cli::Scan::parse("width", "0.1:0.5:0.2"));
  ASSERT_EQ(ev.table.rows.size(), 3u);
  for (const auto& r : ev.table.rows) EXPECT_NEAR(as_double(r[column(ev.table, "product")]), 0.5, 1e-3);
  EXPECT_LT(as_double(ev.table.rows[0][column(ev.table, "dx")]), as_double(ev.table.rows[2][column(ev.table, "dx")]));
}

TEST(Scenarios, RejectsUnknownAndMalformed) {
  EXPECT_THROW(eval("kcbs", {{"phi", "1"}}), ValidationError);
  EXPECT_THROW(eval("nope"), ValidationError);
  EXPECT_THROW(eval("hardy", {{"gamma", "abc"}}), ValidationError);
  EXPECT_THROW(eval("hardy", {{"gamma", "100"}}), ValidationError);
  EXPECT_THROW(cli::Scan::parse("phi", "0:90"), ValidationError);
  EXPECT_THROW(cli::Scan::parse("phi", "0:90:0"), ValidationError);
  EXPECT_THROW(eval("noon", {}, cli::Scan::parse("n", "1:3:1")), ValidationError);
  try {
    eval("popper", {{"sigma-plus", "-2"}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sigma-plus"), std::string::npos);
  }
}

TEST(Run, ExitCodes) {
  cli::ScenarioConfig ok;
  ok.scenario = "hardy";
  EXPECT_EQ(run_code(ok), 0);

  cli::ScenarioConfig unknown = ok;
  unknown.params["bogus"] = "1";
  std::string err;
  EXPECT_EQ(run_code(unknown, nullptr, &err), 2);
  EXPECT_NE(err.find("bogus"), std::string::npos);

  cli::ScenarioConfig inconsistent;
  inconsistent.scenario = "leggett";
  inconsistent.params = {{"mode", "model"}, {"u", "1,0,0"}, {"v", "0,1,0"}, {"a", "1,0,0"}, {"b", "0,1,0"}};
  EXPECT_EQ(run_code(inconsistent, nullptr, &err), 3);
  EXPECT_NE(err.find("'u'"), std::string::npos);

  cli::ScenarioConfig coarse;
  coarse.scenario = "popper";
  coarse.params = {{"pps", "1"}};
  EXPECT_EQ(run_code(coarse, nullptr, &err), 2);
  EXPECT_NE(err.find("pps"), std::string::npos);
}

TEST(Run, SameSeedSameBytes) {
  cli::ScenarioConfig c;
  c.scenario = "leggett";
  c.params = {{"mode", "model"}, {"samples", "100000"}};
  c.seed = 99;
  std::string a, b, other;
  ASSERT_EQ(run_code(c, &a), 0);
  ASSERT_EQ(run_code(c, &b), 0);
  EXPECT_EQ(a, b);
  c.seed = 100;
  ASSERT_EQ(run_code(c, &other), 0);
  EXPECT_NE(a, other);
  EXPECT_EQ(json::parse(a)["meta"]["seed"], 99);
}

TEST(Run, CsvFileGetsMetaSidecar) {
  const auto dir = std::filesystem::temp_directory_path() / "qfoundry_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "hardy.csv").string();
  cli::ScenarioConfig c;
  c.scenario = "hardy";
  c.format = cli::Format::Csv;
  c.output = path;
  c.scan = cli::Scan::parse("gamma", "0:90:45");
  ASSERT_EQ(run_code(c), 0);
  std::ifstream csv(path), meta(path + ".meta.json");
  std::string header;
  std::getline(csv, header);
  EXPECT_EQ(header, "gamma,p1,p2,p3,p4,p4_closed_form,separable");
  const json m = json::parse(meta);
  EXPECT_EQ(m["scenario"], "hardy");
  EXPECT_EQ(m["grid"]["step"], 45);
  EXPECT_EQ(m["provenance"]["p4"], "ineq::hardy_probabilities");
  std::filesystem::remove_all(dir);
}

TEST(Verify, FaultInjectionIsReported) {
  verify::VerifyOptions o;
  o.kcbs_theta_offset = 0.01;
  const auto c = verify::run_check(7, o);
  EXPECT_FALSE(c.pass);
  EXPECT_NE(c.measured.find("delta"), std::string::npos);
  EXPECT_TRUE(verify::run_check(7).pass);
}
