#include <doctest.h>

#include <filesystem>
#include <sstream>
#include <string>

#include <json.hpp>

#include "doleans/cli.hpp"

using namespace doleans;
using namespace doleans::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& cfg) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(cfg, out, err);
  return {code, out.str(), err.str()};
}

RunConfig condition(std::string model, std::string kind) {
  RunConfig c;
  c.command = "condition";
  c.model = std::move(model);
  c.kind = std::move(kind);
  c.n = 0;
  return c;
}

}  // namespace

TEST_CASE("control grammar") {
  CHECK(parse_control("0.25").value_at(3.0) == 0.25);
  const auto ind = parse_control("indicator:1");
  CHECK(ind.value_at(1.0) == 0.0);
  CHECK(ind.value_at(1.5) == 1.0);
  const auto pw = parse_control("piecewise:0.2|1|0.8|2|0");
  CHECK(pw.value_at(0.5) == 0.2);
  CHECK(pw.value_at(1.5) == 0.8);
  CHECK(pw.value_at(3.0) == 0.0);
  for (const char* bad : {"", "abc", "1.5", "-0.1", "indicator:", "indicator:-1", "piecewise:0.2|1", "piecewise:0.2|2|0.5|1|0.3"})
    CHECK_THROWS_AS(parse_control(bad), UsageError);
}

TEST_CASE("levels grammar") {
  CHECK(parse_levels("1,2,3.5,1e-3") == std::vector<double>{1, 2, 3.5, 1e-3});
  CHECK_THROWS_AS(parse_levels("1,,2"), UsageError);
  CHECK_THROWS_AS(parse_levels("x"), UsageError);
}

TEST_CASE("flag combinations are validated before running") {
  RunConfig c = condition("example1", "jacod");
  c.eps = 0.3;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example1", "jacod");
  c.control = "1";
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example1", "theorem1");
  c.eps = 1.0;
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example1", "jacod");
  c.levels = std::vector<double>{1e-2, 1e-3};
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example4", "jacod");
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example1", "novikov");
  CHECK_THROWS_AS(validate(c), UsageError);
  c = condition("example1", "jacod");
  c.format = "xml";
  CHECK_THROWS_AS(validate(c), UsageError);

  RunConfig r;
  r.command = "reproduce";
  r.which = 4;
  CHECK_THROWS_AS(validate(r), UsageError);
  r.which = 1;
  r.kind = "jacod";
  CHECK_THROWS_AS(validate(r), UsageError);

  RunConfig l;
  l.command = "lemmas";
  l.n = 10;
  CHECK_THROWS_AS(validate(l), UsageError);
  l.n.reset();
  l.mutant = "other";
  CHECK_THROWS_AS(validate(l), UsageError);

  RunConfig s;
  s.command = "sample";
  s.kind = "jacod";
  CHECK_THROWS_AS(validate(s), UsageError);
  s.kind.reset();
  s.mutant = "flip-indicator";
  CHECK_THROWS_AS(validate(s), UsageError);

  CHECK_NOTHROW(validate(condition("example2", "protter-shimbo")));
}

TEST_CASE("exit codes") {
  RunConfig bad = condition("example1", "jacod");
  bad.eps = 0.3;
  const auto u = run_config(bad);
  CHECK(u.code == kExitUsage);
  CHECK(u.out.empty());
  CHECK(u.err.find("usage error") != std::string::npos);

  CHECK(run_config(condition("example1", "protter_shimbo")).code == kExitFailure);
  CHECK(run_config(condition("example1", "jacod")).code == kExitOk);

  RunConfig lem;
  lem.command = "lemmas";
  CHECK(run_config(lem).code == kExitOk);
  lem.mutant = "flip-indicator";
  const auto m = run_config(lem);
  CHECK(m.code == kExitMismatch);
  CHECK(m.out.find("VIOLATION") != std::string::npos);
}

TEST_CASE("condition reports") {
  const auto j = run_config(condition("example1", "jacod"));
  const auto parsed = nlohmann::json::parse(j.out);
  CHECK(parsed["verdict"] == "diverging");
  CHECK(parsed["divergence"]["slope"].get<double>() == doctest::Approx(0.5).epsilon(0.01));

  const auto ps = run_config(condition("example2", "protter-shimbo"));
  CHECK(nlohmann::json::parse(ps.out)["verdict"] == "diverging");

  RunConfig csv = condition("example2", "jacod");
  csv.format = "csv";
  const auto c = run_config(csv);
  CHECK(c.out.rfind("# model: example2", 0) == 0);
  CHECK(c.out.find("level,value") != std::string::npos);
}

TEST_CASE("theorem1 with a = 0 reports the Jacod values") {
  RunConfig t = condition("example1", "theorem1");
  t.control = "0";
  const auto a = nlohmann::json::parse(run_config(t).out);
  const auto b = nlohmann::json::parse(run_config(condition("example1", "jacod")).out);
  CHECK(a["verdict"] == b["verdict"]);
  CHECK(a["divergence"] == b["divergence"]);
  CHECK(a["quadrature"] == b["quadrature"]);
}

TEST_CASE("seeded commands are byte-identical across invocations") {
  RunConfig c = condition("example3", "theorem1");
  c.control = "indicator:1";
  c.n = 5000;
  c.seed = 8;
  CHECK(run_config(c).out == run_config(c).out);

  RunConfig s;
  s.command = "sample";
  s.model = "example2";
  s.n = 3;
  s.seed = 4;
  const auto first = run_config(s);
  CHECK(first.code == kExitOk);
  CHECK(first.out == run_config(s).out);
  CHECK(nlohmann::json::parse(first.out)["paths"].size() == 3);

  RunConfig l;
  l.command = "lemmas";
  l.seed = 5;
  CHECK(run_config(l).out == run_config(l).out);
}

TEST_CASE("condition --out writes the report file") {
  const auto dir = std::filesystem::temp_directory_path() / "doleans_test_cli";
  std::filesystem::create_directories(dir);
  RunConfig c = condition("example1", "jacod");
  c.out = (dir / "jacod.json").string();
  CHECK(run_config(c).code == kExitOk);
  CHECK(std::filesystem::file_size(dir / "jacod.json") > 0);
  std::filesystem::remove_all(dir);
}
