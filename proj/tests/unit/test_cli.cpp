#include <doctest.h>

#include <sstream>

#include "bundle_lab_cli/commands.hpp"
#include "bundle_lab_cli/config.hpp"
#include "bundle_lab_cli/output.hpp"
#include "bundle_lab_cli/schema.hpp"

using namespace bundle_lab;
using namespace bundle_lab::cli;

namespace {

void expect_config_error(std::string_view text, int line, int column) {
  try {
    parse_config(text);
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

Outcome run_quiet(const std::string& command, std::map<std::string, std::string> flags) {
  std::ostringstream progress;
  return execute(RunConfig::resolve(command, {}, flags), progress);
}

}  // namespace

TEST_CASE("config files") {
  const auto f = parse_config(
      "# comment\n"
      "command = riesz\n"
      "[input]\n"
      "weights = bergman:alpha=1   # trailing comment\n"
      "blaschke = \"blaschke(0;0,0.5)\"\n"
      "[truncation]\n"
      "K = 256\n"
      "n_max=30\n");
  REQUIRE(f.command.has_value());
  CHECK(*f.command == "riesz");
  CHECK(f.values.at("weights") == "bergman:alpha=1");
  CHECK(f.values.at("blaschke") == "blaschke(0;0,0.5)");
  CHECK(f.values.at("K") == "256");
  CHECK(f.values.at("n_max") == "30");
}

TEST_CASE("config errors carry line and column") {
  expect_config_error("[input]\nbogus = 1\n", 2, 1);
  expect_config_error("[input]\nK = 1\n", 2, 1);
  expect_config_error("[nowhere]\n", 1, 2);
  expect_config_error("[input]\nweights = hardy\n  weights = nln\n", 3, 3);
  expect_config_error("[truncation]\nK 5\n", 2, 3);
  expect_config_error("[input]\nfn = \"poly(1\n", 2, 6);
}

TEST_CASE("resolution order") {
  const auto file = parse_config("[truncation]\nK = 128\nn_max = 20\n");
  const auto rc = RunConfig::resolve("gram", file, {{"n_max", "10"}});
  CHECK(rc.count("K") == 128);
  CHECK(rc.count("n_max") == 10);
  CHECK(rc.str("weights") == "hardy");
  CHECK_THROWS_AS(RunConfig::resolve("gram", {}, {{"t", "0.5"}}), ConfigError);
  CHECK_THROWS_AS(RunConfig::resolve("decompose", {}, {}), ConfigError);
  CHECK_THROWS_AS(RunConfig::resolve("nonsense", {}, {}), ConfigError);
  const auto bad = RunConfig::resolve("gram", {}, {{"K", "many"}});
  CHECK_THROWS_AS(bad.count("K"), ConfigError);
}

TEST_CASE("csv and json helpers") {
  CHECK(csv_field("plain") == "plain");
  CHECK(csv_field("a,b") == "\"a,b\"");
  CHECK(csv_field("say \"hi\"") == "\"say \"\"hi\"\"\"");
  std::ostringstream os;
  write_csv_row(os, {"1", "x,y"});
  CHECK(os.str() == "1,\"x,y\"\r\n");
  CHECK(csv_number(0.1) == "0.10000000000000001");
  CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(number(std::nan("")) == "nan");
  CHECK(number(2.5) == 2.5);
  const Json j = {{"b", 1}, {"a", 2}};
  CHECK(dump(j) == "{\n  \"a\": 2,\n  \"b\": 1\n}\n");
}

TEST_CASE("schema validator") {
  const Json schema = Json::parse(R"({
    "type": "object",
    "required": ["n"],
    "additionalProperties": false,
    "properties": {"n": {"type": "integer", "minimum": 0}, "s": {"enum": ["a", "b"]},
                   "v": {"type": "array", "items": {"$ref": "#/definitions/num"}}},
    "definitions": {"num": {"type": ["number", "string"]}}
  })");
  CHECK(validate(Json::parse(R"({"n": 3, "s": "a", "v": [1, "inf"]})"), schema).empty());
  CHECK_FALSE(validate(Json::parse(R"({"s": "a"})"), schema).empty());
  CHECK_FALSE(validate(Json::parse(R"({"n": -1})"), schema).empty());
  CHECK_FALSE(validate(Json::parse(R"({"n": 1, "s": "c"})"), schema).empty());
  CHECK_FALSE(validate(Json::parse(R"({"n": 1, "extra": 0})"), schema).empty());
  CHECK_FALSE(validate(Json::parse(R"({"n": 1, "v": [true]})"), schema).empty());
  for (const auto& name : schema_names()) CHECK(schema_for(name).is_object());
  CHECK_THROWS(schema_for("no-such-schema"));
}

TEST_CASE("command documents validate against their schemas") {
  const auto g = run_quiet("gram", {{"blaschke", "blaschke(0;0,0.5)"}, {"K", "64"}, {"n_max", "10"}});
  CHECK(g.exit_code == 0);
  CHECK(validate(g.document, schema_for("gram")).empty());
  CHECK(g.files.count("gram.csv") == 1);

  const auto w = run_quiet("weights-classify", {{"weights", "nln"}, {"K", "1000"}});
  CHECK(validate(w.document, schema_for("weights-classify")).empty());
  CHECK(w.document["result"]["growth"]["classification"] == "intermediate");

  const auto r = run_quiet("riesz", {{"blaschke", "blaschke(0;0,0.5)"}, {"K", "128"}, {"n_max", "20"}});
  CHECK(validate(r.document, schema_for("riesz")).empty());

  const auto d = run_quiet("decompose", {{"fn", "compose(poly(0,1,0,2),blaschke(0;0,0.4))"}});
  CHECK(validate(d.document, schema_for("decompose")).empty());
  CHECK(d.document["result"]["m"] == 2);

  const auto err = error_document(RunConfig::resolve("gram", {}, {}), "domain", "bad input");
  CHECK(validate(err, schema_for("error")).empty());
}

TEST_CASE("outputs are deterministic and round-trip") {
  const std::map<std::string, std::string> flags{{"fn", "poly(2,1,1)"}, {"res", "60"}};
  const auto a = run_quiet("index-map", flags);
  const auto b = run_quiet("index-map", flags);
  CHECK(dump(a.document) == dump(b.document));
  CHECK(a.files == b.files);
  CHECK(dump(Json::parse(dump(a.document))) == dump(a.document));
  REQUIRE(a.files.count("grid.json") == 1);
  const auto grid = Json::parse(a.files.at("grid.json"));
  REQUIRE(grid["rows"].size() == 60);
  CHECK(grid["rows"][0].size() == 60);
}

TEST_CASE("bad inputs are configuration errors") {
  CHECK_THROWS_AS(run_quiet("gram", {{"weights", "cauchy"}}), ConfigError);
  CHECK_THROWS_AS(run_quiet("decompose", {{"fn", "poly(1,"}}), ConfigError);
}
