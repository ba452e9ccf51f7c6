#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "doctest.h"
#include "w6j/cli.hpp"
#include "w6j/spin_network.hpp"

using nlohmann::json;

namespace {

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = w6j::run_cli(std::move(args), out, err);
  return {code, out.str(), err.str()};
}

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  REQUIRE_MESSAGE(f.good(), "cannot open " << path);
  return json::parse(f);
}

json load_schema(const std::string& name) {
  return load_json_file(std::string(W6J_DATA_DIR) + "/schemas/" + name);
}

// Minimal structural validator covering the subset of JSON Schema the
// shipped schemas use: type (string or list of strings), required,
// properties, items, enum, minItems, maxItems.
bool type_matches(const json& value, const std::string& type) {
  if (type == "object") return value.is_object();
  if (type == "array") return value.is_array();
  if (type == "string") return value.is_string();
  if (type == "number") return value.is_number();
  if (type == "null") return value.is_null();
  if (type == "boolean") return value.is_boolean();
  return false;
}

void validate(const json& value, const json& schema, const std::string& where) {
  if (schema.contains("type")) {
    const json& t = schema["type"];
    bool ok = false;
    if (t.is_string()) {
      ok = type_matches(value, t.get<std::string>());
    } else {
      for (const auto& alt : t) ok = ok || type_matches(value, alt.get<std::string>());
    }
    REQUIRE_MESSAGE(ok, where << ": type mismatch, got " << value.type_name());
  }
  if (schema.contains("enum")) {
    bool ok = false;
    for (const auto& alt : schema["enum"]) ok = ok || (value == alt);
    REQUIRE_MESSAGE(ok, where << ": value " << value.dump() << " not in enum");
  }
  if (value.is_object()) {
    if (schema.contains("required")) {
      for (const auto& key : schema["required"]) {
        REQUIRE_MESSAGE(value.contains(key.get<std::string>()),
                        where << ": missing required key '" << key.get<std::string>() << "'");
      }
    }
    if (schema.contains("properties")) {
      for (const auto& [key, sub] : schema["properties"].items()) {
        if (value.contains(key)) validate(value.at(key), sub, where + "." + key);
      }
    }
  }
  if (value.is_array()) {
    if (schema.contains("minItems")) {
      REQUIRE_MESSAGE(value.size() >= schema["minItems"].get<size_t>(),
                      where << ": too few items");
    }
    if (schema.contains("maxItems")) {
      REQUIRE_MESSAGE(value.size() <= schema["maxItems"].get<size_t>(),
                      where << ": too many items");
    }
    if (schema.contains("items")) {
      for (size_t i = 0; i < value.size(); ++i) {
        validate(value[i], schema["items"], where + "[" + std::to_string(i) + "]");
      }
    }
  }
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("exact subcommand prints the closed radical and a float") {
  auto r = run({"exact", "1", "1", "1", "1", "1", "1"});
  CHECK(r.code == 0);
  CHECK(r.out.find("1/6·√1") != std::string::npos);
  CHECK(r.out.find("0.16666666666666666") != std::string::npos);

  // A coupling that violates a triangle rule evaluates to exactly zero.
  auto z = run({"exact", "1", "1", "3", "1", "1", "1"});
  CHECK(z.code == 0);
  CHECK(z.out.find("0") != std::string::npos);

  // Both evaluation methods agree on the printed value.
  auto racah = run({"exact", "2", "2", "2", "2", "2", "2"});
  auto msum = run({"exact", "2", "2", "2", "2", "2", "2", "--oracle"});
  CHECK(racah.code == 0);
  CHECK(msum.code == 0);
  CHECK(racah.out.find("-3/70·√1") != std::string::npos);
  // Same radical, same float; only the method label may differ in JSON mode.
  CHECK(msum.out == racah.out);
}

TEST_CASE("JSON outputs validate against the shipped schemas") {
  struct Case {
    std::vector<std::string> args;
    std::string schema;
  };
  const Case cases[] = {
      {{"exact", "9/2", "3", "9/2", "11/2", "6", "5/2", "--format", "json"}, "exact.schema.json"},
      {{"compare", "9/2", "3", "11/2", "6", "9/2", "--format", "json"}, "compare.schema.json"},
      {{"region", "5", "7/2", "6", "13/2", "--grid", "8", "--format", "json"}, "region.schema.json"},
      {{"caustic", "5", "7/2", "6", "13/2", "--grid", "8", "--format", "json"}, "caustic.schema.json"},
      {{"sphere", "5", "7/2", "6", "13/2", "--grid", "12", "--format", "json"}, "sphere.schema.json"},
  };
  for (const auto& c : cases) {
    CAPTURE(c.schema);
    auto r = run(c.args);
    REQUIRE_MESSAGE(r.code == 0, "stderr: " << r.err);
    json doc = json::parse(r.out);
    validate(doc, load_schema(c.schema), c.schema);
  }
}

TEST_CASE("corpus network files validate against the network schema") {
  json schema = load_schema("network_file.schema.json");
  json manifest = load_json_file(std::string(W6J_DATA_DIR) + "/networks/manifest.json");
  REQUIRE(manifest.size() > 0);
  int checked = 0;
  for (const auto& entry : manifest) {
    std::string file = entry["file"].get<std::string>();
    json doc = load_json_file(std::string(W6J_DATA_DIR) + "/networks/" + file);
    validate(doc, schema, file);
    if (++checked >= 10) break;  // structural schema is identical across the corpus
  }
  CHECK(checked == 10);
}

TEST_CASE("compare sweeps the full admissible recoupling range") {
  // Unit-area quad: quantum numbers (9/2, 3, 11/2, 6) at j12 = 9/2 admit
  // exactly seven j23 values, 5/2 .. 17/2.
  auto r = run({"compare", "9/2", "3", "11/2", "6", "9/2"});
  REQUIRE(r.code == 0);
  std::istringstream lines(r.out);
  std::string line;
  std::getline(lines, line);
  CHECK(line == "j23,exact,pr,abs_err,rel_err,region");
  int rows = 0;
  std::string first_j23, last_j23;
  while (std::getline(lines, line)) {
    if (line.empty()) continue;
    ++rows;
    std::string j23 = line.substr(0, line.find(','));
    if (rows == 1) first_j23 = j23;
    last_j23 = j23;
    CHECK(line.back() == 'A');  // quantized interior points are classically allowed
  }
  CHECK(rows == 7);
  CHECK(first_j23 == "5/2");
  CHECK(last_j23 == "17/2");
}

TEST_CASE("region grid spans the coupling square inclusively") {
  auto r = run({"region", "5", "7/2", "6", "13/2", "--grid", "8", "--format", "json"});
  REQUIRE(r.code == 0);
  json doc = json::parse(r.out);
  CHECK(doc["J12"]["min"].get<double>() == doctest::Approx(1.5));
  CHECK(doc["J12"]["max"].get<double>() == doctest::Approx(8.5));
  CHECK(doc["J23"]["min"].get<double>() == doctest::Approx(2.5));
  CHECK(doc["J23"]["max"].get<double>() == doctest::Approx(9.5));
  REQUIRE(doc["J12"]["values"].size() == 8);
  CHECK(doc["J12"]["values"][0].get<double>() == doctest::Approx(1.5));
  CHECK(doc["J12"]["values"][7].get<double>() == doctest::Approx(8.5));
  REQUIRE(doc["grid"].size() == 8);
  for (const auto& row : doc["grid"]) {
    std::string s = row.get<std::string>();
    CHECK(s.size() == 8);
    for (char c : s) CHECK(std::string("UBCAF").find(c) != std::string::npos);
  }
  // The grid border lies exactly on the coupling-square boundary.
  CHECK(doc["grid"][0].get<std::string>() == "BBBBBBBB");
  // Quantized overlay: interior lattice of half-integer spins, 7 x 7 spots.
  CHECK(doc["spots"].size() == 49);
  CHECK(doc["spots"][0]["j12"] == "3/2");
  CHECK(doc["spots"][0]["J12"].get<double>() == doctest::Approx(2.0));
}

TEST_CASE("identical configuration produces byte-identical output") {
  const std::vector<std::string> args = {"compare", "9/2", "3",      "11/2",
                                         "6",       "9/2", "--format", "json"};
  auto a = run(args);
  auto b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);

  // Worker count must not affect the merged row order or formatting.
  auto serial = run({"compare", "9/2", "3", "11/2", "6", "9/2"});
  auto parallel = run({"compare", "9/2", "3", "11/2", "6", "9/2", "--parallel", "4"});
  CHECK(serial.code == 0);
  CHECK(parallel.code == 0);
  CHECK(serial.out == parallel.out);
}

TEST_CASE("usage errors exit with code 2 and diagnostics on stderr") {
  auto bad_spin = run({"exact", "1", "1", "1", "1", "1", "x/2"});
  CHECK(bad_spin.code == 2);
  CHECK(bad_spin.err.find("cannot parse spin") != std::string::npos);

  auto bad_flag = run({"exact", "1", "1", "1", "1", "1", "1", "--no-such-flag"});
  CHECK(bad_flag.code == 2);

  auto low_precision = run({"exact", "1", "1", "1", "1", "1", "1", "--precision", "52"});
  CHECK(low_precision.code == 2);
  CHECK(low_precision.err.find("--precision") != std::string::npos);

  auto low_grid = run({"region", "5", "7/2", "6", "13/2", "--grid", "4"});
  CHECK(low_grid.code == 2);
  CHECK(low_grid.err.find("--grid") != std::string::npos);

  auto missing_file = run({"network", "/nonexistent/net.json"});
  CHECK(missing_file.code == 2);
  CHECK(missing_file.err.find("cannot open") != std::string::npos);

  auto no_subcommand = run({});
  CHECK(no_subcommand.code == 2);
}

TEST_CASE("domain errors exit with code 3") {
  // Lengths (2,1,1,5) admit no quadrilateral: |J1-J2| .. J1+J2 and
  // |J3-J4| .. J3+J4 do not overlap.
  auto r = run({"region", "2", "1", "1", "5"});
  CHECK(r.code == 3);
  CHECK(!r.err.empty());

  auto c = run({"caustic", "2", "1", "1", "5"});
  CHECK(c.code == 3);
}

TEST_CASE("network files evaluate and re-serialize") {
  std::string file = std::string(W6J_DATA_DIR) + "/networks/arrow_1-1-2-1-1-2_1a.json";
  auto eval = run({"network", file});
  CHECK(eval.code == 0);
  CHECK(eval.out.find("√") != std::string::npos);

  auto std_form = run({"network", file, "--standardize"});
  REQUIRE(std_form.code == 0);
  // The standardized output is itself a parseable network description that
  // evaluates to the same value as the original.
  w6j::SpinNetwork net = w6j::parse_network(std_form.out);
  w6j::ExactRadical direct = w6j::evaluate_closed(w6j::parse_network([&] {
    std::ifstream f(file);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
  }()));
  CHECK(w6j::evaluate_closed(net).str() == direct.str());
}

TEST_CASE("selftest reports success") {
  auto r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.out.find("selftest: all checks passed") != std::string::npos);
  // Eleven named checks, one line each.
  size_t count = 0;
  size_t pos = 0;
  while ((pos = r.out.find("ok - ", pos)) != std::string::npos) {
    ++count;
    pos += 5;
  }
  CHECK(count == 11);
}

TEST_SUITE_END();
