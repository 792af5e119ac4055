#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "sfebound/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int code = sfebound::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* base = std::getenv("SFEBOUND_TEST_TMP");
  fs::path dir = (base != nullptr ? fs::path(base) : fs::temp_directory_path() / "sfebound_cli_test") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::string field(const std::string& table, const std::string& key) {
  for (const auto& line : lines(table)) {
    if (line.rfind(key + " ", 0) == 0) {
      const auto pos = line.find_first_not_of(' ', key.size());
      return line.substr(pos);
    }
  }
  return "<missing " + key + ">";
}

void expect_json_round_trip(const std::string& text) {
  CHECK(nlohmann::json::parse(text).dump(2) + "\n" == text);
}

}  // namespace

TEST_CASE("bound prints the 4-decimal table") {
  auto r = run({"bound", "--family", "ot", "--alphabet", "2", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "c") == "1.0484");
  CHECK(field(r.out, "alice_bound") == "0.5242");
  CHECK(field(r.out, "bob_bound") == "0.5242");
  CHECK(field(r.out, "b_rand") == "1/2 (0.5000)");

  r = run({"bound", "--family", "xot", "--n", "2"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "bob_bound") == "0.2581");
  CHECK(field(r.out, "alice_bound") == "0.3442");

  r = run({"bound", "--family", "mp", "--n", "1000000000"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "epsilon") == "2.5000e-19");
}

TEST_CASE("bound full precision and JSON") {
  auto r = run({"bound", "--family", "ot", "--n", "2", "--full-precision"});
  REQUIRE(r.code == 0);
  CHECK(std::stod(field(r.out, "c")) == doctest::Approx(1.048384205847353).epsilon(1e-15));
  CHECK(field(r.out, "c").size() > 8);

  r = run({"bound", "--family", "knot", "--n", "4", "--k", "2", "--json"});
  REQUIRE(r.code == 0);
  expect_json_round_trip(r.out);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["b_rand"] == "1/4");
  CHECK(doc["c"].get<double>() == doctest::Approx(1.0055524881059375).epsilon(1e-14));
  CHECK(doc["bob_bound"].get<double>() == doctest::Approx(0.2514).epsilon(1e-3));
}

TEST_CASE("completely insecure tasks exit 3") {
  const auto r = run({"bound", "--family", "eq", "--n", "2"});
  CHECK(r.code == 3);
  CHECK(r.err.find("completely insecure") != std::string::npos);
  CHECK(run({"curve", "--family", "eq", "--n", "2"}).code == 3);
}

TEST_CASE("task source and parse errors exit 2") {
  CHECK(run({"bound"}).code == 2);
  CHECK(run({"bound", "--family", "ot", "--task-file", "x.json"}).code == 2);
  CHECK(run({"bound", "--family", "zz"}).code == 2);
  CHECK(run({"bound", "--family", "knot", "--n", "3", "--k", "3"}).code == 2);
  CHECK(run({"bound", "--family", "ot", "--n", "two"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"bound", "--task-file", "/nonexistent/task.json"}).code == 2);
  const auto help = run({"--help"});
  CHECK(help.code == 0);
  CHECK(help.out.find("simulate-dr") != std::string::npos);
}

TEST_CASE("task files") {
  const auto dir = scratch("task_files");
  {
    std::ofstream(dir / "good.json") << R"({"name": "tiny", "x_size": 3, "y_size": 2, "b_size": 2, "table": [[0, 1], [1, 1], [0, 0]]})";
    std::ofstream(dir / "ragged.json") << R"({"name": "ragged", "x_size": 2, "y_size": 2, "b_size": 2, "table": [[0, 1], [1]]})";
    std::ofstream(dir / "broken.json") << R"({"name": "broken", )";
    std::ofstream(dir / "family.json") << R"({"family": "ot", "params": {"alphabet": 3, "n": 2}})";
  }
  auto r = run({"brand", "--task-file", (dir / "good.json").string()});
  CHECK(r.code == 0);
  CHECK(field(r.out, "bruteforce") == "2/3");
  r = run({"bound", "--task-file", (dir / "good.json").string()});
  CHECK(r.code == 0);
  CHECK(field(r.out, "task") == "tiny");

  r = run({"bound", "--task-file", (dir / "ragged.json").string()});
  CHECK(r.code == 2);
  CHECK(r.err.find("table not total at (1,1)") != std::string::npos);
  CHECK(run({"bound", "--task-file", (dir / "broken.json").string()}).code == 2);

  r = run({"bound", "--task-file", (dir / "family.json").string()});
  CHECK(r.code == 0);
  CHECK(field(r.out, "c") == "1.0850");
  CHECK(run({"bound", "--task-file", (dir / "family.json").string(), "--n", "3"}).code == 2);
}

TEST_CASE("brand") {
  auto r = run({"brand", "--family", "ip", "--n", "3", "--json"});
  REQUIRE(r.code == 0);
  expect_json_round_trip(r.out);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["bruteforce"] == "1/4");
  CHECK(doc["closed_form"] == "1/4");
  CHECK(doc["agree"] == true);
  r = run({"brand", "--family", "mp", "--n", "1000000000"});
  CHECK(r.code == 0);
  CHECK(field(r.out, "bruteforce") == "n/a (table not materialized)");
}

TEST_CASE("curve CSV") {
  auto r = run({"curve", "--family", "knot", "--alphabet", "2", "--n", "4", "--k", "2", "--samples", "100"});
  REQUIRE(r.code == 0);
  const auto rows = lines(r.out);
  REQUIRE(rows.size() == 101);
  CHECK(rows[0] == "c_A,c_B");
  CHECK(rows[1] == "1,4");
  double prev = 5;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const double cb = std::stod(rows[i].substr(rows[i].find(',') + 1));
    CHECK(cb < prev);
    prev = cb;
  }
  CHECK(prev == doctest::Approx(1.0).epsilon(1e-9));

  r = run({"curve", "--family", "ot", "--n", "2", "--c-max", "2", "--samples", "11", "--clip"});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() < 12);
  CHECK(run({"curve", "--family", "ot", "--n", "2", "--c-max", "3"}).code == 2);
  CHECK(run({"curve", "--family", "ot", "--n", "2", "--samples", "1"}).code == 2);

  const auto dir = scratch("curve_out");
  r = run({"curve", "--family", "ot", "--n", "3", "--out", (dir / "c.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.empty());
  std::ifstream in(dir / "c.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "c_A,c_B");
}

TEST_CASE("figure export") {
  const auto dir = scratch("figures");
  auto r = run({"curve", "--figure", "ot-w2", "--out-dir", dir.string()});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).size() == 5);
  CHECK(fs::exists(dir / "ot-w2_n2.csv"));
  CHECK(fs::exists(dir / "ot-w2_n6.csv"));

  const auto env_dir = scratch("figures_env");
  ::setenv(sfebound::cli::kOutDirEnv, env_dir.c_str(), 1);
  r = run({"curve", "--figure", "knot-k2"});
  ::unsetenv(sfebound::cli::kOutDirEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(env_dir / "knot-k2_n4k2.csv"));

  CHECK(run({"curve", "--figure", "nope", "--out-dir", dir.string()}).code == 2);
  CHECK(run({"curve", "--figure", "xot", "--family", "ot", "--out-dir", dir.string()}).code == 2);
}

TEST_CASE("verify-lemmas") {
  const auto dir = scratch("verify");
  auto r = run({"verify-lemmas", "--instances", "40", "--max-dim", "4", "--seed", "1", "--out", (dir / "rec.jsonl").string()});
  REQUIRE(r.code == 0);
  CHECK(lines(r.out).back() == "total: 120 instances, 0 violations");
  std::ifstream in(dir / "rec.jsonl");
  std::size_t count = 0;
  for (std::string line; std::getline(in, line); ++count) {
    const auto rec = nlohmann::json::parse(line);
    CHECK(rec["holds"] == true);
    CHECK(rec.contains("seed"));
  }
  CHECK(count == 120);

  r = run({"verify-lemmas", "--instances", "20", "--lemma", "gentle", "--json"});
  REQUIRE(r.code == 0);
  expect_json_round_trip(r.out);
  CHECK(nlohmann::json::parse(r.out)["violations"] == 0);
  CHECK(run({"verify-lemmas", "--instances", "0"}).code == 2);
  CHECK(run({"verify-lemmas", "--min-dim", "5", "--max-dim", "3"}).code == 2);
  CHECK(run({"verify-lemmas", "--lemma", "other"}).code == 2);
}

TEST_CASE("simulate-dr") {
  auto r = run({"simulate-dr", "--family", "mp", "--n", "4", "--trials", "100000", "--seed", "0", "--json"});
  REQUIRE(r.code == 0);
  expect_json_round_trip(r.out);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["aborts"] == 0);
  CHECK(doc["tv_distance"].get<double>() < 0.02);

  r = run({"simulate-dr", "--family", "ot", "--n", "3", "--strategy", "set-bob", "--known", "0", "2", "--trials", "50000"});
  REQUIRE(r.code == 0);
  CHECK(field(r.out, "expected") == "0.6667");
  const auto comma = run({"simulate-dr", "--family", "ot", "--n", "3", "--strategy", "set-bob", "--known", "0,2", "--trials", "50000"});
  CHECK(comma.code == 0);
  CHECK(comma.out == r.out);
  CHECK(run({"simulate-dr", "--family", "ot", "--n", "3", "--strategy", "set-bob"}).code == 2);
  CHECK(run({"simulate-dr", "--family", "ot", "--n", "3", "--strategy", "set-bob", "--known", "7"}).code == 2);
  CHECK(run({"simulate-dr", "--family", "mp", "--n", "2000"}).code == 2);
  CHECK(run({"simulate-dr", "--family", "ot", "--n", "3", "--trials", "0"}).code == 2);
}

TEST_CASE("output is byte-identical across invocations") {
  for (const std::vector<std::string>& args :
       {std::vector<std::string>{"bound", "--family", "ip", "--n", "3", "--json"},
        std::vector<std::string>{"curve", "--family", "xot", "--n", "2", "--samples", "50"},
        std::vector<std::string>{"verify-lemmas", "--instances", "15", "--seed", "4", "--json"},
        std::vector<std::string>{"simulate-dr", "--family", "eq", "--n", "3", "--trials", "20000", "--seed", "2", "--strategy", "blind-alice"}}) {
    const auto a = run(args);
    const auto b = run(args);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
  }
  // thread count is not part of the result
  const auto one = run({"simulate-dr", "--family", "ot", "--n", "2", "--trials", "30000", "--threads", "1", "--json"});
  const auto four = run({"simulate-dr", "--family", "ot", "--n", "2", "--trials", "30000", "--threads", "4", "--json"});
  CHECK(one.out == four.out);
}
