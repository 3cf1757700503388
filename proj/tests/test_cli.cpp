#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cshmm/cli.hpp"

using namespace cshmm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

int run(std::vector<std::string> args) {
  std::vector<const char*> argv = {"cshmm"};
  for (const auto& a : args) argv.push_back(a.c_str());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("cshmm_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const {
    return (path / name).string();
  }
};

}  // namespace

TEST_CASE("config validation exit codes") {
  CHECK(run({"curves", "--machine", "even", "--t-max", "0"}) == kExitConfig);
  CHECK(run({"curves", "--t-max", "4"}) == kExitConfig);  // missing machine
  CHECK(run({"curves", "--machine", "even", "--p", "1.5", "--t-max", "4"}) ==
        kExitConfig);
  CHECK(run({"curves", "--machine", "nosuch", "--t-max", "4"}) == kExitConfig);
  CHECK(run({"curves", "--machine", "even", "--format", "xml"}) == kExitConfig);
}

TEST_CASE("curves csv output") {
  TempDir tmp;
  std::string out = tmp.file("curves.csv");
  CHECK(run({"curves", "--machine", "even", "--p", "0.5", "--t-max", "10",
             "--out", out}) == kExitOk);
  std::string content = slurp(out);
  std::istringstream is(content);
  std::string header;
  std::getline(is, header);
  CHECK(header ==
        "t,H_lower,H_upper,hmu_t_lower,hmu_t_upper,E_partial_lower,"
        "E_partial_upper,gap_sum_lower");
  int rows = 0;
  double prev_hmu_hi = 2.0;
  std::string line;
  while (std::getline(is, line)) {
    ++rows;
    std::istringstream cells(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(cells, cell, ',')) vals.push_back(std::stod(cell));
    REQUIRE(vals.size() == 8);
    CHECK(vals[3] <= vals[4]);          // hmu enclosure ordered
    CHECK(vals[4] <= prev_hmu_hi + 1e-9);  // decreasing for the even process
    prev_hmu_hi = vals[4];
  }
  CHECK(rows == 10);
  CHECK(!std::filesystem::exists(out + ".tmp"));
}

TEST_CASE("curves jsonl output parses") {
  TempDir tmp;
  std::string out = tmp.file("curves.jsonl");
  CHECK(run({"curves", "--machine", "even", "--t-max", "3", "--format",
             "jsonl", "--out", out}) == kExitOk);
  std::istringstream is(slurp(out));
  std::string line;
  int rows = 0;
  while (std::getline(is, line)) {
    auto obj = nlohmann::json::parse(line);
    CHECK(obj.contains("t"));
    CHECK(obj.contains("H_lower"));
    CHECK(obj["H_lower"].get<double>() <= obj["H_upper"].get<double>());
    ++rows;
  }
  CHECK(rows == 3);
}

TEST_CASE("verify even exits zero") {
  CHECK(run({"verify", "--machine", "even", "--t-max", "6"}) == kExitOk);
}

TEST_CASE("sample is seed deterministic and atomic") {
  TempDir tmp;
  std::string a = tmp.file("a.txt"), b = tmp.file("b.txt");
  CHECK(run({"sample", "--machine", "bc", "--length", "5000", "--seed", "7",
             "--out", a}) == kExitOk);
  CHECK(run({"sample", "--machine", "bc", "--length", "5000", "--seed", "7",
             "--out", b}) == kExitOk);
  std::string ca = slurp(a), cb = slurp(b);
  CHECK(ca == cb);
  CHECK(ca.size() == 5001);  // newline-terminated record
  CHECK(ca.back() == '\n');
  // mostly root self-loops
  std::uint64_t fours = 0;
  for (char ch : ca) fours += ch == '4';
  CHECK(fours > 4500);
  CHECK(!std::filesystem::exists(a + ".tmp"));

  std::string c = tmp.file("c.txt");
  CHECK(run({"sample", "--machine", "bc", "--length", "5000", "--seed", "8",
             "--out", c}) == kExitOk);
  CHECK(slurp(c) != ca);
}

TEST_CASE("hpm sample shows the periodic tail") {
  TempDir tmp;
  std::string out = tmp.file("hpm.txt");
  CHECK(run({"sample", "--machine", "hpm", "--length", "100", "--seed", "3",
             "--out", out}) == kExitOk);
  std::string s = slurp(out);
  s.pop_back();
  // after the first 0 the word settles into a fixed period: 1^(i-1) 0
  auto first0 = s.find('0');
  REQUIRE(first0 != std::string::npos);
  auto second0 = s.find('0', first0 + 1);
  REQUIRE(second0 != std::string::npos);
  std::size_t period = second0 - first0;
  for (std::size_t a = first0; a + period < s.size(); ++a)
    CHECK(s[a] == s[a + period]);
}
