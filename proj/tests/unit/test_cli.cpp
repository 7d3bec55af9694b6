#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hopadv/cli.hpp"
#include "hopadv/corpus.hpp"
#include "json.hpp"

using namespace hopadv;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string data_path(const char* name) {
  return std::string(HOPADV_TEST_DATA_DIR) + "/" + name;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("hopadv_cli_" + std::to_string(::getpid()));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const char* name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("unknown flags exit with the config code") {
  CHECK(run_command({"attack", "--nonsense"}) == 2);
  CHECK(run_command({"mystery"}) == 2);
}

TEST_CASE("missing inputs exit with the data code") {
  TempDir tmp;
  CHECK(run_command({"evaluate", "--pred", tmp / "absent.json", "--gold",
                     data_path("metric_fixture/gold.json")}) == 3);
}

TEST_CASE("attack runs end to end and is byte-deterministic") {
  TempDir tmp;
  std::vector<std::string> args = {
      "attack",
      "--in", data_path("fixture_50.json"),
      "--train", data_path("fixture_train.json"),
      "--resources", HOPADV_RESOURCE_DIR,
      "--seed", "7",
      "--out", tmp / "adv_a.json",
      "--manifest", tmp / "adv_a.manifest.jsonl",
  };
  REQUIRE(run_command(args) == 0);

  auto args_b = args;
  args_b[8] = tmp / "adv_b.json";
  args_b[10] = tmp / "adv_b.manifest.jsonl";
  args_b.push_back("--workers");
  args_b.push_back("4");
  REQUIRE(run_command(args_b) == 0);

  CHECK(read_file(tmp / "adv_a.json") == read_file(tmp / "adv_b.json"));
  CHECK(read_file(tmp / "adv_a.manifest.jsonl") == read_file(tmp / "adv_b.manifest.jsonl"));

  // the run manifest records config, seed, resource hashes and stats
  json manifest = json::parse(read_file(tmp / "adv_a.json.run.json"));
  CHECK(manifest["command"] == "attack");
  CHECK(manifest["config"]["seed"] == "7");
  CHECK(manifest["resource_hashes"].size() == 5);
  CHECK(manifest["stats"]["total"] == 50);
  CHECK(manifest["stats"]["attacked"].get<int>() >= 45);

  // emitted dataset loads and validates
  auto adv = load_dataset(tmp / "adv_a.json");
  CHECK(adv.size() == 50);
  for (const auto& ex : adv) CHECK(validate_example(ex).empty());
}

TEST_CASE("attack with --hop second counts empty-complement skips in the manifest") {
  TempDir tmp;
  REQUIRE(run_command({"attack", "--in", data_path("fixture_50.json"), "--train",
                       data_path("fixture_train.json"), "--resources", HOPADV_RESOURCE_DIR,
                       "--seed", "3", "--hop", "second", "--out", tmp / "adv.json"}) == 0);
  json manifest = json::parse(read_file(tmp / "adv.json.run.json"));
  CHECK(manifest["config"]["hop"] == "second");
}

TEST_CASE("annotate emits fixture shards usable as a provider") {
  TempDir tmp;
  REQUIRE(run_command({"annotate", "--in", data_path("fixture_train.json"), "--provider",
                       "builtin", "--resources", HOPADV_RESOURCE_DIR, "--out",
                       tmp / "shards"}) == 0);
  size_t shard_count = 0;
  for (const auto& entry : fs::directory_iterator(tmp / "shards"))
    if (entry.path().filename().string().rfind("shard-", 0) == 0) ++shard_count;
  CHECK(shard_count >= 1);

  // the shards drive an attack via the fixture provider
  REQUIRE(run_command({"annotate", "--in", data_path("fixture_50.json"), "--provider", "builtin",
                       "--resources", HOPADV_RESOURCE_DIR, "--out", tmp / "shards50"}) == 0);
  REQUIRE(run_command({"attack", "--in", data_path("fixture_50.json"), "--train",
                       data_path("fixture_train.json"), "--resources", HOPADV_RESOURCE_DIR,
                       "--provider", "fixture", "--fixtures", tmp / "shards50", "--seed", "7",
                       "--out", tmp / "adv_fixture.json"}) == 0);

  // identical output to the builtin provider under the same seed
  REQUIRE(run_command({"attack", "--in", data_path("fixture_50.json"), "--train",
                       data_path("fixture_train.json"), "--resources", HOPADV_RESOURCE_DIR,
                       "--seed", "7", "--out", tmp / "adv_builtin.json"}) == 0);
  CHECK(read_file(tmp / "adv_fixture.json") == read_file(tmp / "adv_builtin.json"));
}

TEST_CASE("evaluate, report and mix subcommands") {
  TempDir tmp;
  REQUIRE(run_command({"evaluate", "--pred", data_path("metric_fixture/pred.json"), "--gold",
                       data_path("metric_fixture/gold.json"), "--out",
                       tmp / "metrics.json"}) == 0);
  json metrics = json::parse(read_file(tmp / "metrics.json"));
  CHECK(metrics.contains("ans_f1"));

  // robustness report against a trivial manifest
  std::string manifest_path = tmp / "manifest.jsonl";
  {
    std::ofstream out(manifest_path);
    auto gold = load_dataset(data_path("metric_fixture/gold.json"));
    for (const auto& ex : gold)
      out << json{{"id", ex.id}, {"status", "attacked"}, {"type", "bridging"},
                  {"fake_answer", "Guangzhou"}, {"hop", "first"}}
                 .dump()
          << "\n";
  }
  REQUIRE(run_command({"report", "--pred-ori", data_path("metric_fixture/pred.json"),
                       "--pred-adv", data_path("metric_fixture/pred.json"), "--gold-ori",
                       data_path("metric_fixture/gold.json"), "--gold-adv",
                       data_path("metric_fixture/gold.json"), "--manifest", manifest_path,
                       "--out", tmp / "report.json", "--table", tmp / "report.txt"}) == 0);
  json report = json::parse(read_file(tmp / "report.json"));
  CHECK(report["delta"]["ans_em"].get<double>() == doctest::Approx(0.0));
  CHECK(read_file(tmp / "report.txt").find("Ans EM") != std::string::npos);

  REQUIRE(run_command({"mix", "--original", data_path("fixture_50.json"), "--adversarial",
                       data_path("fixture_50.json"), "--fraction", "0.25", "--seed", "4",
                       "--out", tmp / "mixed.json"}) == 0);
  auto mixed = load_dataset(tmp / "mixed.json");
  CHECK(mixed.size() == 50 + 13);  // ceil(0.25 * 50)
}
