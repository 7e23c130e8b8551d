#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <string>

#include "ct/io.hpp"
#include "ct/metrics.hpp"
#include "ct/nielsen.hpp"

using namespace ct;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run run(const std::string& args) {
  const std::string cmd = std::string(CT_CLI) + " " + args + " 2>/dev/null";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const char* name) { return std::string(CT_TEST_DATA) + "/" + name; }

std::string temp_file(const char* name, const std::string& text) {
  const auto p = (std::filesystem::temp_directory_path() / name).string();
  write_text_file(p, text);
  return p;
}

}  // namespace

TEST_CASE("dist matches the library") {
  const auto a = load_marking(data("pair_a.json"));
  const auto b = load_marking(data("pair_b.json"));
  const Thresholds th;

  auto same = run("dist " + data("pair_a.json") + " " + data("pair_a.json"));
  REQUIRE(same.code == 0);
  auto js = json::parse(same.out);
  CHECK(js["outputs"]["formula_distance_T"] == 0);
  CHECK(js["outputs"]["formula_distance_WP"] == 0);
  CHECK(js["calibration_digest"].is_string());

  auto r = run("dist --oracle " + data("pair_a.json") + " " + data("pair_b.json"));
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["outputs"]["formula_distance_T"] == formula_distance_T(a, b, th));
  CHECK(j["outputs"]["formula_distance_WP"] == formula_distance_WP(a, b, th));
  CHECK(j["outputs"]["terms"] == to_json(formula_terms(a, b, th.K)));
  CHECK(j["outputs"]["bfs_distance"] == *bfs_distance(a, b, 10));
}

TEST_CASE("error exit codes") {
  CHECK(run("dist " + data("pair_a.json") + " " + data("planted_k3.json")).code == 3);
  const auto bad = temp_file("ct_bad.json", "{ not json");
  CHECK(run("dist " + bad + " " + data("pair_a.json")).code == 2);
  const auto cfg = temp_file("ct_cfg_c.json", R"({"flat": {"c": 1.5}})");
  CHECK(run("--config " + cfg + " nonqc --d 10 --csv /dev/null").code == 6);
}

TEST_CASE("fix-search") {
  const auto trace = (std::filesystem::temp_directory_path() / "ct_trace.json").string();
  auto r = run("fix-search " + data("planted_k3.json") + " --trace " + trace);
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(is_fixed(marking_from_json(j["outputs"]["fixed"])));
  CHECK(read_json_file(trace) == j["outputs"]["trace"]);
  CHECK(j["outputs"]["final_distance"] <= j["outputs"]["bound"]);

  auto bad = run("fix-search " + data("not_almost_fixed.json"));
  CHECK(bad.code == 4);
  auto jb = json::parse(bad.out);
  CHECK(jb["outputs"]["certificate"]["diameter"] > 10);
}

TEST_CASE("barycenter of a fixed marking") {
  auto r = run("barycenter " + data("planted_k3.json"));
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(is_fixed(marking_from_json(j["outputs"]["fixed"])));
  CHECK(j["outputs"]["ratio"].get<double>() <= j["outputs"]["ratio_bound"].get<double>());

  const auto fixed = temp_file("ct_fixed.json", j["outputs"]["fixed"].dump());
  auto z = json::parse(run("barycenter " + fixed).out);
  CHECK(z["outputs"]["ratio"] == 0.0);
}

TEST_CASE("project") {
  auto r = run("project " + data("pair_a.json") + " --y slot0 --to " + data("pair_b.json"));
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["outputs"]["projection"]["base"] == "0/1");
  CHECK(j["outputs"]["distance"] ==
        proj_distance(SubsurfaceRef::slot_of(0), load_marking(data("pair_a.json")),
                      load_marking(data("pair_b.json"))));
  const auto s = temp_file("ct_simplex.json", R"(["glue1"])");
  auto p = json::parse(run("project " + data("pair_a.json") + " --phi " + s).out);
  CHECK(p["outputs"]["in_Q"] == true);
  CHECK(run("project " + data("pair_a.json") + " --y slot7").code == 3);
}

TEST_CASE("nonqc and calibrate check") {
  auto r = run("nonqc --d 10 --csv -");
  CHECK(r.code == 0);
  CHECK(r.out.rfind("d,t,orbit_diam,dist_to_fixed,slot1_slope,slot2_slope,glue_loglen\n", 0) == 0);
  CHECK(run("nonqc --d 10 --csv -").out == r.out);
  CHECK(run("calibrate --check").code == 0);
}
