#include "doctest.h"

#include "explore/trace_io.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace explore;

namespace {

EpisodeTrace sample_trace() {
  GenParams gp;
  gp.target_area = 40.0;
  const Floorplan plan = generate_house(3, gp, "house_3");
  EpisodeConfig cfg;
  cfg.eta = 0.04;
  cfg.seed = 99;
  cfg.steps = 60;
  cfg.mode.door_mismatch = true;
  return run_episode(plan, cfg).trace;
}

}  // namespace

TEST_CASE("trace round trip is exact") {
  const EpisodeTrace t = sample_trace();
  const std::string text = format_trace(t);
  std::istringstream in(text);
  const EpisodeTrace back = parse_trace(in);
  CHECK(back.header.world == "house_3");
  CHECK(back.header.door_mismatch);
  CHECK(back.header.eta == 0.04);
  CHECK(back.header.seed == 99);
  CHECK(back.header.start == t.header.start);
  REQUIRE(back.steps.size() == t.steps.size());
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    CHECK(back.steps[i].action == t.steps[i].action);
    CHECK(back.steps[i].true_pose == t.steps[i].true_pose);
    CHECK(back.steps[i].est_pose == t.steps[i].est_pose);
    CHECK(back.steps[i].reward_total == t.steps[i].reward_total);
    CHECK(back.steps[i].true_coverage == t.steps[i].true_coverage);
  }
  CHECK(format_trace(back) == text);
  // One header line plus one line per step.
  CHECK(std::count(text.begin(), text.end(), '\n') == 61);
}

TEST_CASE("malformed traces") {
  std::istringstream empty("");
  CHECK_THROWS_AS(parse_trace(empty), ParseError);
  std::istringstream no_header("{\"t\":1}\n");
  CHECK_THROWS_AS(parse_trace(no_header), ParseError);
  std::istringstream garbage("not json\n");
  CHECK_THROWS_AS(parse_trace(garbage), ParseError);
  std::istringstream bad_action(format_trace(EpisodeTrace{}) +
                                "{\"t\":1,\"action\":\"fly\"}\n");
  CHECK_THROWS_AS(parse_trace(bad_action), ParseError);
  CHECK_THROWS_AS(read_trace("/nonexistent/trace.jsonl"), ParseError);
}

TEST_CASE("curves CSV") {
  std::vector<CurveRow> rows{{1, "frontier", 0.02, false, 1.5, 1.25, 1.75},
                             {2, "frontier", 0.1, true, 3.0, 2.0, 4.0}};
  CHECK(format_curves_csv(rows) ==
        "t,policy,eta,mode,mean,min,max\n"
        "1,frontier,0.02,matched,1.5,1.25,1.75\n"
        "2,frontier,0.1,door-mismatch,3,2,4\n");
}

TEST_CASE("number formatting round-trips") {
  for (double v : {0.1, 1.0 / 3.0, 327.91250000000002, 1e-300, 0.0}) {
    CHECK(std::stod(format_number(v)) == v);
  }
}

TEST_CASE("atomic writes leave no temporary file") {
  const auto dir = std::filesystem::temp_directory_path() / "explore_trace_io_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "trace.jsonl";
  const EpisodeTrace t = sample_trace();
  write_trace(t, path);
  write_trace(t, path);
  CHECK(std::filesystem::exists(path));
  CHECK_FALSE(std::filesystem::exists(dir / "trace.jsonl.tmp"));
  CHECK(format_trace(read_trace(path)) == format_trace(t));
  std::filesystem::remove_all(dir);
}
