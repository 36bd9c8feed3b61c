#include "explore/trace_io.hpp"

#include "json.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace explore {

using nlohmann::json;

namespace {

json pose_json(const Pose& p) { return json{{"x", p.x}, {"y", p.y}, {"theta", p.theta}}; }

Pose pose_from(const json& j) {
  return {j.at("x").get<double>(), j.at("y").get<double>(), j.at("theta").get<double>()};
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, end);
}

std::string format_trace(const EpisodeTrace& trace) {
  const TraceHeader& h = trace.header;
  std::string out;
  json header{{"type", "header"},
              {"world", h.world},
              {"policy", h.policy},
              {"eta", h.eta},
              {"seed", h.seed},
              {"mode", h.door_mismatch ? "door-mismatch" : "matched"},
              {"steps", h.steps},
              {"start", pose_json(h.start)},
              {"initial_agent_coverage_m2", h.initial_agent_coverage},
              {"initial_true_coverage_m2", h.initial_true_coverage},
              {"replicate", h.replicate},
              {"world_index", h.world_index},
              {"start_index", h.start_index}};
  out += header.dump() + "\n";
  for (const TraceStep& s : trace.steps) {
    json row{{"t", s.t},
             {"action", std::string(to_string(s.action))},
             {"true_pose", pose_json(s.true_pose)},
             {"est_pose", pose_json(s.est_pose)},
             {"bump", s.bump},
             {"reward_total", s.reward_total},
             {"agent_coverage_m2", s.agent_coverage},
             {"true_coverage_m2", s.true_coverage}};
    out += row.dump() + "\n";
  }
  return out;
}

void write_trace(const EpisodeTrace& trace, const std::filesystem::path& path) {
  write_file_atomic(path, format_trace(trace));
}

EpisodeTrace parse_trace(std::istream& in) {
  EpisodeTrace trace;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad trace line: ") + e.what());
    }
    try {
      if (!have_header) {
        if (j.value("type", "") != "header") throw ParseError("trace must start with a header");
        TraceHeader& h = trace.header;
        h.world = j.at("world").get<std::string>();
        h.policy = j.at("policy").get<std::string>();
        h.eta = j.at("eta").get<double>();
        h.seed = j.at("seed").get<std::uint64_t>();
        h.door_mismatch = j.at("mode").get<std::string>() == "door-mismatch";
        h.steps = j.at("steps").get<int>();
        h.start = pose_from(j.at("start"));
        h.initial_agent_coverage = j.at("initial_agent_coverage_m2").get<double>();
        h.initial_true_coverage = j.at("initial_true_coverage_m2").get<double>();
        h.replicate = j.value("replicate", 0);
        h.world_index = j.value("world_index", 0);
        h.start_index = j.value("start_index", 0);
        have_header = true;
        continue;
      }
      TraceStep s;
      s.t = j.at("t").get<int>();
      const auto a = parse_action(j.at("action").get<std::string>());
      if (!a) throw ParseError("unknown action in trace");
      s.action = *a;
      s.true_pose = pose_from(j.at("true_pose"));
      s.est_pose = pose_from(j.at("est_pose"));
      s.bump = j.at("bump").get<bool>();
      s.reward_total = j.at("reward_total").get<double>();
      s.agent_coverage = j.at("agent_coverage_m2").get<double>();
      s.true_coverage = j.at("true_coverage_m2").get<double>();
      trace.steps.push_back(s);
    } catch (const json::exception& e) {
      throw ParseError(std::string("bad trace record: ") + e.what());
    }
  }
  if (!have_header) throw ParseError("empty trace");
  return trace;
}

EpisodeTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  return parse_trace(in);
}

std::string format_curves_csv(std::span<const CurveRow> rows) {
  std::string out = "t,policy,eta,mode,mean,min,max\n";
  for (const CurveRow& r : rows) {
    out += std::to_string(r.t) + ',' + r.policy + ',' + format_number(r.eta) + ',' +
           (r.door_mismatch ? "door-mismatch" : "matched") + ',' + format_number(r.mean) + ',' +
           format_number(r.min) + ',' + format_number(r.max) + '\n';
  }
  return out;
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace explore
