#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "fjs/error.hpp"
#include "fjs/instance.hpp"
#include "fjs/solution_graph.hpp"

namespace fjs {

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw Error("write failed for '" + path.string() + "'");
}

inline Instance load_instance(const std::filesystem::path& path, bool classical, std::optional<double> alpha) {
  const std::string text = read_text_file(path);
  try {
    if (classical) {
      if (!alpha) throw Error("classical instances need an explicit learning rate");
      return import_classical_fjs(text, *alpha);
    }
    return parse_instance(text, alpha);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line());
  }
}

/// Solution document. Key order is fixed so equal schedules serialize to equal bytes.
inline nlohmann::ordered_json schedule_to_json(const Schedule& s) {
  nlohmann::ordered_json doc;
  doc["makespan"] = s.makespan;
  std::vector<int> assignment(s.assignment.begin() + 1, s.assignment.end() - 1);
  doc["assignment"] = assignment;
  doc["sequences"] = std::vector<std::vector<int>>(s.sequences.begin() + 1, s.sequences.end());
  doc["critical_path"] = s.critical_operations();
  auto ops = nlohmann::ordered_json::array();
  for (const OperationTiming& t : operation_timings(s)) {
    nlohmann::ordered_json o;
    o["id"] = t.operation;
    o["machine"] = t.machine;
    o["position"] = t.position;
    o["actual_time"] = t.actual_time;
    o["start"] = t.start;
    o["completion"] = t.completion;
    ops.push_back(std::move(o));
  }
  doc["operations"] = std::move(ops);
  return doc;
}

inline std::string serialize_schedule(const Schedule& s) { return schedule_to_json(s).dump(2) + "\n"; }

/// Rebuilds a schedule from a solution document's machine sequences.
inline Schedule schedule_from_json(const Instance& inst, const nlohmann::json& doc) {
  if (!doc.contains("sequences")) throw Error("solution has no 'sequences'");
  std::vector<std::vector<int>> seq(1);
  for (const auto& q : doc.at("sequences")) seq.push_back(q.get<std::vector<int>>());
  if (static_cast<int>(seq.size()) != inst.num_machines + 1)
    throw Error("solution lists " + std::to_string(seq.size() - 1) + " machines, instance has " + std::to_string(inst.num_machines));
  if (doc.contains("assignment")) return build_schedule(inst, doc.at("assignment").get<std::vector<int>>(), std::move(seq));
  return build_schedule(inst, std::move(seq));
}

/// Checks a solution document against an instance: the sequencing must be
/// feasible and every claimed quantity must match its recomputed value.
inline std::vector<std::string> check_solution(const Instance& inst, const nlohmann::json& doc) {
  std::vector<std::string> problems;
  Schedule s;
  try {
    s = schedule_from_json(inst, doc);
  } catch (const std::exception& e) {
    problems.emplace_back(e.what());
    return problems;
  }
  for (const auto& v : validate_schedule(inst, s)) problems.push_back(v.message);
  if (doc.contains("makespan") && doc.at("makespan").get<Time>() != s.makespan)
    problems.push_back("claimed makespan " + std::to_string(doc.at("makespan").get<Time>()) + " but recomputed " + std::to_string(s.makespan));
  if (doc.contains("operations")) {
    const auto timings = operation_timings(s);
    for (const auto& o : doc.at("operations")) {
      const int id = o.value("id", 0);
      if (id < 1 || id > inst.num_operations) {
        problems.push_back("operations entry with unknown id " + std::to_string(id));
        continue;
      }
      const auto& t = timings[static_cast<std::size_t>(id) - 1];
      auto check = [&](const char* key, Time expect) {
        if (o.contains(key) && o.at(key).get<Time>() != expect)
          problems.push_back("operation " + std::to_string(id) + ": claimed " + key + " " + std::to_string(o.at(key).get<Time>()) +
                             ", recomputed " + std::to_string(expect));
      };
      check("machine", t.machine);
      check("position", t.position);
      check("actual_time", t.actual_time);
      check("start", t.start);
      check("completion", t.completion);
    }
  }
  return problems;
}

}  // namespace fjs
