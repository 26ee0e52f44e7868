#include "tpg/config.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tpg/environment.hpp"
#include "tpg/fault.hpp"
#include "tpg/instruction.hpp"

namespace tpg {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Fault(FaultKind::Config, key + ": " + why);
}

std::uint64_t as_unsigned(const json& v, const std::string& key) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer()) bad(key, "out of range: must be >= 0");
  bad(key, "expected a non-negative integer");
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) bad(key, "expected a number");
  return v.get<double>();
}

std::string as_text(const json& v, const std::string& key) {
  if (!v.is_string()) bad(key, "expected a string");
  return v.get<std::string>();
}

using Reader = std::function<void(const json&, RunConfig&, const std::string&)>;

Reader size_field(std::size_t EvolutionParams::*field) {
  return [field](const json& v, RunConfig& c, const std::string& key) {
    c.params.*field = static_cast<std::size_t>(as_unsigned(v, key));
  };
}

Reader real_field(double EvolutionParams::*field) {
  return [field](const json& v, RunConfig& c, const std::string& key) { c.params.*field = as_real(v, key); };
}

const std::map<std::string, Reader>& readers() {
  static const std::map<std::string, Reader> table = {
      {"nbRoots", size_field(&EvolutionParams::nb_roots)},
      {"ratioDeletedRoots", real_field(&EvolutionParams::ratio_deleted_roots)},
      {"nbGenerations", size_field(&EvolutionParams::nb_generations)},
      {"maxInitOutgoingEdges", size_field(&EvolutionParams::max_init_outgoing_edges)},
      {"maxOutgoingEdges", size_field(&EvolutionParams::max_outgoing_edges)},
      {"maxProgramSize", size_field(&EvolutionParams::max_program_size)},
      {"nbRegisters", size_field(&EvolutionParams::nb_registers)},
      {"nbIterationsPerPolicyEvaluation", size_field(&EvolutionParams::nb_iterations_per_policy_evaluation)},
      {"maxStepsPerEvaluation", size_field(&EvolutionParams::max_steps_per_evaluation)},
      {"pEdgeDelete", real_field(&EvolutionParams::p_edge_delete)},
      {"pEdgeAdd", real_field(&EvolutionParams::p_edge_add)},
      {"pProgramMutate", real_field(&EvolutionParams::p_program_mutate)},
      {"pEdgeDestinationChange", real_field(&EvolutionParams::p_edge_destination_change)},
      {"pEdgeDestinationIsAction", real_field(&EvolutionParams::p_edge_destination_is_action)},
      {"pLineDelete", real_field(&EvolutionParams::p_line_delete)},
      {"pLineAdd", real_field(&EvolutionParams::p_line_add)},
      {"pLineMutate", real_field(&EvolutionParams::p_line_mutate)},
      {"pLineSwap", real_field(&EvolutionParams::p_line_swap)},
      {"archiveSize", size_field(&EvolutionParams::archive_size)},
      {"archivingProbability", real_field(&EvolutionParams::archiving_probability)},
      {"maxOriginalityRounds", size_field(&EvolutionParams::max_originality_rounds)},
      {"aggregation",
       [](const json& v, RunConfig& c, const std::string& key) {
         auto parsed = parse_score_aggregation(as_text(v, key));
         if (!parsed) bad(key, "expected mean, min or median");
         c.params.aggregation = *parsed;
       }},
      {"env", [](const json& v, RunConfig& c, const std::string& key) { c.env = as_text(v, key); }},
      {"iset", [](const json& v, RunConfig& c, const std::string& key) { c.iset = as_text(v, key); }},
      {"seed",
       [](const json& v, RunConfig& c, const std::string& key) {
         if (v.is_null()) {
           c.seed.reset();
         } else {
           c.seed = as_unsigned(v, key);
         }
       }},
      {"nbThreads",
       [](const json& v, RunConfig& c, const std::string& key) {
         if (v.is_null()) {
           c.nb_threads.reset();
         } else {
           c.nb_threads = static_cast<std::size_t>(as_unsigned(v, key));
         }
       }},
      {"out", [](const json& v, RunConfig& c, const std::string& key) { c.out = as_text(v, key); }},
      {"log", [](const json& v, RunConfig& c, const std::string& key) { c.log = as_text(v, key); }},
      {"logTimings",
       [](const json& v, RunConfig& c, const std::string& key) {
         if (!v.is_boolean()) bad(key, "expected true or false");
         c.log_timings = v.get<bool>();
       }},
      {"formatVersion",
       [](const json& v, RunConfig&, const std::string& key) {
         if (as_unsigned(v, key) != kFormatVersion) bad(key, "unsupported version " + v.dump());
       }},
  };
  return table;
}

bool contains(const std::vector<std::string>& names, const std::string& name) {
  return std::find(names.begin(), names.end(), name) != names.end();
}

}  // namespace

void RunConfig::validate() const {
  params.validate();
  if (!contains(environment_names(), env)) bad("env", "unknown environment '" + env + "'");
  if (!contains(instruction_set_names(), iset)) bad("iset", "unknown instruction set '" + iset + "'");
}

RunConfig load_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw Fault(FaultKind::Parse, std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Fault(FaultKind::Parse, "config must be a JSON object");

  RunConfig config;
  const auto& table = readers();
  for (const auto& [key, value] : doc.items()) {
    auto it = table.find(key);
    if (it == table.end()) bad(key, "unknown key");
    it->second(value, config, key);
  }
  config.validate();
  return config;
}

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Fault(FaultKind::Io, "cannot read " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return load_config(text.str());
}

std::string to_json(const RunConfig& c) {
  const EvolutionParams& p = c.params;
  json doc = {
      {"nbRoots", p.nb_roots},
      {"ratioDeletedRoots", p.ratio_deleted_roots},
      {"nbGenerations", p.nb_generations},
      {"maxInitOutgoingEdges", p.max_init_outgoing_edges},
      {"maxOutgoingEdges", p.max_outgoing_edges},
      {"maxProgramSize", p.max_program_size},
      {"nbRegisters", p.nb_registers},
      {"nbIterationsPerPolicyEvaluation", p.nb_iterations_per_policy_evaluation},
      {"maxStepsPerEvaluation", p.max_steps_per_evaluation},
      {"pEdgeDelete", p.p_edge_delete},
      {"pEdgeAdd", p.p_edge_add},
      {"pProgramMutate", p.p_program_mutate},
      {"pEdgeDestinationChange", p.p_edge_destination_change},
      {"pEdgeDestinationIsAction", p.p_edge_destination_is_action},
      {"pLineDelete", p.p_line_delete},
      {"pLineAdd", p.p_line_add},
      {"pLineMutate", p.p_line_mutate},
      {"pLineSwap", p.p_line_swap},
      {"archiveSize", p.archive_size},
      {"archivingProbability", p.archiving_probability},
      {"maxOriginalityRounds", p.max_originality_rounds},
      {"aggregation", std::string(to_string(p.aggregation))},
      {"env", c.env},
      {"iset", c.iset},
      {"out", c.out},
      {"log", c.log},
      {"logTimings", c.log_timings},
      {"formatVersion", kFormatVersion},
  };
  doc["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  doc["nbThreads"] = c.nb_threads ? json(*c.nb_threads) : json(nullptr);
  return doc.dump(2) + "\n";
}

}  // namespace tpg
