#pragma once

// JSON and CSV serialization plus the run manifest.  Doubles round-trip
// bit-exactly through the JSON layer (shortest-round-trip formatting).

#include <json.hpp>

#include "mvlab/bell.hpp"
#include "mvlab/compiler.hpp"

namespace mvlab {

using json = nlohmann::json;

json grid_to_json(const ModularGrid& g);
ModularGrid grid_from_json(const json& j);

// {grid:{m_theta,n_k}, representation:"modular"|"position",
//  amplitudes:[[re,im],...]} row-major in (j,l) / index s.
json state_to_json(const ModularState& s);
json state_to_json(const PositionState& s);
ModularState modular_state_from_json(const json& j);
PositionState position_state_from_json(const json& j);

json gate_to_json(const GateSpec& g);
GateSpec gate_from_json(const json& j);

json program_to_json(const GateProgram& p);
GateProgram program_from_json(const json& j);

json block_operator_to_json(const BlockOperator& op);
BlockOperator block_operator_from_json(const json& j);

json validation_to_json(const WeightValidation& v);
json verify_report_to_json(const VerifyReport& r);

// Tabulated weight: {grid:{m_theta,n_k}, values:[[re,im],...]} row-major in j.
json weight_table_to_json(const WeightTable& F, const ModularGrid& g);
WeightTable weight_table_from_json(const json& j, const ModularGrid& g);

// Human-readable listing, one gate per line with parameters.
std::string program_listing(const GateProgram& p);

std::string spectrum_to_csv(const BlockOperator& op);

// Writes content via a temporary file and rename.
void atomic_write(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

struct RunManifest {
  std::string command;
  std::vector<std::string> parameters;
  ModularGrid grid;
  unsigned long long seed = 0;
  std::string convention_version = "ct-v1";
  std::vector<std::string> outputs;
  double wall_clock_seconds = 0.0;
};
json manifest_to_json(const RunManifest& m);
RunManifest manifest_from_json(const json& j);

}  // namespace mvlab
