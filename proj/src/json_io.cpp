#include "qftqkd/json_io.hpp"

#include <fstream>
#include <span>
#include <stdexcept>

namespace qftqkd {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

void require_fields(const json& doc, std::initializer_list<const char*> required,
                    std::initializer_list<const char*> optional, const char* what) {
  if (!doc.is_object()) throw std::invalid_argument(std::string(what) + " must be an object");
  for (const char* field : required)
    if (!doc.contains(field))
      throw std::invalid_argument(std::string(what) + " is missing field '" + field + "'");
  for (const auto& [key, value] : doc.items()) {
    const auto known = [&](std::initializer_list<const char*> fields) {
      for (const char* field : fields)
        if (key == field) return true;
      return false;
    };
    if (!known(required) && !known(optional))
      throw std::invalid_argument(std::string(what) + " has unknown field '" + key + "'");
  }
}

int as_int(const json& value, const char* what) {
  if (!value.is_number_integer())
    throw std::invalid_argument(std::string(what) + " must be an integer");
  return value.get<int>();
}

std::vector<int> as_int_array(const json& value, const char* what) {
  if (!value.is_array()) throw std::invalid_argument(std::string(what) + " must be an array");
  std::vector<int> out;
  out.reserve(value.size());
  for (const auto& item : value) out.push_back(as_int(item, what));
  return out;
}

json bit_array(std::span<const std::uint8_t> bits) {
  json out = json::array();
  for (auto b : bits) out.push_back(static_cast<int>(b));
  return out;
}

}  // namespace

VerificationScheme scheme_from_json(const json& doc) {
  require_fields(doc, {"total_qubits", "verification", "compartments", "public"}, {}, "scheme");
  VerificationScheme scheme;
  scheme.total_qubits = as_int(doc["total_qubits"], "total_qubits");
  if (!doc["verification"].is_array())
    throw std::invalid_argument("verification must be an array");
  for (const auto& entry : doc["verification"]) {
    require_fields(entry, {"index", "bit"}, {}, "verification entry");
    scheme.verification.push_back(
        {as_int(entry["index"], "index"), as_int(entry["bit"], "bit")});
  }
  if (!doc["compartments"].is_array())
    throw std::invalid_argument("compartments must be an array");
  for (const auto& group : doc["compartments"])
    scheme.compartments.push_back(as_int_array(group, "compartment"));
  if (!doc["public"].is_boolean()) throw std::invalid_argument("public must be a boolean");
  scheme.is_public = doc["public"].get<bool>();
  validate(scheme);
  return scheme;
}

ordered_json scheme_to_json(const VerificationScheme& scheme) {
  ordered_json doc;
  doc["total_qubits"] = scheme.total_qubits;
  doc["verification"] = ordered_json::array();
  for (const auto& vb : scheme.verification)
    doc["verification"].push_back({{"index", vb.index}, {"bit", vb.bit}});
  doc["compartments"] = scheme.compartments;
  doc["public"] = scheme.is_public;
  return doc;
}

VerificationScheme load_scheme_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open scheme file: " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("scheme file " + path + " is not valid JSON: " + e.what());
  }
  return scheme_from_json(doc);
}

EveStrategy strategy_from_json(const json& doc) {
  require_fields(doc, {"kind"}, {"indices", "copies", "passes"}, "strategy");
  if (!doc["kind"].is_string()) throw std::invalid_argument("kind must be a string");
  const auto kind = eve_kind_from_string(doc["kind"].get<std::string>());
  if (!kind) throw std::invalid_argument("unknown strategy kind '" +
                                         doc["kind"].get<std::string>() + "'");
  EveStrategy strategy;
  strategy.kind = *kind;
  if (doc.contains("indices")) {
    if (strategy.kind != EveKind::subset)
      throw std::invalid_argument("indices only apply to the subset kind");
    strategy.indices = as_int_array(doc["indices"], "indices");
  } else if (strategy.kind == EveKind::subset) {
    throw std::invalid_argument("subset strategy needs indices");
  }
  if (doc.contains("copies")) {
    strategy.copies = as_int(doc["copies"], "copies");
    if (strategy.copies < 1) throw std::invalid_argument("copies must be at least 1");
  }
  if (doc.contains("passes")) {
    strategy.passes = as_int_array(doc["passes"], "passes");
    for (int pass : strategy.passes)
      if (pass < 1 || pass > 3) throw std::invalid_argument("passes must lie in 1..3");
  }
  return strategy;
}

ordered_json strategy_to_json(const EveStrategy& strategy) {
  ordered_json doc;
  doc["kind"] = to_string(strategy.kind);
  if (strategy.kind == EveKind::subset) doc["indices"] = strategy.indices;
  doc["copies"] = strategy.copies;
  doc["passes"] = strategy.passes;
  return doc;
}

ordered_json transcript_to_json(const Transcript& transcript) {
  ordered_json doc;
  doc["protocol"] = to_string(transcript.protocol);
  doc["intended_message"] = bit_array(transcript.intended_message.bits);
  doc["measured_message"] = bit_array(transcript.measured_message.bits);
  doc["verdict"] = transcript.pass ? "pass" : "fail";
  doc["eve_observations"] = ordered_json::array();
  for (const auto& obs : transcript.eve_observations)
    doc["eve_observations"].push_back({{"wire", obs.wire}, {"bit", obs.bit}});
  if (transcript.pass) doc["key_agreed"] = bit_array(transcript.key);
  if (transcript.protocol == ProtocolId::bb84) {
    doc["bases"] = {{"send", bit_array(transcript.alice_bases)},
                    {"measure", bit_array(transcript.bob_bases)}};
  }
  return doc;
}

}  // namespace qftqkd
