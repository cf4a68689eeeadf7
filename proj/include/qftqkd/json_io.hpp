#pragma once

#include <string>

#include "json.hpp"
#include "qftqkd/adversary.hpp"
#include "qftqkd/protocol.hpp"
#include "qftqkd/scheme.hpp"

namespace qftqkd {

// Scheme document: {"total_qubits": p, "verification": [{"index": i, "bit": b},
// ...], "compartments": [[...], ...], "public": bool}. Parsing is strict:
// unknown or missing fields are errors, and the result must validate.
VerificationScheme scheme_from_json(const nlohmann::json& doc);
nlohmann::ordered_json scheme_to_json(const VerificationScheme& scheme);
VerificationScheme load_scheme_file(const std::string& path);

// Strategy descriptor: {"kind": "none|full|keys|subset", "indices": [...],
// "copies": n, "passes": [...]}; indices only with subset, the rest optional.
EveStrategy strategy_from_json(const nlohmann::json& doc);
nlohmann::ordered_json strategy_to_json(const EveStrategy& strategy);

nlohmann::ordered_json transcript_to_json(const Transcript& transcript);

}  // namespace qftqkd
