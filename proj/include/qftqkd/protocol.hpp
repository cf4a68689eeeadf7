#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qftqkd/adversary.hpp"
#include "qftqkd/rng.hpp"
#include "qftqkd/scheme.hpp"

namespace qftqkd {

enum class ProtocolId {
  two_pass_qkd,           // receiver-prepared register, sender encodes the key
  three_pass_encryption,  // sender-prepared register, double scramble
  bb84,                   // single-qubit conjugate-basis baseline
};

const char* to_string(ProtocolId id);
std::optional<ProtocolId> protocol_from_string(std::string_view text);

// Interception point an empty EveStrategy::passes falls back to.
int default_eve_pass(ProtocolId id);

struct ProtocolParams {
  VerificationScheme scheme;
  int mismatch_limit = 0;
  // When set, the key wires carry these bits instead of fresh coin flips.
  std::optional<std::vector<std::uint8_t>> fixed_key_bits;
};

// Everything both parties plus the eavesdropper know after one run.
struct Transcript {
  ProtocolId protocol = ProtocolId::two_pass_qkd;
  Message intended_message;  // what the sender put on the wire
  Message measured_message;  // what the receiver read off
  bool pass = false;         // verification bits all matched (up to the limit)
  int mismatches = 0;
  std::vector<std::uint8_t> key;  // receiver's key bits, empty unless pass
  bool key_agreed = false;        // pass and the key survived intact
  std::vector<Observation> eve_observations;
  std::vector<std::uint8_t> alice_bases;  // bb84 only, 0 = Z, 1 = X
  std::vector<std::uint8_t> bob_bases;    // bb84 only, matches alice_bases
};

Transcript run_two_pass_qkd(const ProtocolParams& params, const EveStrategy& eve,
                            RandomEngine& rng);

// Sends `plaintext_key_bits` on the key wires; the verification wires carry
// the scheme's intended bits as usual.
Transcript run_three_pass_encryption(std::span<const std::uint8_t> plaintext_key_bits,
                                     const ProtocolParams& params, const EveStrategy& eve,
                                     RandomEngine& rng);

Transcript run_bb84(const ProtocolParams& params, const EveStrategy& eve, RandomEngine& rng);

// Draws key bits (honouring params.fixed_key_bits) and runs the protocol.
Transcript run_protocol(ProtocolId id, const ProtocolParams& params, const EveStrategy& eve,
                        RandomEngine& rng);

}  // namespace qftqkd
