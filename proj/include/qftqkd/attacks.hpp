#pragma once

#include <cstdint>
#include <vector>

#include "qftqkd/protocol.hpp"

namespace qftqkd {

// Outcome of the many-copies attack on BB84: the sender retransmits the same
// bits in the same bases, and the eavesdropper measures one wire per copy,
// alternating between the Z and X basis (Z first). A basis is ruled out once
// its recorded outcomes disagree; when exactly one basis survives, the bit is
// the value that basis kept repeating.
struct ManyCopiesBb84Result {
  int copies = 0;
  int target_wire = 0;
  int true_bit = 0;
  int true_basis = 0;        // 0 = Z, 1 = X
  bool detected = false;     // any verification mismatch across the copies
  bool basis_identified = false;
  int identified_basis = -1; // -1 until identified
  int inferred_bit = -1;     // -1 until identified
  std::vector<int> eve_bases;
  std::vector<int> eve_outcomes;
  std::vector<int> bob_bits;
};

ManyCopiesBb84Result many_copies_attack_bb84(const VerificationScheme& scheme, int target_wire,
                                             int copies, RandomEngine& rng);

// The same retransmission pressure against the two-pass protocol: the key is
// reused across copies but the receiver scrambles each copy with fresh phases,
// so every copy is an independent chance to catch the eavesdropper.
struct ManyCopiesTwoPassResult {
  int copies = 0;
  bool detected = false;
  int first_detected_copy = -1;  // -1 when every copy passed
  std::vector<std::uint8_t> per_copy_detected;
};

ManyCopiesTwoPassResult many_copies_attack_two_pass(const ProtocolParams& params,
                                                    const EveStrategy& eve, int copies,
                                                    RandomEngine& rng);

}  // namespace qftqkd
