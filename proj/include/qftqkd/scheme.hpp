#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qftqkd/rng.hpp"

namespace qftqkd {

enum class SchemeKind {
  bb84_random,
  qft_random,
  pair_compartment,
  pair_flat,
  triple_compartment,
  triple_flat,
};

const char* to_string(SchemeKind kind);
std::optional<SchemeKind> scheme_kind_from_string(std::string_view name);

struct VerificationBit {
  int index = 0;
  int bit = 0;
};

/// Placement contract for one transmission: which wires carry verification
/// values (and which values), and how the register splits into independently
/// Fourier-decoded compartments. `is_public` records whether the placement is
/// known to an eavesdropper; nothing here enforces secrecy.
struct VerificationScheme {
  int total_qubits = 0;
  std::vector<VerificationBit> verification;    // ascending by index
  std::vector<std::vector<int>> compartments;   // partition of [0, total_qubits)
  bool is_public = false;

  bool is_verification(int wire) const;
  /// Intended value of a verification wire; -1 for key wires.
  int intended_bit(int wire) const;
  std::vector<int> verification_positions() const;
  std::vector<int> key_positions() const;   // ascending
  int num_key_qubits() const;
};

/// Throws std::invalid_argument when the scheme is not a well-formed placement
/// (indices out of range, duplicate verification wires, compartments not an
/// exact partition, bits outside {0,1}).
void validate(const VerificationScheme& scheme);

/// Built-in layouts. pair_* interleave one verification qubit (intended 0)
/// after each key qubit; triple_* interleave two. *_compartment decode each
/// group separately, *_flat decode the whole register as one block. The
/// *_random kinds place as many verification qubits as key qubits at
/// rng-chosen positions with rng-chosen intended values.
VerificationScheme build_scheme(SchemeKind kind, int num_key_qubits, RandomEngine& rng);

/// Register-wide bit assignment; bit t rides wire t. `value()` packs the bits
/// little-endian (bit t of the value = bits[t]).
struct Message {
  int num_qubits = 0;
  std::vector<std::uint8_t> bits;

  std::uint64_t value() const;
};

Message message_from_value(int num_qubits, std::uint64_t value);
Message message_from_bits(std::vector<std::uint8_t> bits);

/// Interleave key payload with the scheme's verification values. Key bits fill
/// the non-verification wires in ascending wire order.
Message assemble_message(std::span<const std::uint8_t> key_bits, const VerificationScheme& scheme);

/// Key payload carried by a message under the scheme (ascending wire order).
std::vector<std::uint8_t> key_bits_of(const Message& message, const VerificationScheme& scheme);

struct ExtractionResult {
  std::vector<std::uint8_t> key;
  std::vector<std::uint8_t> verification_observed;  // ascending wire order
  int mismatches = 0;
  bool pass = false;
};

/// Split a measured message into key and verification parts and compare the
/// verification part against the scheme. Passes when at most `mismatch_limit`
/// verification bits disagree.
ExtractionResult extract_key(const Message& measured, const VerificationScheme& scheme,
                             int mismatch_limit = 0);

}  // namespace qftqkd
