#include "qftqkd/scheme.hpp"

#include <algorithm>
#include <stdexcept>

namespace qftqkd {

const char* to_string(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::bb84_random: return "bb84_random";
    case SchemeKind::qft_random: return "qft_random";
    case SchemeKind::pair_compartment: return "pair_compartment";
    case SchemeKind::pair_flat: return "pair_flat";
    case SchemeKind::triple_compartment: return "triple_compartment";
    case SchemeKind::triple_flat: return "triple_flat";
  }
  return "unknown";
}

std::optional<SchemeKind> scheme_kind_from_string(std::string_view name) {
  for (SchemeKind kind :
       {SchemeKind::bb84_random, SchemeKind::qft_random, SchemeKind::pair_compartment,
        SchemeKind::pair_flat, SchemeKind::triple_compartment, SchemeKind::triple_flat})
    if (name == to_string(kind)) return kind;
  return std::nullopt;
}

bool VerificationScheme::is_verification(int wire) const { return intended_bit(wire) >= 0; }

int VerificationScheme::intended_bit(int wire) const {
  for (const auto& v : verification)
    if (v.index == wire) return v.bit;
  return -1;
}

std::vector<int> VerificationScheme::verification_positions() const {
  std::vector<int> positions;
  positions.reserve(verification.size());
  for (const auto& v : verification) positions.push_back(v.index);
  return positions;
}

std::vector<int> VerificationScheme::key_positions() const {
  std::vector<int> positions;
  for (int wire = 0; wire < total_qubits; ++wire)
    if (!is_verification(wire)) positions.push_back(wire);
  return positions;
}

int VerificationScheme::num_key_qubits() const {
  return total_qubits - static_cast<int>(verification.size());
}

void validate(const VerificationScheme& scheme) {
  if (scheme.total_qubits < 1) throw std::invalid_argument("scheme needs at least one qubit");
  std::vector<int> seen;
  for (const auto& v : scheme.verification) {
    if (v.index < 0 || v.index >= scheme.total_qubits)
      throw std::invalid_argument("verification index out of range");
    if (v.bit != 0 && v.bit != 1)
      throw std::invalid_argument("verification bit must be 0 or 1");
    seen.push_back(v.index);
  }
  for (std::size_t i = 1; i < scheme.verification.size(); ++i)
    if (scheme.verification[i - 1].index >= scheme.verification[i].index)
      throw std::invalid_argument("verification indices must be strictly ascending");
  std::vector<int> covered(static_cast<std::size_t>(scheme.total_qubits), 0);
  if (scheme.compartments.empty()) throw std::invalid_argument("at least one compartment required");
  for (const auto& group : scheme.compartments) {
    if (group.empty()) throw std::invalid_argument("empty compartment");
    for (int wire : group) {
      if (wire < 0 || wire >= scheme.total_qubits)
        throw std::invalid_argument("compartment wire out of range");
      if (covered[static_cast<std::size_t>(wire)]++)
        throw std::invalid_argument("wire assigned to two compartments");
    }
  }
  for (int wire = 0; wire < scheme.total_qubits; ++wire)
    if (!covered[static_cast<std::size_t>(wire)])
      throw std::invalid_argument("wire missing from every compartment");
}

namespace {

std::vector<int> ascending(int count) {
  std::vector<int> wires(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) wires[static_cast<std::size_t>(i)] = i;
  return wires;
}

// One verification qubit (or two, for stride 3) after each key qubit.
VerificationScheme interleaved(int num_key_qubits, int stride, bool split) {
  VerificationScheme scheme;
  scheme.total_qubits = stride * num_key_qubits;
  scheme.is_public = true;
  for (int g = 0; g < num_key_qubits; ++g) {
    for (int off = 1; off < stride; ++off)
      scheme.verification.push_back({g * stride + off, 0});
    if (split) {
      std::vector<int> group;
      for (int off = 0; off < stride; ++off) group.push_back(g * stride + off);
      scheme.compartments.push_back(std::move(group));
    }
  }
  if (!split) scheme.compartments.push_back(ascending(scheme.total_qubits));
  return scheme;
}

VerificationScheme random_placement(int num_key_qubits, RandomEngine& rng) {
  VerificationScheme scheme;
  scheme.total_qubits = 2 * num_key_qubits;
  scheme.is_public = false;
  std::vector<int> wires = ascending(scheme.total_qubits);
  for (int i = 0; i < num_key_qubits; ++i) {
    const auto pick =
        i + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(wires.size() - i)));
    std::swap(wires[static_cast<std::size_t>(i)], wires[static_cast<std::size_t>(pick)]);
  }
  std::vector<int> chosen(wires.begin(), wires.begin() + num_key_qubits);
  std::sort(chosen.begin(), chosen.end());
  for (int wire : chosen) scheme.verification.push_back({wire, uniform_bit(rng)});
  scheme.compartments.push_back(ascending(scheme.total_qubits));
  return scheme;
}

}  // namespace

VerificationScheme build_scheme(SchemeKind kind, int num_key_qubits, RandomEngine& rng) {
  if (num_key_qubits < 1) throw std::invalid_argument("need at least one key qubit");
  VerificationScheme scheme;
  switch (kind) {
    case SchemeKind::bb84_random:
    case SchemeKind::qft_random:
      scheme = random_placement(num_key_qubits, rng);
      break;
    case SchemeKind::pair_compartment:
      scheme = interleaved(num_key_qubits, 2, true);
      break;
    case SchemeKind::pair_flat:
      scheme = interleaved(num_key_qubits, 2, false);
      break;
    case SchemeKind::triple_compartment:
      scheme = interleaved(num_key_qubits, 3, true);
      break;
    case SchemeKind::triple_flat:
      scheme = interleaved(num_key_qubits, 3, false);
      break;
  }
  validate(scheme);
  return scheme;
}

std::uint64_t Message::value() const {
  std::uint64_t v = 0;
  for (std::size_t t = 0; t < bits.size(); ++t)
    if (bits[t]) v |= 1ULL << t;
  return v;
}

Message message_from_value(int num_qubits, std::uint64_t value) {
  if (num_qubits < 1 || num_qubits > 63) throw std::invalid_argument("bad register width");
  if (value >> num_qubits) throw std::invalid_argument("value wider than register");
  Message m;
  m.num_qubits = num_qubits;
  m.bits.resize(static_cast<std::size_t>(num_qubits));
  for (int t = 0; t < num_qubits; ++t)
    m.bits[static_cast<std::size_t>(t)] = static_cast<std::uint8_t>((value >> t) & 1ULL);
  return m;
}

Message message_from_bits(std::vector<std::uint8_t> bits) {
  Message m;
  m.num_qubits = static_cast<int>(bits.size());
  m.bits = std::move(bits);
  for (auto b : m.bits)
    if (b > 1) throw std::invalid_argument("message bits must be 0 or 1");
  return m;
}

Message assemble_message(std::span<const std::uint8_t> key_bits,
                         const VerificationScheme& scheme) {
  if (static_cast<int>(key_bits.size()) != scheme.num_key_qubits())
    throw std::invalid_argument("key payload size does not match scheme");
  Message m;
  m.num_qubits = scheme.total_qubits;
  m.bits.assign(static_cast<std::size_t>(scheme.total_qubits), 0);
  for (const auto& v : scheme.verification)
    m.bits[static_cast<std::size_t>(v.index)] = static_cast<std::uint8_t>(v.bit);
  std::size_t next = 0;
  for (int wire = 0; wire < scheme.total_qubits; ++wire)
    if (!scheme.is_verification(wire)) m.bits[static_cast<std::size_t>(wire)] = key_bits[next++];
  return m;
}

std::vector<std::uint8_t> key_bits_of(const Message& message, const VerificationScheme& scheme) {
  if (message.num_qubits != scheme.total_qubits)
    throw std::invalid_argument("message width does not match scheme");
  std::vector<std::uint8_t> key;
  for (int wire = 0; wire < scheme.total_qubits; ++wire)
    if (!scheme.is_verification(wire)) key.push_back(message.bits[static_cast<std::size_t>(wire)]);
  return key;
}

ExtractionResult extract_key(const Message& measured, const VerificationScheme& scheme,
                             int mismatch_limit) {
  if (measured.num_qubits != scheme.total_qubits)
    throw std::invalid_argument("message width does not match scheme");
  if (mismatch_limit < 0) throw std::invalid_argument("mismatch limit must be non-negative");
  ExtractionResult result;
  result.key = key_bits_of(measured, scheme);
  for (const auto& v : scheme.verification) {
    const auto observed = measured.bits[static_cast<std::size_t>(v.index)];
    result.verification_observed.push_back(observed);
    if (observed != v.bit) ++result.mismatches;
  }
  result.pass = result.mismatches <= mismatch_limit;
  return result;
}

}  // namespace qftqkd
