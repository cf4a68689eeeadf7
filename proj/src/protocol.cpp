#include "qftqkd/protocol.hpp"

#include <stdexcept>

#include "qftqkd/statevector.hpp"

namespace qftqkd {

const char* to_string(ProtocolId id) {
  switch (id) {
    case ProtocolId::two_pass_qkd: return "two_pass_qkd";
    case ProtocolId::three_pass_encryption: return "three_pass_encryption";
    case ProtocolId::bb84: return "bb84";
  }
  return "unknown";
}

std::optional<ProtocolId> protocol_from_string(std::string_view text) {
  if (text == "two_pass_qkd") return ProtocolId::two_pass_qkd;
  if (text == "three_pass_encryption") return ProtocolId::three_pass_encryption;
  if (text == "bb84") return ProtocolId::bb84;
  return std::nullopt;
}

int default_eve_pass(ProtocolId id) {
  switch (id) {
    case ProtocolId::two_pass_qkd: return 2;
    case ProtocolId::three_pass_encryption: return 2;
    case ProtocolId::bb84: return 1;
  }
  return 1;
}

namespace {

std::vector<std::uint8_t> draw_key_bits(const ProtocolParams& params, RandomEngine& rng) {
  const auto expected = static_cast<std::size_t>(params.scheme.num_key_qubits());
  if (params.fixed_key_bits) {
    if (params.fixed_key_bits->size() != expected)
      throw std::invalid_argument("fixed key bits must cover every key wire");
    return *params.fixed_key_bits;
  }
  std::vector<std::uint8_t> bits(expected);
  for (auto& b : bits) b = static_cast<std::uint8_t>(uniform_bit(rng));
  return bits;
}

// Each compartment is its own Fourier-basis register: the message restricted
// to its wires is encoded and decoded there, independent of other
// compartments. All compartments' phases land in one diagonal sweep.
void encode_register(Statevector& sv, const VerificationScheme& scheme, const Message& m) {
  std::vector<double> angles(static_cast<std::size_t>(scheme.total_qubits), 0.0);
  for (const auto& group : scheme.compartments) {
    std::uint64_t local = 0;
    for (std::size_t i = 0; i < group.size(); ++i)
      if (m.bits[static_cast<std::size_t>(group[i])]) local |= 1ULL << i;
    for (std::size_t t = 0; t < group.size(); ++t)
      angles[static_cast<std::size_t>(group[t])] = encode_phase_angle(local, t);
  }
  apply_phases(sv, angles);
}

void decode_register(Statevector& sv, const VerificationScheme& scheme) {
  for (const auto& group : scheme.compartments) apply_inverse_qft_on(sv, group);
}

void maybe_intercept(Statevector& sv, const EveStrategy& eve, const VerificationScheme& scheme,
                     int pass, int default_pass, RandomEngine& rng,
                     std::vector<Observation>& observations) {
  if (eve.kind == EveKind::none || !eve.taps_pass(pass, default_pass)) return;
  const auto targets = resolve_targets(eve, scheme);
  auto seen = intercept(sv, targets, eve.basis_model, rng);
  observations.insert(observations.end(), seen.begin(), seen.end());
}

Transcript finish_run(ProtocolId id, const Message& intended, const Message& measured,
                          const ProtocolParams& params, std::vector<Observation> observations) {
  Transcript t;
  t.protocol = id;
  t.intended_message = intended;
  t.measured_message = measured;
  const auto extraction = extract_key(measured, params.scheme, params.mismatch_limit);
  t.pass = extraction.pass;
  t.mismatches = extraction.mismatches;
  if (t.pass) {
    t.key = extraction.key;
    t.key_agreed = extraction.key == key_bits_of(intended, params.scheme);
  }
  t.eve_observations = std::move(observations);
  return t;
}

}  // namespace

Transcript run_two_pass_qkd(const ProtocolParams& params, const EveStrategy& eve,
                            RandomEngine& rng) {
  validate(params.scheme);
  const auto key_bits = draw_key_bits(params, rng);
  const Message intended = assemble_message(key_bits, params.scheme);

  auto sv = plus_state(params.scheme.total_qubits);
  const auto theta = random_phases(params.scheme.total_qubits, rng);
  apply_scramble(sv, theta, +1);

  std::vector<Observation> observations;
  const int fallback = default_eve_pass(ProtocolId::two_pass_qkd);
  maybe_intercept(sv, eve, params.scheme, 1, fallback, rng, observations);
  encode_register(sv, params.scheme, intended);
  maybe_intercept(sv, eve, params.scheme, 2, fallback, rng, observations);

  apply_scramble(sv, theta, -1);
  decode_register(sv, params.scheme);
  const Message measured = message_from_value(params.scheme.total_qubits, measure_all(sv, rng));

  return finish_run(ProtocolId::two_pass_qkd, intended, measured, params,
                        std::move(observations));
}

Transcript run_three_pass_encryption(std::span<const std::uint8_t> plaintext_key_bits,
                                     const ProtocolParams& params, const EveStrategy& eve,
                                     RandomEngine& rng) {
  validate(params.scheme);
  const Message plaintext = assemble_message(plaintext_key_bits, params.scheme);

  auto sv = plus_state(params.scheme.total_qubits);
  encode_register(sv, params.scheme, plaintext);
  const auto theta = random_phases(params.scheme.total_qubits, rng);
  apply_scramble(sv, theta, +1);

  std::vector<Observation> observations;
  const int fallback = default_eve_pass(ProtocolId::three_pass_encryption);
  maybe_intercept(sv, eve, params.scheme, 1, fallback, rng, observations);

  const auto phi = random_phases(params.scheme.total_qubits, rng);
  apply_scramble(sv, phi, +1);
  maybe_intercept(sv, eve, params.scheme, 2, fallback, rng, observations);

  apply_scramble(sv, theta, -1);
  maybe_intercept(sv, eve, params.scheme, 3, fallback, rng, observations);

  apply_scramble(sv, phi, -1);
  decode_register(sv, params.scheme);
  const Message measured = message_from_value(params.scheme.total_qubits, measure_all(sv, rng));

  return finish_run(ProtocolId::three_pass_encryption, plaintext, measured, params,
                        std::move(observations));
}

Transcript run_bb84(const ProtocolParams& params, const EveStrategy& eve, RandomEngine& rng) {
  validate(params.scheme);
  const int p = params.scheme.total_qubits;
  const auto key_bits = draw_key_bits(params, rng);
  const Message intended = assemble_message(key_bits, params.scheme);

  Message measured;
  measured.num_qubits = p;
  measured.bits.resize(static_cast<std::size_t>(p));
  std::vector<std::uint8_t> alice_bases(static_cast<std::size_t>(p));
  std::vector<std::uint8_t> bob_bases(static_cast<std::size_t>(p));
  std::vector<Observation> observations;

  const bool eve_active =
      eve.kind != EveKind::none && eve.taps_pass(1, default_eve_pass(ProtocolId::bb84));
  const EveTouchSet touched = eve_active ? touch_set_of(eve, params.scheme) : EveTouchSet::none();

  for (int w = 0; w < p; ++w) {
    const std::uint8_t alice_bit = intended.bits[static_cast<std::size_t>(w)];
    const auto alice_basis = static_cast<std::uint8_t>(uniform_bit(rng));
    alice_bases[static_cast<std::size_t>(w)] = alice_basis;
    const bool eve_here = eve_active && touched.contains(w);

    // Retransmit the same bit in the same basis until the bases match at the
    // sifting step; the eavesdropper sees every attempt.
    while (true) {
      auto sv = basis_state(1, alice_bit);
      if (alice_basis) apply_hadamard(sv, 0);

      if (eve_here) {
        const bool eve_x = uniform_bit(rng) != 0;
        if (eve_x) apply_hadamard(sv, 0);
        const int seen = measure_qubit(sv, 0, rng);
        if (eve_x) apply_hadamard(sv, 0);
        observations.push_back({w, seen});
      }

      const auto bob_basis = static_cast<std::uint8_t>(uniform_bit(rng));
      if (bob_basis) apply_hadamard(sv, 0);
      const int bob_bit = measure_qubit(sv, 0, rng);
      if (bob_basis != alice_basis) continue;

      bob_bases[static_cast<std::size_t>(w)] = bob_basis;
      measured.bits[static_cast<std::size_t>(w)] = static_cast<std::uint8_t>(bob_bit);
      break;
    }
  }

  Transcript t =
      finish_run(ProtocolId::bb84, intended, measured, params, std::move(observations));
  t.alice_bases = std::move(alice_bases);
  t.bob_bases = std::move(bob_bases);
  return t;
}

Transcript run_protocol(ProtocolId id, const ProtocolParams& params, const EveStrategy& eve,
                        RandomEngine& rng) {
  switch (id) {
    case ProtocolId::two_pass_qkd:
      return run_two_pass_qkd(params, eve, rng);
    case ProtocolId::three_pass_encryption: {
      const auto key_bits = draw_key_bits(params, rng);
      return run_three_pass_encryption(key_bits, params, eve, rng);
    }
    case ProtocolId::bb84:
      return run_bb84(params, eve, rng);
  }
  throw std::invalid_argument("unknown protocol");
}

}  // namespace qftqkd
