#include "qftqkd/attacks.hpp"

#include <stdexcept>

#include "qftqkd/statevector.hpp"

namespace qftqkd {

ManyCopiesBb84Result many_copies_attack_bb84(const VerificationScheme& scheme, int target_wire,
                                             int copies, RandomEngine& rng) {
  validate(scheme);
  if (target_wire < 0 || target_wire >= scheme.total_qubits)
    throw std::out_of_range("target wire outside the register");
  if (copies < 2) throw std::invalid_argument("the attack needs at least two copies");

  ManyCopiesBb84Result result;
  result.copies = copies;
  result.target_wire = target_wire;
  result.true_bit = uniform_bit(rng);
  result.true_basis = uniform_bit(rng);

  const bool target_is_verification = scheme.is_verification(target_wire);
  bool z_consistent = true;
  bool x_consistent = true;
  int z_value = -1;
  int x_value = -1;

  for (int copy = 0; copy < copies; ++copy) {
    auto sv = basis_state(1, static_cast<std::uint64_t>(result.true_bit));
    if (result.true_basis) apply_hadamard(sv, 0);

    const int eve_basis = copy % 2;  // Z on even copies, X on odd
    if (eve_basis) apply_hadamard(sv, 0);
    const int seen = measure_qubit(sv, 0, rng);
    if (eve_basis) apply_hadamard(sv, 0);
    result.eve_bases.push_back(eve_basis);
    result.eve_outcomes.push_back(seen);

    int& reference = eve_basis ? x_value : z_value;
    bool& consistent = eve_basis ? x_consistent : z_consistent;
    if (reference == -1)
      reference = seen;
    else if (reference != seen)
      consistent = false;

    // The receiver measures the resent copy in the sender's basis (the slot
    // survives sifting) and checks it if the wire is a verification wire.
    if (result.true_basis) apply_hadamard(sv, 0);
    const int bob_bit = measure_qubit(sv, 0, rng);
    result.bob_bits.push_back(bob_bit);
    if (target_is_verification && bob_bit != result.true_bit) result.detected = true;
  }

  if (z_consistent != x_consistent) {
    result.basis_identified = true;
    result.identified_basis = z_consistent ? 0 : 1;
    result.inferred_bit = z_consistent ? z_value : x_value;
  }
  return result;
}

ManyCopiesTwoPassResult many_copies_attack_two_pass(const ProtocolParams& params,
                                                    const EveStrategy& eve, int copies,
                                                    RandomEngine& rng) {
  if (copies < 1) throw std::invalid_argument("the attack needs at least one copy");
  ProtocolParams fixed = params;
  if (!fixed.fixed_key_bits) {
    std::vector<std::uint8_t> key(static_cast<std::size_t>(params.scheme.num_key_qubits()));
    for (auto& b : key) b = static_cast<std::uint8_t>(uniform_bit(rng));
    fixed.fixed_key_bits = std::move(key);
  }

  ManyCopiesTwoPassResult result;
  result.copies = copies;
  for (int copy = 0; copy < copies; ++copy) {
    const auto transcript = run_two_pass_qkd(fixed, eve, rng);
    const bool caught = !transcript.pass;
    result.per_copy_detected.push_back(caught ? 1 : 0);
    if (caught && !result.detected) {
      result.detected = true;
      result.first_detected_copy = copy;
    }
  }
  return result;
}

}  // namespace qftqkd
