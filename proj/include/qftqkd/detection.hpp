#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qftqkd/scheme.hpp"

namespace qftqkd {

/// Wires an eavesdropper measured (global indices, sorted, unique).
struct EveTouchSet {
  std::vector<int> measured;

  static EveTouchSet none() { return {}; }
  static EveTouchSet of(std::vector<int> wires);

  bool contains(int wire) const;
  bool empty() const { return measured.empty(); }
  std::size_t size() const { return measured.size(); }
};

enum class Statistic { mean, min, single };
const char* to_string(Statistic statistic);

struct DetectionReport {
  double probability = 0.0;
  Statistic statistic = Statistic::single;
  std::uint64_t b_space_size = 1;    // key assignments the statistic ranges over
  bool sampled = false;
  std::uint64_t trials = 0;          // 0 when exact
  double confidence_halfwidth = 0.0; // three standard errors; 0 when exact
};

/// How to traverse the key-assignment space when aggregating.
struct BSpaceMode {
  bool sampled = false;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;

  static BSpaceMode exhaustive() { return {}; }
  static BSpaceMode sample(std::uint64_t samples, std::uint64_t seed) {
    return {true, samples, seed};
  }
};

/// Widest compartment the exact outcome enumeration accepts.
inline constexpr int kMaxCompartmentExact = 24;
/// Most key qubits the exhaustive key-space aggregation accepts (2^16 cases).
inline constexpr int kMaxExhaustiveKeyBits = 16;

/// Chance a decoded qubit still reads its intended value when its accumulated
/// phase error is theta: cos^2(theta/2).
double prob_correct_given_phase_error(double theta);

/// Phase kicked onto later qubit `target` when qubit `source` of the same
/// compartment decodes to `measured_bit` instead of `intended_bit`:
/// (intended - measured) * pi / 2^(target - source). Indices are
/// compartment-local; requires source < target.
double rotation_effect(int target, int source, int measured_bit, int intended_bit);

/// Sum of rotation effects on `target` from all earlier qubits, given the
/// earlier measured and intended bits (compartment-local, sizes >= target).
double cumulative_phase_error(int target, std::span<const std::uint8_t> measured,
                              std::span<const std::uint8_t> intended);

/// Marginal chance that qubit `target` of a compartment decodes correctly.
/// `intended` lists the compartment's intended bits in decode order and
/// `eve_local` the compartment-local indices Eve measured. A measured target
/// is an exact coin flip; otherwise all predecessor outcome histories are
/// enumerated with their cascade probabilities.
double prob_qubit_correct(int target, std::span<const std::uint8_t> intended,
                          const EveTouchSet& eve_local);

/// Joint chance that every verification qubit of one compartment decodes to
/// its intended value. `verification_mask[t]` is nonzero for verification
/// positions. Compartment-local, like `prob_qubit_correct`.
double prob_all_verification_correct(std::span<const std::uint8_t> intended,
                                     std::span<const std::uint8_t> verification_mask,
                                     const EveTouchSet& eve_local);

/// Chance at least one verification qubit misreads for a fixed register-wide
/// bit assignment. Compartments decode independently, so this is one minus the
/// product of per-compartment all-correct probabilities.
double detection_probability(const VerificationScheme& scheme,
                             std::span<const std::uint8_t> intended_bits, const EveTouchSet& eve);

/// Detection statistic over the key-assignment space (verification bits stay
/// fixed by the scheme). Exhaustive mode is exact; sampled mode draws
/// assignments from the given seed and flags the report.
DetectionReport aggregate_detection(const VerificationScheme& scheme, const EveTouchSet& eve,
                                    Statistic statistic,
                                    const BSpaceMode& mode = BSpaceMode::exhaustive());

/// Key assignment attaining the exhaustive minimum of `detection_probability`
/// (ascending key-wire order), for worst-case simulation runs.
std::vector<std::uint8_t> worst_case_key_bits(const VerificationScheme& scheme,
                                              const EveTouchSet& eve);

/// Intercept-resend detection chance for BB84: 1 - 0.75^(touched verification
/// wires).
double bb84_detection_probability(std::span<const int> verification_positions,
                                  const EveTouchSet& eve);

}  // namespace qftqkd
