#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qftqkd/detection.hpp"
#include "qftqkd/rng.hpp"
#include "qftqkd/scheme.hpp"
#include "qftqkd/statevector.hpp"

namespace qftqkd {

// Which wires the eavesdropper measures in flight.
enum class EveKind {
  none,     // passive channel
  full,     // every wire
  keys,     // every key wire (needs a public scheme)
  subset,   // an explicit wire list
};

const char* to_string(EveKind kind);
std::optional<EveKind> eve_kind_from_string(std::string_view text);

// How the intercepted qubit is measured and replaced. Both models leave a
// replaced wire in the maximally mixed state, so detection statistics agree;
// they differ only in the raw bits the eavesdropper records.
enum class BasisModel {
  x_basis_with_random_unscramble,  // guess the scramble phase, then measure in X
  random_zx,                       // flip a coin between the Z and X basis
};

// One intercepted wire: the bit Eve recorded when she measured it.
struct Observation {
  int wire = 0;
  int bit = 0;
};

struct EveStrategy {
  EveKind kind = EveKind::none;
  std::vector<int> indices;          // used when kind == subset
  int copies = 1;                    // identical transmissions to intercept
  BasisModel basis_model = BasisModel::x_basis_with_random_unscramble;
  std::vector<int> passes;           // which passes to tap; empty means the
                                     // protocol's default interception point

  static EveStrategy none();
  static EveStrategy full();
  static EveStrategy keys();
  static EveStrategy subset(std::vector<int> wires);

  bool taps_pass(int pass, int default_pass) const;
};

// Wires the strategy touches for a given scheme, sorted and deduplicated.
std::vector<int> resolve_targets(const EveStrategy& strategy, const VerificationScheme& scheme);

EveTouchSet touch_set_of(const EveStrategy& strategy, const VerificationScheme& scheme);

// Intercept-and-resend on the listed wires of an in-flight register. Each
// target is measured destructively and replaced by a fresh qubit whose phase
// is independent of the measurement record, which is what makes the resent
// wire maximally mixed from the receiver's point of view. Returns what Eve
// recorded, in target order.
std::vector<Observation> intercept(Statevector& sv, std::span<const int> targets,
                                   BasisModel basis_model, RandomEngine& rng);

}  // namespace qftqkd
