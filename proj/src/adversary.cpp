#include "qftqkd/adversary.hpp"

#include <algorithm>
#include <stdexcept>

namespace qftqkd {

const char* to_string(EveKind kind) {
  switch (kind) {
    case EveKind::none: return "none";
    case EveKind::full: return "full";
    case EveKind::keys: return "keys";
    case EveKind::subset: return "subset";
  }
  return "unknown";
}

std::optional<EveKind> eve_kind_from_string(std::string_view text) {
  if (text == "none") return EveKind::none;
  if (text == "full") return EveKind::full;
  if (text == "keys") return EveKind::keys;
  if (text == "subset") return EveKind::subset;
  return std::nullopt;
}

EveStrategy EveStrategy::none() { return {}; }

EveStrategy EveStrategy::full() {
  EveStrategy s;
  s.kind = EveKind::full;
  return s;
}

EveStrategy EveStrategy::keys() {
  EveStrategy s;
  s.kind = EveKind::keys;
  return s;
}

EveStrategy EveStrategy::subset(std::vector<int> wires) {
  EveStrategy s;
  s.kind = EveKind::subset;
  s.indices = std::move(wires);
  return s;
}

bool EveStrategy::taps_pass(int pass, int default_pass) const {
  if (passes.empty()) return pass == default_pass;
  return std::find(passes.begin(), passes.end(), pass) != passes.end();
}

std::vector<int> resolve_targets(const EveStrategy& strategy, const VerificationScheme& scheme) {
  std::vector<int> targets;
  switch (strategy.kind) {
    case EveKind::none:
      break;
    case EveKind::full:
      targets.resize(static_cast<std::size_t>(scheme.total_qubits));
      for (int w = 0; w < scheme.total_qubits; ++w) targets[static_cast<std::size_t>(w)] = w;
      break;
    case EveKind::keys:
      if (!scheme.is_public)
        throw std::invalid_argument("targeting key wires needs a public layout");
      targets = scheme.key_positions();
      break;
    case EveKind::subset:
      targets = strategy.indices;
      break;
  }
  for (int w : targets)
    if (w < 0 || w >= scheme.total_qubits)
      throw std::out_of_range("eavesdropping target outside the register");
  std::sort(targets.begin(), targets.end());
  targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
  return targets;
}

EveTouchSet touch_set_of(const EveStrategy& strategy, const VerificationScheme& scheme) {
  return EveTouchSet::of(resolve_targets(strategy, scheme));
}

std::vector<Observation> intercept(Statevector& sv, std::span<const int> targets,
                                   BasisModel basis_model, RandomEngine& rng) {
  std::vector<Observation> observations;
  observations.reserve(targets.size());
  for (int wire : targets) {
    int bit = 0;
    if (basis_model == BasisModel::x_basis_with_random_unscramble) {
      const double guess = uniform_angle(rng);
      apply_phase(sv, wire, -guess);
      apply_hadamard(sv, wire);
      bit = measure_qubit(sv, wire, rng);
      apply_hadamard(sv, wire);
      apply_phase(sv, wire, uniform_angle(rng));
    } else {
      const bool x_basis = uniform_bit(rng) != 0;
      if (x_basis) apply_hadamard(sv, wire);
      bit = measure_qubit(sv, wire, rng);
      if (x_basis) apply_hadamard(sv, wire);
      apply_phase(sv, wire, uniform_angle(rng));
    }
    observations.push_back({wire, bit});
  }
  return observations;
}

}  // namespace qftqkd
