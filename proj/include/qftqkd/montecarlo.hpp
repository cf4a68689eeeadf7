#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qftqkd/detection.hpp"
#include "qftqkd/protocol.hpp"

namespace qftqkd {

struct Estimate {
  double mean = 0.0;
  double standard_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

// Key-bit policy per trial: fresh coin flips, or one fixed assignment.
struct BPolicy {
  std::optional<std::vector<std::uint8_t>> fixed_bits;

  static BPolicy random_keys() { return {}; }
  static BPolicy fixed_keys(std::vector<std::uint8_t> bits) { return {std::move(bits)}; }
};

// Fraction of runs whose verification check failed. Each trial runs on its own
// RNG stream derived from (seed, trial index), so the result only depends on
// the seed and trial count.
Estimate estimate_detection(ProtocolId protocol, const ProtocolParams& params,
                            const EveStrategy& eve, const BPolicy& b_policy,
                            std::uint64_t trials, std::uint64_t seed);

// Whether an exact value sits within the estimate's noise band
// (three standard errors plus a small absolute slack).
bool estimates_agree(double analytic, const Estimate& empirical);

struct CrossValidation {
  DetectionReport analytic;
  Estimate empirical;
  bool agree = false;
};

// Pits the analytic detection statistic against a two-pass simulation of the
// same configuration: mean uses fresh key bits per trial, min pins the key
// bits to the analytic worst case.
CrossValidation crossvalidate(const VerificationScheme& scheme, const EveTouchSet& eve,
                              Statistic statistic, std::uint64_t trials, std::uint64_t seed);

}  // namespace qftqkd
