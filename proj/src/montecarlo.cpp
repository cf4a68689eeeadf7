#include "qftqkd/montecarlo.hpp"

#include <cmath>
#include <stdexcept>

#include "qftqkd/rng.hpp"

namespace qftqkd {

Estimate estimate_detection(ProtocolId protocol, const ProtocolParams& params,
                            const EveStrategy& eve, const BPolicy& b_policy,
                            std::uint64_t trials, std::uint64_t seed) {
  if (trials == 0) throw std::invalid_argument("need at least one trial");
  ProtocolParams per_trial = params;
  if (b_policy.fixed_bits) per_trial.fixed_key_bits = b_policy.fixed_bits;

  std::uint64_t failures = 0;
  for (std::uint64_t i = 0; i < trials; ++i) {
    auto rng = derive_stream(seed, i);
    const auto transcript = run_protocol(protocol, per_trial, eve, rng);
    if (!transcript.pass) ++failures;
  }

  Estimate estimate;
  estimate.trials = trials;
  estimate.seed = seed;
  estimate.mean = static_cast<double>(failures) / static_cast<double>(trials);
  estimate.standard_error =
      std::sqrt(estimate.mean * (1.0 - estimate.mean) / static_cast<double>(trials));
  return estimate;
}

bool estimates_agree(double analytic, const Estimate& empirical) {
  return std::abs(analytic - empirical.mean) <= 3.0 * empirical.standard_error + 1e-3;
}

CrossValidation crossvalidate(const VerificationScheme& scheme, const EveTouchSet& eve,
                              Statistic statistic, std::uint64_t trials, std::uint64_t seed) {
  CrossValidation result;
  result.analytic = aggregate_detection(scheme, eve, statistic);

  ProtocolParams params;
  params.scheme = scheme;
  const auto strategy = EveStrategy::subset(eve.measured);
  const BPolicy policy = statistic == Statistic::min
                             ? BPolicy::fixed_keys(worst_case_key_bits(scheme, eve))
                             : BPolicy::random_keys();
  result.empirical =
      estimate_detection(ProtocolId::two_pass_qkd, params, strategy, policy, trials, seed);
  result.agree = estimates_agree(result.analytic.probability, result.empirical);
  return result;
}

}  // namespace qftqkd
