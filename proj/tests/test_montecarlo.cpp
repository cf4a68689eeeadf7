#include <cmath>
#include <vector>

#include "doctest.h"
#include "qftqkd/detection.hpp"
#include "qftqkd/montecarlo.hpp"
#include "qftqkd/rng.hpp"

using namespace qftqkd;

namespace {

ProtocolParams params_for(const VerificationScheme& scheme) {
  ProtocolParams params;
  params.scheme = scheme;
  return params;
}

}  // namespace

TEST_CASE("estimates are reproducible for a fixed seed") {
  auto rng = seeded_engine(2);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  const auto a = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme),
                                    EveStrategy::keys(), BPolicy::random_keys(), 2000, 42);
  const auto b = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme),
                                    EveStrategy::keys(), BPolicy::random_keys(), 2000, 42);
  CHECK(a.mean == b.mean);
  CHECK(a.standard_error == b.standard_error);
  CHECK(a.trials == 2000);
  CHECK(a.seed == 42);

  const auto c = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme),
                                    EveStrategy::keys(), BPolicy::random_keys(), 2000, 43);
  CHECK(a.mean != c.mean);
}

TEST_CASE("standard error shrinks like the square root of the trials") {
  auto rng = seeded_engine(3);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 1, rng);
  double previous = 1.0;
  for (const std::uint64_t trials : {std::uint64_t(1000), std::uint64_t(4000),
                                     std::uint64_t(16000)}) {
    const auto estimate = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme),
                                             EveStrategy::keys(), BPolicy::random_keys(),
                                             trials, 7);
    const double expected = std::sqrt(estimate.mean * (1 - estimate.mean) / trials);
    CHECK(estimate.standard_error == doctest::Approx(expected).epsilon(1e-12));
    CHECK(estimate.standard_error < previous);
    previous = estimate.standard_error;
  }
}

TEST_CASE("agreement helper applies the three sigma band") {
  Estimate estimate;
  estimate.mean = 0.50;
  estimate.standard_error = 0.01;
  estimate.trials = 2500;
  CHECK(estimates_agree(0.52, estimate));
  CHECK(estimates_agree(0.5309, estimate));
  CHECK_FALSE(estimates_agree(0.54, estimate));
}

TEST_CASE("cross-validation agrees on mean and worst-case statistics") {
  auto rng = seeded_engine(4);
  for (const auto kind : {SchemeKind::pair_flat, SchemeKind::triple_compartment}) {
    const auto scheme = build_scheme(kind, 2, rng);
    const auto eve = EveTouchSet::of(scheme.key_positions());
    for (const auto statistic : {Statistic::mean, Statistic::min}) {
      const auto result = crossvalidate(scheme, eve, statistic, 20000, 11);
      CHECK(result.agree);
      CHECK(result.analytic.statistic == statistic);
      CHECK(std::abs(result.analytic.probability - result.empirical.mean) <
            3 * result.empirical.standard_error + 1e-3);
    }
  }
}

TEST_CASE("a perturbed analytic value is flagged") {
  auto rng = seeded_engine(5);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  const auto eve = EveTouchSet::of(scheme.key_positions());
  const auto result = crossvalidate(scheme, eve, Statistic::mean, 20000, 13);
  CHECK(result.agree);
  // The same empirical estimate cannot also match a shifted target.
  CHECK_FALSE(estimates_agree(result.analytic.probability + 0.05, result.empirical));
}

TEST_CASE("fixed worst-case keys reproduce the minimum statistic") {
  auto rng = seeded_engine(6);
  const auto scheme = build_scheme(SchemeKind::pair_flat, 3, rng);
  const auto eve = EveTouchSet::of(scheme.key_positions());
  const auto report = aggregate_detection(scheme, eve, Statistic::min);
  const auto worst = worst_case_key_bits(scheme, eve);

  const auto estimate = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme),
                                           EveStrategy::keys(), BPolicy::fixed_keys(worst),
                                           20000, 17);
  CHECK(estimates_agree(report.probability, estimate));
}

TEST_CASE("matched runs keep the phase protocol ahead of bb84") {
  auto rng = seeded_engine(7);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  const auto eve = EveStrategy::full();
  const std::uint64_t trials = 20000;

  const auto qft = estimate_detection(ProtocolId::two_pass_qkd, params_for(scheme), eve,
                                      BPolicy::random_keys(), trials, 19);
  const auto bb84 = estimate_detection(ProtocolId::bb84, params_for(scheme), eve,
                                       BPolicy::random_keys(), trials, 19);
  CHECK(qft.mean >= bb84.mean - 3 * (qft.standard_error + bb84.standard_error));
}
