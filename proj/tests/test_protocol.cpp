#include <cmath>
#include <vector>

#include "doctest.h"
#include "qftqkd/detection.hpp"
#include "qftqkd/protocol.hpp"
#include "qftqkd/rng.hpp"

using namespace qftqkd;

namespace {

bool same_transcript(const Transcript& a, const Transcript& b) {
  return a.protocol == b.protocol && a.intended_message.bits == b.intended_message.bits &&
         a.measured_message.bits == b.measured_message.bits && a.pass == b.pass &&
         a.mismatches == b.mismatches && a.key == b.key && a.key_agreed == b.key_agreed &&
         a.alice_bases == b.alice_bases && a.bob_bases == b.bob_bases;
}

ProtocolParams params_for(const VerificationScheme& scheme) {
  ProtocolParams params;
  params.scheme = scheme;
  return params;
}

double detection_rate(ProtocolId id, const ProtocolParams& params, const EveStrategy& eve,
                      int trials, std::uint64_t seed) {
  int failures = 0;
  for (int i = 0; i < trials; ++i) {
    auto rng = derive_stream(seed, static_cast<std::uint64_t>(i));
    failures += !run_protocol(id, params, eve, rng).pass;
  }
  return failures / double(trials);
}

}  // namespace

TEST_CASE("protocol names round trip") {
  CHECK(protocol_from_string("two_pass_qkd") == ProtocolId::two_pass_qkd);
  CHECK(protocol_from_string("three_pass_encryption") == ProtocolId::three_pass_encryption);
  CHECK(protocol_from_string("bb84") == ProtocolId::bb84);
  CHECK_FALSE(protocol_from_string("e91").has_value());
  CHECK(to_string(ProtocolId::bb84) == std::string("bb84"));
}

TEST_CASE("identical seeds give identical transcripts") {
  auto scheme_rng = seeded_engine(1);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 3, scheme_rng);
  const auto params = params_for(scheme);
  for (const auto id :
       {ProtocolId::two_pass_qkd, ProtocolId::three_pass_encryption, ProtocolId::bb84}) {
    auto r1 = seeded_engine(99);
    auto r2 = seeded_engine(99);
    const auto a = run_protocol(id, params, EveStrategy::full(), r1);
    const auto b = run_protocol(id, params, EveStrategy::full(), r2);
    CHECK(same_transcript(a, b));
  }
}

TEST_CASE("undisturbed runs always deliver the key") {
  auto rng = seeded_engine(5);
  for (const auto kind :
       {SchemeKind::pair_compartment, SchemeKind::triple_flat, SchemeKind::qft_random}) {
    const auto scheme = build_scheme(kind, 3, rng);
    const auto params = params_for(scheme);
    for (const auto id :
         {ProtocolId::two_pass_qkd, ProtocolId::three_pass_encryption, ProtocolId::bb84}) {
      for (int i = 0; i < 50; ++i) {
        auto run_rng = derive_stream(1000 + i, static_cast<std::uint64_t>(i));
        const auto transcript = run_protocol(id, params, EveStrategy::none(), run_rng);
        REQUIRE(transcript.pass);
        CHECK(transcript.key_agreed);
        CHECK(transcript.mismatches == 0);
        CHECK(transcript.measured_message.bits == transcript.intended_message.bits);
      }
    }
  }
}

TEST_CASE("verdict is recomputable from the measured message") {
  auto rng = seeded_engine(7);
  const auto scheme = build_scheme(SchemeKind::triple_compartment, 2, rng);
  const auto params = params_for(scheme);
  for (const auto id :
       {ProtocolId::two_pass_qkd, ProtocolId::three_pass_encryption, ProtocolId::bb84}) {
    for (int i = 0; i < 40; ++i) {
      auto run_rng = derive_stream(31, static_cast<std::uint64_t>(i));
      const auto transcript = run_protocol(id, params, EveStrategy::full(), run_rng);
      const auto extraction = extract_key(transcript.measured_message, scheme);
      CHECK(extraction.pass == transcript.pass);
      CHECK(extraction.mismatches == transcript.mismatches);
      if (transcript.pass) CHECK(extraction.key == transcript.key);
    }
  }
}

TEST_CASE("fixed keys pin the intended message") {
  auto rng = seeded_engine(3);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 3, rng);
  auto params = params_for(scheme);
  params.fixed_key_bits = std::vector<std::uint8_t>{1, 0, 1};
  auto run_rng = seeded_engine(8);
  const auto transcript =
      run_protocol(ProtocolId::two_pass_qkd, params, EveStrategy::none(), run_rng);
  CHECK(transcript.intended_message.bits == std::vector<std::uint8_t>{1, 0, 0, 0, 1, 0});
  CHECK(transcript.key == std::vector<std::uint8_t>{1, 0, 1});
}

TEST_CASE("three-pass run encrypts the caller's plaintext") {
  auto rng = seeded_engine(14);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 4, rng);
  const std::vector<std::uint8_t> plaintext = {0, 1, 1, 0};
  auto run_rng = seeded_engine(21);
  const auto transcript =
      run_three_pass_encryption(plaintext, params_for(scheme), EveStrategy::none(), run_rng);
  CHECK(transcript.pass);
  CHECK(transcript.key == plaintext);
  CHECK(transcript.protocol == ProtocolId::three_pass_encryption);
}

TEST_CASE("mismatch budget tolerates verification errors") {
  auto rng = seeded_engine(12);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  auto params = params_for(scheme);
  params.mismatch_limit = scheme.total_qubits;  // nothing can fail this
  for (int i = 0; i < 30; ++i) {
    auto run_rng = derive_stream(55, static_cast<std::uint64_t>(i));
    const auto transcript =
        run_protocol(ProtocolId::two_pass_qkd, params, EveStrategy::full(), run_rng);
    CHECK(transcript.pass);
  }
}

TEST_CASE("eavesdropping on key wires matches the analytic mean") {
  auto rng = seeded_engine(25);
  const auto scheme = build_scheme(SchemeKind::triple_compartment, 2, rng);
  const auto params = params_for(scheme);
  const auto eve = EveStrategy::keys();
  const int trials = 20000;
  const double rate = detection_rate(ProtocolId::two_pass_qkd, params, eve, trials, 303);
  const auto report = aggregate_detection(scheme, touch_set_of(eve, scheme), Statistic::mean);
  const double sigma = std::sqrt(report.probability * (1 - report.probability) / trials);
  CHECK(std::abs(rate - report.probability) < 3 * sigma + 1e-3);
}

TEST_CASE("three-pass is as detectable as two-pass") {
  auto rng = seeded_engine(26);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  const auto params = params_for(scheme);
  const int trials = 20000;
  const double rate =
      detection_rate(ProtocolId::three_pass_encryption, params, EveStrategy::keys(), trials, 404);
  const double want = 1.0 - 0.75 * 0.75;
  const double sigma = std::sqrt(want * (1 - want) / trials);
  CHECK(std::abs(rate - want) < 3 * sigma + 1e-3);
}

TEST_CASE("avoiding verification wires avoids detection but not key exposure") {
  auto rng = seeded_engine(27);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 3, rng);
  const auto params = params_for(scheme);
  const auto eve = EveStrategy::subset({0, 2, 4});  // the key wires

  // BB84 never notices key-wire interception; the phase-encoded protocol does.
  const double bb84_rate = detection_rate(ProtocolId::bb84, params, eve, 3000, 505);
  CHECK(bb84_rate == 0.0);
  const double qft_rate = detection_rate(ProtocolId::two_pass_qkd, params, eve, 3000, 505);
  CHECK(qft_rate > 0.4);
}

TEST_CASE("bb84 interception of verification wires fails at the quarter rule") {
  auto rng = seeded_engine(28);
  const auto scheme = build_scheme(SchemeKind::bb84_random, 4, rng);
  const auto params = params_for(scheme);
  const int trials = 20000;
  const double rate = detection_rate(ProtocolId::bb84, params, EveStrategy::full(), trials, 606);
  const double want = bb84_detection_probability(scheme.verification_positions(),
                                                 touch_set_of(EveStrategy::full(), scheme));
  const double sigma = std::sqrt(want * (1 - want) / trials);
  CHECK(std::abs(rate - want) < 3 * sigma + 1e-3);
}

TEST_CASE("bb84 transcripts carry matching measurement bases") {
  auto rng = seeded_engine(29);
  const auto scheme = build_scheme(SchemeKind::bb84_random, 3, rng);
  auto run_rng = seeded_engine(70);
  const auto transcript =
      run_protocol(ProtocolId::bb84, params_for(scheme), EveStrategy::none(), run_rng);
  REQUIRE(transcript.alice_bases.size() == std::size_t(scheme.total_qubits));
  CHECK(transcript.alice_bases == transcript.bob_bases);
  for (const auto basis : transcript.alice_bases) CHECK((basis == 0 || basis == 1));
}

TEST_CASE("eavesdropper observations cover the targeted wires") {
  auto rng = seeded_engine(30);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  auto run_rng = seeded_engine(71);
  const auto transcript = run_protocol(ProtocolId::two_pass_qkd, params_for(scheme),
                                       EveStrategy::subset({1, 2}), run_rng);
  REQUIRE(transcript.eve_observations.size() == 2);
  CHECK(transcript.eve_observations[0].wire == 1);
  CHECK(transcript.eve_observations[1].wire == 2);
}

TEST_CASE("first-pass interception reveals nothing about the key") {
  // In the three-pass flow the register is still scrambled during pass 1, so
  // Eve's readings are independent of the plaintext.
  auto scheme_rng = seeded_engine(31);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 1, scheme_rng);
  auto eve = EveStrategy::subset({0});
  eve.passes = {1};

  const std::vector<std::uint8_t> plaintext = {1};
  int hits = 0;
  const int trials = 20000;
  for (int i = 0; i < trials; ++i) {
    auto rng = derive_stream(808, static_cast<std::uint64_t>(i));
    const auto transcript =
        run_three_pass_encryption(plaintext, params_for(scheme), eve, rng);
    REQUIRE(transcript.eve_observations.size() == 1);
    hits += transcript.eve_observations[0].bit == 1;
  }
  CHECK(std::abs(hits / double(trials) - 0.5) < 3.0 * 0.5 / std::sqrt(double(trials)));
}
