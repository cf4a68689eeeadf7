#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "qftqkd/json_io.hpp"
#include "qftqkd/rng.hpp"
#include "qftqkd/scheme.hpp"

using namespace qftqkd;

namespace {

std::vector<std::uint8_t> bits(std::initializer_list<int> values) {
  return std::vector<std::uint8_t>(values.begin(), values.end());
}

}  // namespace

TEST_CASE("pair layout alternates key and verification wires") {
  auto rng = seeded_engine(0);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 3, rng);
  REQUIRE(scheme.total_qubits == 6);
  CHECK(scheme.is_public);
  CHECK(scheme.key_positions() == std::vector<int>{0, 2, 4});
  CHECK(scheme.verification_positions() == std::vector<int>{1, 3, 5});
  for (const auto& v : scheme.verification) CHECK(v.bit == 0);
  REQUIRE(scheme.compartments.size() == 3);
  CHECK(scheme.compartments[0] == std::vector<int>{0, 1});
  CHECK(scheme.compartments[1] == std::vector<int>{2, 3});
  CHECK(scheme.compartments[2] == std::vector<int>{4, 5});

  const auto flat = build_scheme(SchemeKind::pair_flat, 3, rng);
  CHECK(flat.verification_positions() == std::vector<int>{1, 3, 5});
  REQUIRE(flat.compartments.size() == 1);
  CHECK(flat.compartments[0].size() == 6);
}

TEST_CASE("triple layout carries two verification wires per key") {
  auto rng = seeded_engine(0);
  const auto scheme = build_scheme(SchemeKind::triple_flat, 2, rng);
  REQUIRE(scheme.total_qubits == 6);
  CHECK(scheme.key_positions() == std::vector<int>{0, 3});
  CHECK(scheme.verification_positions() == std::vector<int>{1, 2, 4, 5});
  REQUIRE(scheme.compartments.size() == 1);

  const auto split = build_scheme(SchemeKind::triple_compartment, 2, rng);
  REQUIRE(split.compartments.size() == 2);
  CHECK(split.compartments[0] == std::vector<int>{0, 1, 2});
  CHECK(split.compartments[1] == std::vector<int>{3, 4, 5});
}

TEST_CASE("random layouts hide the verification wires") {
  auto rng = seeded_engine(42);
  for (const auto kind : {SchemeKind::bb84_random, SchemeKind::qft_random}) {
    const auto scheme = build_scheme(kind, 4, rng);
    CHECK(scheme.total_qubits == 8);
    CHECK_FALSE(scheme.is_public);
    CHECK(scheme.verification.size() == 4);
    CHECK(scheme.num_key_qubits() == 4);
    REQUIRE(scheme.compartments.size() == 1);
    CHECK(scheme.compartments[0].size() == 8);
  }

  // Positions vary with the seed.
  auto r1 = seeded_engine(1);
  auto r2 = seeded_engine(2);
  const auto a = build_scheme(SchemeKind::qft_random, 6, r1);
  const auto b = build_scheme(SchemeKind::qft_random, 6, r2);
  CHECK(a.verification_positions() != b.verification_positions());
}

TEST_CASE("scheme validation rejects malformed layouts") {
  auto rng = seeded_engine(0);
  auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);

  auto broken = scheme;
  broken.verification.push_back({0, 0});  // duplicates a key wire as verification
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);

  broken = scheme;
  broken.compartments[0] = {0};  // wire 1 no longer covered
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);

  broken = scheme;
  broken.compartments[1].push_back(1);  // wire in two compartments
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);

  broken = scheme;
  broken.verification[0].bit = 2;
  CHECK_THROWS_AS(validate(broken), std::invalid_argument);
}

TEST_CASE("message packing is little-endian in the wire index") {
  const auto m = message_from_value(3, 5);
  CHECK(m.bits == bits({1, 0, 1}));
  CHECK(m.value() == 5);
  CHECK(message_from_bits(bits({1, 0, 1})).value() == 5);
  CHECK_THROWS_AS(message_from_value(2, 5), std::invalid_argument);
}

TEST_CASE("assembling key 101 into the pair layout") {
  auto rng = seeded_engine(0);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 3, rng);
  const auto message = assemble_message(bits({1, 0, 1}), scheme);
  CHECK(message.bits == bits({1, 0, 0, 0, 1, 0}));
}

TEST_CASE("extract_key inverts assemble_message") {
  auto rng = seeded_engine(77);
  for (const auto kind :
       {SchemeKind::pair_compartment, SchemeKind::pair_flat, SchemeKind::triple_compartment,
        SchemeKind::triple_flat, SchemeKind::qft_random, SchemeKind::bb84_random}) {
    for (int k = 1; k <= 5; ++k) {
      const auto scheme = build_scheme(kind, k, rng);
      std::vector<std::uint8_t> key(k);
      for (auto& bit : key) bit = static_cast<std::uint8_t>(uniform_bit(rng));
      const auto message = assemble_message(key, scheme);
      const auto extraction = extract_key(message, scheme);
      CHECK(extraction.pass);
      CHECK(extraction.mismatches == 0);
      CHECK(extraction.key == key);
      CHECK(key_bits_of(message, scheme) == key);
    }
  }
}

TEST_CASE("extract_key counts verification mismatches") {
  auto rng = seeded_engine(0);
  const auto scheme = build_scheme(SchemeKind::pair_compartment, 2, rng);
  auto message = assemble_message(bits({1, 1}), scheme);
  message.bits[1] ^= 1;
  message.bits[3] ^= 1;

  const auto strict = extract_key(message, scheme);
  CHECK_FALSE(strict.pass);
  CHECK(strict.mismatches == 2);
  CHECK(strict.key == bits({1, 1}));

  const auto lenient = extract_key(message, scheme, 2);
  CHECK(lenient.pass);
  CHECK(lenient.key == bits({1, 1}));
}

TEST_CASE("scheme JSON round trip preserves the layout") {
  auto rng = seeded_engine(3);
  const auto scheme = build_scheme(SchemeKind::triple_compartment, 3, rng);
  const auto doc = scheme_to_json(scheme);
  const auto back = scheme_from_json(doc);
  CHECK(back.total_qubits == scheme.total_qubits);
  CHECK(back.compartments == scheme.compartments);
  CHECK(back.is_public == scheme.is_public);
  REQUIRE(back.verification.size() == scheme.verification.size());
  for (std::size_t i = 0; i < back.verification.size(); ++i) {
    CHECK(back.verification[i].index == scheme.verification[i].index);
    CHECK(back.verification[i].bit == scheme.verification[i].bit);
  }
}

TEST_CASE("scheme JSON parsing is strict") {
  const auto good = R"({"total_qubits": 2, "verification": [{"index": 1, "bit": 0}],
                        "compartments": [[0, 1]], "public": true})"_json;
  CHECK(scheme_from_json(good).total_qubits == 2);

  auto missing = good;
  missing.erase("public");
  CHECK_THROWS_AS(scheme_from_json(missing), std::invalid_argument);

  auto extra = good;
  extra["comment"] = "nope";
  CHECK_THROWS_AS(scheme_from_json(extra), std::invalid_argument);

  auto uncovered = good;
  uncovered["compartments"] = {{0}};
  CHECK_THROWS_AS(scheme_from_json(uncovered), std::invalid_argument);
}

TEST_CASE("strategy JSON parsing is strict") {
  const auto subset = R"({"kind": "subset", "indices": [2, 0]})"_json;
  const auto strategy = strategy_from_json(subset);
  CHECK(strategy.kind == EveKind::subset);
  CHECK(strategy.indices == std::vector<int>{2, 0});

  CHECK_THROWS_AS(strategy_from_json(R"({"kind": "keys", "indices": [1]})"_json),
                  std::invalid_argument);
  CHECK_THROWS_AS(strategy_from_json(R"({"kind": "subset"})"_json), std::invalid_argument);
  CHECK_THROWS_AS(strategy_from_json(R"({"kind": "everything"})"_json), std::invalid_argument);
  CHECK_THROWS_AS(strategy_from_json(R"({"kind": "full", "passes": [4]})"_json),
                  std::invalid_argument);

  const auto copies = strategy_from_json(R"({"kind": "full", "copies": 3, "passes": [1]})"_json);
  CHECK(copies.copies == 3);
  CHECK(copies.passes == std::vector<int>{1});
}
