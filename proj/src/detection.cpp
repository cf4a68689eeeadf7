#include "qftqkd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "qftqkd/errors.hpp"
#include "qftqkd/rng.hpp"

namespace qftqkd {

EveTouchSet EveTouchSet::of(std::vector<int> wires) {
  for (int w : wires)
    if (w < 0) throw std::invalid_argument("touched wire must be non-negative");
  std::sort(wires.begin(), wires.end());
  wires.erase(std::unique(wires.begin(), wires.end()), wires.end());
  return {std::move(wires)};
}

bool EveTouchSet::contains(int wire) const {
  return std::binary_search(measured.begin(), measured.end(), wire);
}

const char* to_string(Statistic statistic) {
  switch (statistic) {
    case Statistic::mean: return "mean";
    case Statistic::min: return "min";
    case Statistic::single: return "single";
  }
  return "unknown";
}

double prob_correct_given_phase_error(double theta) {
  const double c = std::cos(0.5 * theta);
  return c * c;
}

double rotation_effect(int target, int source, int measured_bit, int intended_bit) {
  if (source < 0 || source >= target)
    throw std::invalid_argument("source must precede target in the compartment");
  if ((measured_bit | intended_bit) > 1 || measured_bit < 0 || intended_bit < 0)
    throw std::invalid_argument("bits must be 0 or 1");
  return static_cast<double>(intended_bit - measured_bit) * std::numbers::pi /
         std::ldexp(1.0, target - source);
}

double cumulative_phase_error(int target, std::span<const std::uint8_t> measured,
                              std::span<const std::uint8_t> intended) {
  if (target < 0 || static_cast<std::size_t>(target) > measured.size() ||
      static_cast<std::size_t>(target) > intended.size())
    throw std::invalid_argument("need measured and intended bits for every earlier qubit");
  double theta = 0.0;
  for (int j = 0; j < target; ++j)
    theta += rotation_effect(target, j, measured[static_cast<std::size_t>(j)],
                             intended[static_cast<std::size_t>(j)]);
  return theta;
}

namespace {

constexpr double kPi = std::numbers::pi;

// One compartment in decode order. `touched[t]` marks Eve-measured qubits.
struct CompartmentView {
  std::vector<std::uint8_t> intended;
  std::vector<std::uint8_t> is_verification;
  std::vector<std::uint8_t> touched;
  std::vector<int> wires;  // global wire of each local index

  std::size_t size() const { return intended.size(); }
};

// The decode of one compartment is a cascade: qubit t reads correctly with
// probability cos^2(theta_e/2) given the phase error theta_e accumulated from
// earlier misreads, and an Eve-measured qubit is an exact coin flip whatever
// the phase. `sigma` carries theta_e scaled by pi; stepping from qubit t to
// t+1 halves it and adds the new discrepancy d = intended - measured.
double correct_weight(bool touched, double sigma) {
  return touched ? 0.5 : prob_correct_given_phase_error(kPi * sigma);
}

// Joint probability that every verification qubit from local index t onward
// decodes to its intended value; key qubits branch over both outcomes.
double all_verification_correct_from(const CompartmentView& c, std::size_t t, double sigma) {
  if (t == c.size()) return 1.0;
  const double pc = correct_weight(c.touched[t], sigma);
  double total = 0.0;
  if (pc > 0.0) total += pc * all_verification_correct_from(c, t + 1, sigma * 0.5);
  if (!c.is_verification[t] && pc < 1.0) {
    const double d = c.intended[t] ? 1.0 : -1.0;
    total += (1.0 - pc) * all_verification_correct_from(c, t + 1, (sigma + d) * 0.5);
  }
  return total;
}

double all_verification_correct(const CompartmentView& c) {
  if (c.size() > static_cast<std::size_t>(kMaxCompartmentExact))
    throw capacity_error("compartment of " + std::to_string(c.size()) +
                         " qubits exceeds the exact-enumeration limit of " +
                         std::to_string(kMaxCompartmentExact));
  return all_verification_correct_from(c, 0, 0.0);
}

// Marginal correctness of one target: every earlier qubit branches.
double marginal_correct_from(std::span<const std::uint8_t> intended, const EveTouchSet& eve,
                             int target, int t, double sigma) {
  if (t == target) return prob_correct_given_phase_error(kPi * sigma);
  const double pc = correct_weight(eve.contains(t), sigma);
  double total = 0.0;
  if (pc > 0.0) total += pc * marginal_correct_from(intended, eve, target, t + 1, sigma * 0.5);
  if (pc < 1.0) {
    const double d = intended[static_cast<std::size_t>(t)] ? 1.0 : -1.0;
    total +=
        (1.0 - pc) * marginal_correct_from(intended, eve, target, t + 1, (sigma + d) * 0.5);
  }
  return total;
}

void check_bits(std::span<const std::uint8_t> bits) {
  for (auto b : bits)
    if (b > 1) throw std::invalid_argument("bits must be 0 or 1");
}

std::vector<CompartmentView> compartment_views(const VerificationScheme& scheme,
                                               std::span<const std::uint8_t> intended_bits,
                                               const EveTouchSet& eve) {
  std::vector<CompartmentView> views;
  views.reserve(scheme.compartments.size());
  for (const auto& group : scheme.compartments) {
    CompartmentView view;
    view.wires = group;
    for (int wire : group) {
      view.intended.push_back(intended_bits[static_cast<std::size_t>(wire)]);
      view.is_verification.push_back(scheme.is_verification(wire) ? 1 : 0);
      view.touched.push_back(eve.contains(wire) ? 1 : 0);
    }
    views.push_back(std::move(view));
  }
  return views;
}

void check_eve_range(const VerificationScheme& scheme, const EveTouchSet& eve) {
  for (int wire : eve.measured)
    if (wire < 0 || wire >= scheme.total_qubits)
      throw std::out_of_range("touched wire outside the register");
}

struct ExhaustiveAggregate {
  double mean_detection = 0.0;
  double min_detection = 0.0;
  std::vector<std::uint8_t> worst_key_bits;  // ascending key-wire order
};

// Key bits of different compartments enter detection independently, so the
// mean and the minimum over the whole key space factor into per-compartment
// sweeps: 2^(local keys) cases per compartment instead of 2^|k| overall.
ExhaustiveAggregate exhaustive_aggregate(const VerificationScheme& scheme,
                                         const EveTouchSet& eve) {
  if (scheme.num_key_qubits() > kMaxExhaustiveKeyBits)
    throw capacity_error("exhaustive key-space aggregation limited to " +
                         std::to_string(kMaxExhaustiveKeyBits) + " key qubits");
  const std::vector<std::uint8_t> zeros(static_cast<std::size_t>(scheme.total_qubits), 0);
  auto views = compartment_views(scheme, zeros, eve);
  for (auto& view : views)
    for (std::size_t t = 0; t < view.size(); ++t)
      if (view.is_verification[t])
        view.intended[t] = static_cast<std::uint8_t>(scheme.intended_bit(view.wires[t]));

  double mean_all_correct = 1.0;
  double max_all_correct = 1.0;
  std::vector<std::pair<int, std::uint8_t>> worst;  // (global wire, bit)
  for (auto& view : views) {
    std::vector<std::size_t> key_slots;
    for (std::size_t t = 0; t < view.size(); ++t)
      if (!view.is_verification[t]) key_slots.push_back(t);
    const std::uint64_t cases = 1ULL << key_slots.size();
    double sum = 0.0;
    double best = -1.0;
    std::uint64_t best_assignment = 0;
    for (std::uint64_t a = 0; a < cases; ++a) {
      for (std::size_t i = 0; i < key_slots.size(); ++i)
        view.intended[key_slots[i]] = static_cast<std::uint8_t>((a >> i) & 1ULL);
      const double p = all_verification_correct(view);
      sum += p;
      if (p > best) {
        best = p;
        best_assignment = a;
      }
    }
    mean_all_correct *= sum / static_cast<double>(cases);
    max_all_correct *= best;
    for (std::size_t i = 0; i < key_slots.size(); ++i)
      worst.emplace_back(view.wires[key_slots[i]],
                         static_cast<std::uint8_t>((best_assignment >> i) & 1ULL));
  }

  ExhaustiveAggregate result;
  result.mean_detection = 1.0 - mean_all_correct;
  result.min_detection = 1.0 - max_all_correct;
  std::sort(worst.begin(), worst.end());
  for (const auto& [wire, bit] : worst) result.worst_key_bits.push_back(bit);
  return result;
}

}  // namespace

double prob_qubit_correct(int target, std::span<const std::uint8_t> intended,
                          const EveTouchSet& eve_local) {
  if (target < 0 || static_cast<std::size_t>(target) >= intended.size())
    throw std::out_of_range("target outside the compartment");
  if (intended.size() > static_cast<std::size_t>(kMaxCompartmentExact))
    throw capacity_error("compartment exceeds the exact-enumeration limit");
  check_bits(intended);
  if (eve_local.contains(target)) return 0.5;
  return marginal_correct_from(intended, eve_local, target, 0, 0.0);
}

double prob_all_verification_correct(std::span<const std::uint8_t> intended,
                                     std::span<const std::uint8_t> verification_mask,
                                     const EveTouchSet& eve_local) {
  if (intended.size() != verification_mask.size())
    throw std::invalid_argument("intended bits and verification mask must align");
  check_bits(intended);
  CompartmentView view;
  view.intended.assign(intended.begin(), intended.end());
  for (auto m : verification_mask) view.is_verification.push_back(m ? 1 : 0);
  view.touched.assign(intended.size(), 0);
  for (std::size_t t = 0; t < intended.size(); ++t)
    view.touched[t] = eve_local.contains(static_cast<int>(t)) ? 1 : 0;
  return all_verification_correct(view);
}

double detection_probability(const VerificationScheme& scheme,
                             std::span<const std::uint8_t> intended_bits,
                             const EveTouchSet& eve) {
  validate(scheme);
  check_eve_range(scheme, eve);
  if (intended_bits.size() != static_cast<std::size_t>(scheme.total_qubits))
    throw std::invalid_argument("need one intended bit per wire");
  check_bits(intended_bits);
  double all_correct = 1.0;
  for (const auto& view : compartment_views(scheme, intended_bits, eve))
    all_correct *= all_verification_correct(view);
  return 1.0 - all_correct;
}

DetectionReport aggregate_detection(const VerificationScheme& scheme, const EveTouchSet& eve,
                                    Statistic statistic, const BSpaceMode& mode) {
  validate(scheme);
  check_eve_range(scheme, eve);
  if (statistic != Statistic::mean && statistic != Statistic::min)
    throw std::invalid_argument("aggregation needs the mean or min statistic");

  const int num_key = scheme.num_key_qubits();
  DetectionReport report;
  report.statistic = statistic;
  report.b_space_size = num_key < 64 ? (1ULL << num_key) : ~0ULL;

  if (!mode.sampled) {
    const auto aggregate = exhaustive_aggregate(scheme, eve);
    report.probability =
        statistic == Statistic::mean ? aggregate.mean_detection : aggregate.min_detection;
    return report;
  }

  if (mode.samples == 0) throw std::invalid_argument("sampled aggregation needs samples");
  auto rng = derive_stream(mode.seed, 0);
  std::vector<std::uint8_t> key(static_cast<std::size_t>(num_key));
  double sum = 0.0;
  double sum_sq = 0.0;
  double minimum = 1.0;
  for (std::uint64_t i = 0; i < mode.samples; ++i) {
    for (auto& b : key) b = static_cast<std::uint8_t>(uniform_bit(rng));
    const auto message = assemble_message(key, scheme);
    const double p = detection_probability(scheme, message.bits, eve);
    sum += p;
    sum_sq += p * p;
    minimum = std::min(minimum, p);
  }
  const double n = static_cast<double>(mode.samples);
  report.sampled = true;
  report.trials = mode.samples;
  if (statistic == Statistic::mean) {
    report.probability = sum / n;
    const double variance = std::max(0.0, sum_sq / n - report.probability * report.probability);
    report.confidence_halfwidth = 3.0 * std::sqrt(variance / n);
  } else {
    report.probability = minimum;
  }
  return report;
}

std::vector<std::uint8_t> worst_case_key_bits(const VerificationScheme& scheme,
                                              const EveTouchSet& eve) {
  validate(scheme);
  check_eve_range(scheme, eve);
  return exhaustive_aggregate(scheme, eve).worst_key_bits;
}

double bb84_detection_probability(std::span<const int> verification_positions,
                                  const EveTouchSet& eve) {
  double all_correct = 1.0;
  for (int wire : verification_positions)
    if (eve.contains(wire)) all_correct *= 0.75;
  return 1.0 - all_correct;
}

}  // namespace qftqkd
