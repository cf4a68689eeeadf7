#pragma once

#include <Eigen/Core>

#include <array>
#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "qftqkd/errors.hpp"
#include "qftqkd/rng.hpp"

namespace qftqkd {

/// Dense state of a register of `num_qubits` wires.
///
/// Amplitude layout: reading the basis index in binary, most significant bit
/// first, gives the wire values in wire order: wire 0 is the slow (most
/// significant) bit, wire p-1 the fast bit. H on wire 1 of |00> therefore
/// yields amplitudes [1/sqrt2, 1/sqrt2, 0, 0].
///
/// Outcome integers use the opposite packing: bit t of an outcome is the value
/// measured on wire t, so the register value m decoded from wire t carrying
/// bit t of m reads back as m itself. `index_from_outcome` converts.
///
/// Gate functions mutate the state in place and return it for chaining; copy
/// the value first to keep the original. Distinct instances are safe to use
/// from different threads.
template <typename Scalar>
struct StatevectorT {
  using Complex = std::complex<Scalar>;
  using AmplitudeVector = Eigen::Vector<Complex, Eigen::Dynamic>;

  int num_qubits = 0;
  AmplitudeVector amplitudes;

  Eigen::Index size() const { return amplitudes.size(); }
};

using Statevector = StatevectorT<double>;

/// Widest register the dense representation accepts (2^24 amplitudes).
inline constexpr int kMaxQubits = 24;

namespace detail {

inline void check_qubit_count(int num_qubits) {
  if (num_qubits < 1) throw std::invalid_argument("register needs at least one qubit");
  if (num_qubits > kMaxQubits)
    throw capacity_error("register of " + std::to_string(num_qubits) + " qubits exceeds the " +
                         std::to_string(kMaxQubits) + "-qubit dense limit");
}

inline void check_wire(int num_qubits, int wire) {
  if (wire < 0 || wire >= num_qubits) throw std::out_of_range("wire index out of range");
}

}  // namespace detail

/// Position of wire `wire` within a basis index (wire 0 is the top bit).
inline int index_bit_of_wire(int num_qubits, int wire) { return num_qubits - 1 - wire; }

/// Basis index holding outcome m (outcome bit t = wire t's value).
inline std::uint64_t index_from_outcome(int num_qubits, std::uint64_t outcome) {
  std::uint64_t index = 0;
  for (int t = 0; t < num_qubits; ++t)
    if ((outcome >> t) & 1ULL) index |= 1ULL << index_bit_of_wire(num_qubits, t);
  return index;
}

inline std::uint64_t outcome_from_index(int num_qubits, std::uint64_t index) {
  std::uint64_t outcome = 0;
  for (int t = 0; t < num_qubits; ++t)
    if ((index >> index_bit_of_wire(num_qubits, t)) & 1ULL) outcome |= 1ULL << t;
  return outcome;
}

/// |+>^p, the uniform superposition every protocol starts from.
template <typename Scalar = double>
StatevectorT<Scalar> plus_state(int num_qubits) {
  detail::check_qubit_count(num_qubits);
  StatevectorT<Scalar> sv;
  sv.num_qubits = num_qubits;
  sv.amplitudes.setConstant(Eigen::Index(1) << num_qubits,
                            typename StatevectorT<Scalar>::Complex(
                                std::pow(Scalar(2), Scalar(-0.5) * Scalar(num_qubits)), 0));
  return sv;
}

/// Computational basis state |m> in outcome packing.
template <typename Scalar = double>
StatevectorT<Scalar> basis_state(int num_qubits, std::uint64_t outcome) {
  detail::check_qubit_count(num_qubits);
  if (outcome >> num_qubits) throw std::out_of_range("outcome wider than register");
  StatevectorT<Scalar> sv;
  sv.num_qubits = num_qubits;
  sv.amplitudes.setZero(Eigen::Index(1) << num_qubits);
  sv.amplitudes[static_cast<Eigen::Index>(index_from_outcome(num_qubits, outcome))] = 1;
  return sv;
}

/// Z^angle on one wire: |1> picks up e^{i*angle}.
template <typename Scalar>
StatevectorT<Scalar>& apply_phase(StatevectorT<Scalar>& sv, int wire, double angle) {
  detail::check_wire(sv.num_qubits, wire);
  const auto phase = std::polar(Scalar(1), static_cast<Scalar>(angle));
  const Eigen::Index half = Eigen::Index(1) << index_bit_of_wire(sv.num_qubits, wire);
  auto* amp = sv.amplitudes.data();
  for (Eigen::Index base = half; base < sv.size(); base += 2 * half)
    for (Eigen::Index j = 0; j < half; ++j) amp[base + j] *= phase;
  return sv;
}

template <typename Scalar>
StatevectorT<Scalar>& apply_hadamard(StatevectorT<Scalar>& sv, int wire) {
  detail::check_wire(sv.num_qubits, wire);
  const Scalar r = std::numbers::sqrt2_v<Scalar> / 2;
  const Eigen::Index half = Eigen::Index(1) << index_bit_of_wire(sv.num_qubits, wire);
  auto* amp = sv.amplitudes.data();
  for (Eigen::Index base = 0; base < sv.size(); base += 2 * half)
    for (Eigen::Index j = 0; j < half; ++j) {
      const auto a0 = amp[base + j];
      const auto a1 = amp[base + half + j];
      amp[base + j] = (a0 + a1) * r;
      amp[base + half + j] = (a0 - a1) * r;
    }
  return sv;
}

/// Diagonal two-qubit gate: e^{i*angle} on |11> of (control, target).
template <typename Scalar>
StatevectorT<Scalar>& apply_controlled_phase(StatevectorT<Scalar>& sv, int control, int target,
                                             double angle) {
  detail::check_wire(sv.num_qubits, control);
  detail::check_wire(sv.num_qubits, target);
  if (control == target) throw std::invalid_argument("control and target must differ");
  const auto phase = std::polar(Scalar(1), static_cast<Scalar>(angle));
  const std::uint64_t mask = (1ULL << index_bit_of_wire(sv.num_qubits, control)) |
                             (1ULL << index_bit_of_wire(sv.num_qubits, target));
  auto* amp = sv.amplitudes.data();
  for (Eigen::Index n = 0; n < sv.size(); ++n)
    if ((static_cast<std::uint64_t>(n) & mask) == mask) amp[n] *= phase;
  return sv;
}

/// Diagonal phase layer, one angle per wire, applied in a single sweep. The
/// per-index factor is the product of the set bits' phases, looked up from
/// precomputed 8-bit chunk tables so large registers pay one pass instead of
/// one pass per wire.
template <typename Scalar>
StatevectorT<Scalar>& apply_phases(StatevectorT<Scalar>& sv, std::span<const double> angles) {
  if (static_cast<int>(angles.size()) != sv.num_qubits)
    throw std::invalid_argument("one phase angle per wire required");
  using Complex = typename StatevectorT<Scalar>::Complex;
  const int p = sv.num_qubits;
  const int chunks = (p + 7) / 8;
  std::vector<std::array<Complex, 256>> tables(static_cast<std::size_t>(chunks));
  for (int c = 0; c < chunks; ++c) {
    auto& table = tables[static_cast<std::size_t>(c)];
    table[0] = Complex(1, 0);
    const int width = std::min(8, p - 8 * c);
    std::array<Complex, 8> unit{};
    for (int j = 0; j < width; ++j) {
      const int wire = p - 1 - (8 * c + j);  // index bit 8c+j belongs here
      unit[static_cast<std::size_t>(j)] =
          std::polar(Scalar(1), static_cast<Scalar>(angles[static_cast<std::size_t>(wire)]));
    }
    for (int v = 1; v < (1 << width); ++v) {
      const auto low = static_cast<unsigned>(v & -v);
      table[static_cast<std::size_t>(v)] =
          table[static_cast<std::size_t>(v) ^ low] * unit[std::countr_zero(low)];
    }
  }
  auto* amp = sv.amplitudes.data();
  const Eigen::Index n = sv.size();
  if (chunks == 1) {
    const auto& t0 = tables[0];
    for (Eigen::Index i = 0; i < n; ++i) amp[i] *= t0[static_cast<std::size_t>(i)];
  } else if (chunks == 2) {
    const auto& t0 = tables[0];
    const auto& t1 = tables[1];
    for (Eigen::Index i = 0; i < n; ++i)
      amp[i] *= t0[static_cast<std::size_t>(i & 255)] * t1[static_cast<std::size_t>(i >> 8)];
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      Complex factor = tables[0][static_cast<std::size_t>(i & 255)];
      for (int c = 1; c < chunks; ++c)
        factor *= tables[static_cast<std::size_t>(c)][static_cast<std::size_t>((i >> (8 * c)) & 255)];
      amp[i] *= factor;
    }
  }
  return sv;
}

/// Per-wire phase layer: wire t gets sign * angles[t]. sign = -1 undoes a
/// previous layer exactly.
template <typename Scalar>
StatevectorT<Scalar>& apply_scramble(StatevectorT<Scalar>& sv, std::span<const double> angles,
                                     int sign = 1) {
  if (static_cast<int>(angles.size()) != sv.num_qubits)
    throw std::invalid_argument("one scramble angle per wire required");
  if (sign == 1) return apply_phases(sv, angles);
  std::vector<double> scaled(angles.begin(), angles.end());
  for (auto& a : scaled) a *= sign;
  return apply_phases(sv, scaled);
}

/// Phase the t-th wire of a Fourier-encoded group carries for value m:
/// pi * m / 2^t, reduced mod 2*pi exactly via m mod 2^{t+1}.
inline double encode_phase_angle(std::uint64_t m, std::size_t t) {
  const std::uint64_t reduced = m & ((2ULL << t) - 1);
  return std::numbers::pi * static_cast<double>(reduced) / static_cast<double>(1ULL << t);
}

/// Fourier-encode value `m` across the listed wires: wire wires[t] carries bit
/// t of m as the phase pi * m / 2^t.
template <typename Scalar>
StatevectorT<Scalar>& apply_encode_on(StatevectorT<Scalar>& sv, std::span<const int> wires,
                                      std::uint64_t m) {
  for (std::size_t t = 0; t < wires.size(); ++t)
    apply_phase(sv, wires[t], encode_phase_angle(m, t));
  return sv;
}

template <typename Scalar>
StatevectorT<Scalar>& apply_encode(StatevectorT<Scalar>& sv, std::uint64_t m) {
  if (sv.num_qubits < 64 && (m >> sv.num_qubits) != 0)
    throw std::out_of_range("message wider than register");
  std::vector<int> wires(static_cast<std::size_t>(sv.num_qubits));
  for (int t = 0; t < sv.num_qubits; ++t) wires[static_cast<std::size_t>(t)] = t;
  return apply_encode_on<Scalar>(sv, wires, m);
}

namespace detail {

// Whole-register inverse QFT. For each target t the incoming controlled
// phases are fused into one diagonal pass: indices sharing their top t bits
// form contiguous blocks, and the accumulated angle -pi*sigma is constant per
// block, so one complex exponential per block suffices. sigma is tracked
// incrementally across blocks in exact dyadic steps.
template <typename Scalar>
void inverse_qft_full(StatevectorT<Scalar>& sv) {
  using Complex = typename StatevectorT<Scalar>::Complex;
  const Scalar r = std::numbers::sqrt2_v<Scalar> / 2;
  const int p = sv.num_qubits;
  auto* amp = sv.amplitudes.data();
  for (int t = 0; t < p; ++t) {
    const Eigen::Index block = Eigen::Index(1) << (p - t);
    const Eigen::Index half = block / 2;
    double sigma = 0.0;  // sum over set predecessor wires j of 2^{j-t}
    for (Eigen::Index b = 0; b < (Eigen::Index(1) << t); ++b) {
      const Complex omega =
          std::polar(Scalar(1), static_cast<Scalar>(-std::numbers::pi * sigma));
      const Eigen::Index base = b * block;
      for (Eigen::Index j = 0; j < half; ++j) {
        const Complex a0 = amp[base + j];
        const Complex a1 = omega * amp[base + half + j];
        amp[base + j] = (a0 + a1) * r;
        amp[base + half + j] = (a0 - a1) * r;
      }
      const int ones = std::countr_one(static_cast<std::uint64_t>(b));
      sigma += 3.0 * std::ldexp(1.0, -ones - 1) - 1.0;
    }
  }
}

}  // namespace detail

/// Inverse QFT over the listed wires (in the listed order), leaving other
/// wires untouched. Matches `apply_encode_on`: encode then inverse QFT on the
/// same wire list turns |+...+> into the basis state for m. No terminal swaps;
/// wire wires[t] reads out bit t.
template <typename Scalar>
StatevectorT<Scalar>& apply_inverse_qft_on(StatevectorT<Scalar>& sv, std::span<const int> wires) {
  const int s = static_cast<int>(wires.size());
  bool full_ascending = (s == sv.num_qubits);
  for (int t = 0; full_ascending && t < s; ++t) full_ascending = (wires[t] == t);
  if (full_ascending) {
    detail::inverse_qft_full(sv);
    return sv;
  }
  for (int t = 0; t < s; ++t) {
    for (int j = 0; j < t; ++j)
      apply_controlled_phase(sv, wires[j], wires[t], -std::numbers::pi / std::ldexp(1.0, t - j));
    apply_hadamard(sv, wires[t]);
  }
  return sv;
}

template <typename Scalar>
StatevectorT<Scalar>& apply_inverse_qft(StatevectorT<Scalar>& sv) {
  std::vector<int> wires(static_cast<std::size_t>(sv.num_qubits));
  for (int t = 0; t < sv.num_qubits; ++t) wires[static_cast<std::size_t>(t)] = t;
  return apply_inverse_qft_on<Scalar>(sv, wires);
}

/// Adjoint of `apply_inverse_qft_on`; applying both in either order is the
/// identity up to rounding.
template <typename Scalar>
StatevectorT<Scalar>& apply_qft_on(StatevectorT<Scalar>& sv, std::span<const int> wires) {
  const int s = static_cast<int>(wires.size());
  for (int t = s - 1; t >= 0; --t) {
    apply_hadamard(sv, wires[t]);
    for (int j = t - 1; j >= 0; --j)
      apply_controlled_phase(sv, wires[j], wires[t], std::numbers::pi / std::ldexp(1.0, t - j));
  }
  return sv;
}

template <typename Scalar>
StatevectorT<Scalar>& apply_qft(StatevectorT<Scalar>& sv) {
  std::vector<int> wires(static_cast<std::size_t>(sv.num_qubits));
  for (int t = 0; t < sv.num_qubits; ++t) wires[static_cast<std::size_t>(t)] = t;
  return apply_qft_on<Scalar>(sv, wires);
}

template <typename Scalar>
Scalar squared_norm(const StatevectorT<Scalar>& sv) {
  return sv.amplitudes.squaredNorm();
}

template <typename Scalar>
bool is_normalized(const StatevectorT<Scalar>& sv, Scalar tolerance = Scalar(1e-9)) {
  return std::abs(squared_norm(sv) - Scalar(1)) <= tolerance;
}

template <typename Scalar>
Scalar probability_of_outcome(const StatevectorT<Scalar>& sv, std::uint64_t outcome) {
  const auto index = static_cast<Eigen::Index>(index_from_outcome(sv.num_qubits, outcome));
  return std::norm(sv.amplitudes[index]);
}

/// Probability that measuring `wire` yields `bit`.
template <typename Scalar>
Scalar marginal_probability(const StatevectorT<Scalar>& sv, int wire, int bit) {
  detail::check_wire(sv.num_qubits, wire);
  const Eigen::Index half = Eigen::Index(1) << index_bit_of_wire(sv.num_qubits, wire);
  const auto* amp = sv.amplitudes.data();
  Scalar p1 = 0;
  for (Eigen::Index base = half; base < sv.size(); base += 2 * half)
    for (Eigen::Index j = 0; j < half; ++j) p1 += std::norm(amp[base + j]);
  return bit ? p1 : Scalar(1) - p1;
}

namespace detail {

// Gate roundoff and large summations drift the norm by O(size * epsilon), so
// measurements tolerate a loose bound and sample against the computed total
// rather than assuming it is exactly 1.
template <typename Scalar>
void check_norm(Scalar total) {
  if (std::abs(total - Scalar(1)) > Scalar(1e-6))
    throw std::domain_error("state norm drifted beyond tolerance; refusing to measure");
}

}  // namespace detail

/// Projective measurement of the whole register. Collapses the state to the
/// sampled basis state and returns the outcome (bit t = wire t).
template <typename Scalar>
std::uint64_t measure_all(StatevectorT<Scalar>& sv, RandomEngine& rng) {
  const Scalar total = squared_norm(sv);
  detail::check_norm(total);
  const Scalar u = static_cast<Scalar>(uniform_double(rng)) * total;
  auto* amp = sv.amplitudes.data();
  Scalar cumulative = 0;
  Eigen::Index sampled = sv.size() - 1;
  for (Eigen::Index n = 0; n < sv.size(); ++n) {
    cumulative += std::norm(amp[n]);
    if (u < cumulative) {
      sampled = n;
      break;
    }
  }
  sv.amplitudes.setZero();
  sv.amplitudes[sampled] = 1;
  return outcome_from_index(sv.num_qubits, static_cast<std::uint64_t>(sampled));
}

/// Projective measurement of one wire; collapses and renormalizes in place.
template <typename Scalar>
int measure_qubit(StatevectorT<Scalar>& sv, int wire, RandomEngine& rng) {
  detail::check_wire(sv.num_qubits, wire);
  const Eigen::Index half = Eigen::Index(1) << index_bit_of_wire(sv.num_qubits, wire);
  auto* amp = sv.amplitudes.data();
  Scalar p0 = 0;
  Scalar p1 = 0;
  for (Eigen::Index base = 0; base < sv.size(); base += 2 * half) {
    for (Eigen::Index j = 0; j < half; ++j) {
      p0 += std::norm(amp[base + j]);
      p1 += std::norm(amp[base + half + j]);
    }
  }
  detail::check_norm(p0 + p1);
  const int bit = static_cast<Scalar>(uniform_double(rng)) * (p0 + p1) < p1 ? 1 : 0;
  const Scalar rescale = Scalar(1) / std::sqrt(bit ? p1 : p0);
  for (Eigen::Index base = 0; base < sv.size(); base += 2 * half) {
    const Eigen::Index zero_side = base + (bit ? 0 : half);
    const Eigen::Index keep_side = base + (bit ? half : 0);
    for (Eigen::Index j = 0; j < half; ++j) {
      amp[zero_side + j] = 0;
      amp[keep_side + j] *= rescale;
    }
  }
  return bit;
}

/// Fresh uniform scramble angles, one per wire, each in [0, 2*pi).
inline std::vector<double> random_phases(int num_qubits, RandomEngine& rng) {
  std::vector<double> angles(static_cast<std::size_t>(num_qubits));
  for (auto& a : angles) a = uniform_angle(rng);
  return angles;
}

}  // namespace qftqkd
