#pragma once

// Synthetic density matrices for the anomaly detection experiments.

#include <cstdint>
#include <string>
#include <vector>

#include "rkhm/measures.hpp"

namespace rkhm {

enum class StateKind { Normal, PhaseError, AmplitudeError, BothError };

const char* state_kind_name(StateKind k);

struct StateFamily {
  StateKind kind = StateKind::Normal;
  double theta = 0.0;  // relative phase applied to the upper half of the basis
  double delta = 0.0;  // population shift towards the lower half, in [0, 1)

  static StateFamily normal() { return {}; }
  static StateFamily phase(double theta) { return {StateKind::PhaseError, theta, 0.0}; }
  static StateFamily amplitude(double delta) { return {StateKind::AmplitudeError, 0.0, delta}; }
  static StateFamily both(double theta, double delta) { return {StateKind::BothError, theta, delta}; }

  std::string label() const;
};

/// Uniform superposition (1, ..., 1) / sqrt(m).
ComplexVector reference_state(Index m);

/// Draws `count` density matrices. Each draw starts from the reference
/// state, applies the family's systematic error, then per-draw noise of size
/// `noise_level`: Gaussian phase and amplitude jitter on every component and
/// depolarising mixing with weight min(noise_level * |N(0,1)|, 1). With
/// noise_level == 0 a Normal draw is exactly the reference pure state.
std::vector<DensityMatrix> generate_quantum_states(const StateFamily& family, Index count, Index m,
                                                   double noise_level, std::uint64_t seed);

/// <rho_1, rho_2>_HS = tr(rho_1^* rho_2).
Complex hilbert_schmidt(const ComplexMatrix& a, const ComplexMatrix& b);

}  // namespace rkhm
