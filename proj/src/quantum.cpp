#include "rkhm/quantum.hpp"

#include <sstream>

#include "rkhm/random.hpp"

namespace rkhm {

const char* state_kind_name(StateKind k) {
  switch (k) {
    case StateKind::Normal: return "normal";
    case StateKind::PhaseError: return "phase";
    case StateKind::AmplitudeError: return "amplitude";
    case StateKind::BothError: return "both";
  }
  return "?";
}

std::string StateFamily::label() const {
  std::ostringstream os;
  os << state_kind_name(kind);
  if (kind == StateKind::PhaseError || kind == StateKind::BothError) os << " theta=" << theta;
  if (kind == StateKind::AmplitudeError || kind == StateKind::BothError) os << " delta=" << delta;
  return os.str();
}

ComplexVector reference_state(Index m) {
  return ComplexVector::Constant(m, Complex(1.0 / std::sqrt(static_cast<double>(m)), 0.0));
}

namespace {

void apply_error(const StateFamily& family, ComplexVector& psi) {
  const Index m = psi.size();
  const Index half = m / 2;
  if (family.kind == StateKind::PhaseError || family.kind == StateKind::BothError)
    for (Index k = half; k < m; ++k) psi(k) *= std::polar(1.0, family.theta);
  if (family.kind == StateKind::AmplitudeError || family.kind == StateKind::BothError) {
    for (Index k = 0; k < m; ++k) psi(k) *= std::sqrt(k < half ? 1.0 - family.delta : 1.0 + family.delta);
    psi.normalize();
  }
}

void check_family(const StateFamily& family) {
  if (!std::isfinite(family.theta)) throw Error(ErrorCode::InvalidArgument, "phase error must be finite");
  if (!(family.delta >= 0.0 && family.delta < 1.0))
    throw Error(ErrorCode::InvalidArgument, "amplitude error must lie in [0, 1)");
}

}  // namespace

std::vector<DensityMatrix> generate_quantum_states(const StateFamily& family, Index count, Index m,
                                                   double noise_level, std::uint64_t seed) {
  if (m < 2) throw Error(ErrorCode::InvalidDimension, "quantum states need m >= 2");
  if (!(noise_level >= 0.0) || !std::isfinite(noise_level))
    throw Error(ErrorCode::InvalidArgument, "noise level must be a nonnegative number");
  check_family(family);

  ComplexVector base = reference_state(m);
  apply_error(family, base);

  auto rng = substream(seed, "quantum-states", {static_cast<std::uint64_t>(family.kind)});
  std::normal_distribution<double> normal;
  std::vector<DensityMatrix> out;
  out.reserve(static_cast<std::size_t>(count));
  const ComplexMatrix mixed = ComplexMatrix::Identity(m, m) / static_cast<double>(m);
  for (Index i = 0; i < count; ++i) {
    ComplexVector psi = base;
    if (noise_level > 0.0) {
      for (Index k = 0; k < m; ++k) {
        const double amp = std::abs(1.0 + noise_level * normal(rng));
        psi(k) *= amp * std::polar(1.0, noise_level * normal(rng));
      }
      psi.normalize();
    }
    const double p = std::min(noise_level * std::abs(noise_level > 0.0 ? normal(rng) : 0.0), 1.0);
    const ComplexMatrix rho = (1.0 - p) * (psi * psi.adjoint()) + p * mixed;
    out.emplace_back(hermitize(rho / std::real(rho.trace())));
  }
  return out;
}

Complex hilbert_schmidt(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw Error(ErrorCode::DimensionMismatch, "Hilbert-Schmidt arguments differ in shape");
  return (a.adjoint() * b).trace();
}

}  // namespace rkhm
