#pragma once

// Random instance builders shared by the unit and acceptance tests.

#include <random>
#include <vector>

#include "rkhm/embedding.hpp"
#include "rkhm/measures.hpp"

namespace rkhm::testing {

inline ComplexMatrix random_complex(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ComplexMatrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(n(rng), n(rng));
  return m;
}

inline ComplexMatrix random_hermitian(Index dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(dim, dim, rng);
  return (a + a.adjoint()) / 2.0;
}

inline RealVector random_real(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  RealVector v(dim);
  for (Index i = 0; i < dim; ++i) v(i) = n(rng);
  return v;
}

inline ComplexVector random_unit(Index dim, std::mt19937_64& rng) {
  return random_complex(dim, 1, rng).col(0).normalized();
}

/// Mixed state of random rank <= dim.
inline DensityMatrix random_density(Index dim, std::mt19937_64& rng) {
  const ComplexMatrix a = random_complex(dim, dim, rng);
  const ComplexMatrix rho = a * a.adjoint();
  return DensityMatrix(hermitize(rho / std::real(rho.trace())));
}

inline RealMatrix random_samples(Index n, Index m, std::mt19937_64& rng) {
  std::normal_distribution<double> d;
  RealMatrix s(n, m);
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) s(i, j) = d(rng);
  return s;
}

/// A point the given kernel accepts; `point_dim` sizes real and pair points
/// for kernels that do not fix it.
inline Point random_point(const KernelSpec& k, std::mt19937_64& rng, Index point_dim = 2) {
  return std::visit(
      [&](const auto& v) -> Point {
        using V = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<V, QuantumProjective>)
          return random_unit(k.dim(), rng);
        else if constexpr (std::is_same_v<V, Elementwise>)
          return random_real(k.dim(), rng);
        else if constexpr (std::is_same_v<V, ProductScalarTimesIdentity>)
          return PointPair{random_real(point_dim, rng), random_real(point_dim, rng)};
        else
          return random_real(point_dim, rng);
      },
      k.variant());
}

inline AtomicMeasure random_measure(const KernelSpec& k, Index atoms, std::mt19937_64& rng) {
  AtomicMeasure mu(k.dim());
  for (Index i = 0; i < atoms; ++i) mu.add_atom(random_point(k, rng), random_complex(k.dim(), k.dim(), rng));
  return mu;
}

inline RKHMVector random_vector(const KernelSpec& k, Index terms, std::mt19937_64& rng) {
  return embed(k, random_measure(k, terms, rng));
}

/// One instance of every kernel variant at dimension m.
inline std::vector<KernelSpec> all_kernel_variants(Index m) {
  return {KernelSpec::diagonal(ScalarKernel::gaussian(0.7), m),
          KernelSpec::diagonal(std::vector<ScalarKernel>(static_cast<std::size_t>(m), ScalarKernel::laplacian(0.5))),
          KernelSpec::elementwise(ScalarKernel::gaussian(1.0), m),
          KernelSpec::quantum_projective(m),
          KernelSpec::product_identity(ScalarKernel::gaussian(1.0), ScalarKernel::inverse_multiquadric(1.0, 0.5), m)};
}

inline double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace rkhm::testing
