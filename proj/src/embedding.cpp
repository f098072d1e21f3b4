#include "rkhm/embedding.hpp"

#include "rkhm/parallel.hpp"

namespace rkhm {

namespace {

void check_coeff(const ComplexMatrix& c, Index m) {
  if (c.rows() != m || c.cols() != m) throw Error(ErrorCode::DimensionMismatch, "coefficients must be m x m");
}

void require_same_kernel(const RKHMVector& u, const RKHMVector& v) {
  if (!(u.kernel() == v.kernel()))
    throw Error(ErrorCode::KernelMismatch, "vectors live in RKHMs of different kernels");
}

}  // namespace

RKHMVector::RKHMVector(KernelSpec kernel) : kernel_(std::move(kernel)) {}

RKHMVector::RKHMVector(KernelSpec kernel, std::vector<Term> terms)
    : kernel_(std::move(kernel)), terms_(std::move(terms)) {
  for (const auto& t : terms_) {
    kernel_.check_point(t.point);
    check_coeff(t.coeff, kernel_.dim());
    if (t.point.index() != terms_.front().point.index())
      throw Error(ErrorCode::PointKindMismatch, "terms mix point kinds");
  }
}

RKHMVector operator+(const RKHMVector& u, const RKHMVector& v) {
  require_same_kernel(u, v);
  RKHMVector out = u;
  if (!u.terms_.empty() && !v.terms_.empty() && u.terms_.front().point.index() != v.terms_.front().point.index())
    throw Error(ErrorCode::PointKindMismatch, "vectors mix point kinds");
  out.terms_.insert(out.terms_.end(), v.terms_.begin(), v.terms_.end());
  return out;
}

RKHMVector RKHMVector::operator-() const {
  RKHMVector out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

RKHMVector operator-(const RKHMVector& u, const RKHMVector& v) { return u + (-v); }

RKHMVector operator*(const RKHMVector& u, const ComplexMatrix& c) {
  check_coeff(c, u.dim());
  RKHMVector out = u;
  for (auto& t : out.terms_) t.coeff = t.coeff * c;
  return out;
}

RKHMVector embed(const KernelSpec& kernel, const AtomicMeasure& mu) {
  if (mu.dim() != kernel.dim())
    throw Error(ErrorCode::DimensionMismatch, "measure weights and kernel output differ in dimension");
  std::vector<Term> terms;
  terms.reserve(mu.size());
  for (const auto& atom : mu.atoms()) terms.push_back({atom.point, atom.weight});
  return RKHMVector(kernel, std::move(terms));
}

ComplexMatrix inner_product(const RKHMVector& u, const RKHMVector& v) {
  require_same_kernel(u, v);
  const KernelSpec& k = u.kernel();
  const Index m = k.dim();
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  if (u.terms().empty() || v.terms().empty()) return out;
  if (u.terms().front().point.index() != v.terms().front().point.index())
    throw Error(ErrorCode::PointKindMismatch, "vectors mix point kinds");

  // out = sum_a c_a^* (sum_b k(x_a, y_b) d_b)
  ComplexMatrix acc(m, m);
  ComplexMatrix kab(m, m);
  if (k.is_scalar_times_identity()) {
    for (const auto& a : u.terms()) {
      acc.setZero();
      for (const auto& b : v.terms()) acc += k.scalar_value(a.point, b.point) * b.coeff;
      out.noalias() += a.coeff.adjoint() * acc;
    }
  } else {
    for (const auto& a : u.terms()) {
      acc.setZero();
      for (const auto& b : v.terms()) {
        k.evaluate_into(a.point, b.point, kab);
        acc.noalias() += kab * b.coeff;
      }
      out.noalias() += a.coeff.adjoint() * acc;
    }
  }
  return out;
}

HermitianMatrix absolute_value(const RKHMVector& u, double tol_psd) {
  return psd_sqrt(hermitize(inner_product(u, u)), tol_psd);
}

double norm(const RKHMVector& u, double tol_psd) { return operator_norm(absolute_value(u, tol_psd)); }

ComplexMatrix evaluate(const RKHMVector& u, const Point& x) {
  const KernelSpec& k = u.kernel();
  k.check_point(x);
  const Index m = k.dim();
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  if (u.terms().empty()) return out;
  if (u.terms().front().point.index() != x.index())
    throw Error(ErrorCode::PointKindMismatch, "evaluation point kind differs from the vector's");
  ComplexMatrix kx(m, m);
  for (const auto& t : u.terms()) {
    k.evaluate_into(x, t.point, kx);
    out.noalias() += kx * t.coeff;
  }
  return out;
}

HermitianMatrix gram_blocks(std::span<const RKHMVector> vectors, unsigned threads) {
  const auto n = static_cast<Index>(vectors.size());
  if (n == 0) return HermitianMatrix::zero(0);
  const Index m = vectors.front().dim();
  for (const auto& v : vectors) require_same_kernel(vectors.front(), v);

  std::vector<std::pair<Index, Index>> upper;
  upper.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
  for (Index i = 0; i < n; ++i)
    for (Index j = i; j < n; ++j) upper.emplace_back(i, j);

  ComplexMatrix g(n * m, n * m);
  parallel_for(upper.size(), threads, [&](std::size_t idx) {
    const auto [i, j] = upper[idx];
    const ComplexMatrix block = inner_product(vectors[i], vectors[j]);
    g.block(i * m, j * m, m, m) = block;
    if (i != j) g.block(j * m, i * m, m, m) = block.adjoint();
  });
  return hermitize(g);
}

HermitianMatrix gram_blocks(const KernelSpec& kernel, std::span<const AtomicMeasure> measures, unsigned threads) {
  std::vector<RKHMVector> vectors;
  vectors.reserve(measures.size());
  for (const auto& mu : measures) vectors.push_back(embed(kernel, mu));
  return gram_blocks(vectors, threads);
}

ComplexMatrix cross_inner_products(std::span<const RKHMVector> vectors, const RKHMVector& v) {
  const Index m = v.dim();
  ComplexMatrix out(static_cast<Index>(vectors.size()) * m, m);
  for (std::size_t i = 0; i < vectors.size(); ++i)
    out.block(static_cast<Index>(i) * m, 0, m, m) = inner_product(vectors[i], v);
  return out;
}

}  // namespace rkhm
