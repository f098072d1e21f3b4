#include "rkhm/kernels.hpp"

#include <bit>
#include <cstdint>
#include <cstring>

namespace rkhm {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

void append_bits(std::string& key, double v) {
  const auto bits = std::bit_cast<std::uint64_t>(v);
  char buf[sizeof bits];
  std::memcpy(buf, &bits, sizeof bits);
  key.append(buf, sizeof bits);
}

void append_size(std::string& key, Index n) {
  const auto u = static_cast<std::uint64_t>(n);
  char buf[sizeof u];
  std::memcpy(buf, &u, sizeof u);
  key.append(buf, sizeof u);
}

double squared_l2(const RealVector& x, const RealVector& y) { return (x - y).squaredNorm(); }
double l1(const RealVector& x, const RealVector& y) { return (x - y).lpNorm<1>(); }

const RealVector& expect_real(const Point& p, const char* who) {
  if (const auto* v = std::get_if<RealVector>(&p)) return *v;
  throw Error(ErrorCode::PointKindMismatch, std::string(who) + " expects real-vector points, got " +
                                                point_kind_name(p));
}

}  // namespace

Point real_point(std::initializer_list<double> values) {
  RealVector v(static_cast<Index>(values.size()));
  Index i = 0;
  for (double x : values) v(i++) = x;
  return v;
}

Point pair_point(double first, double second) {
  return PointPair{RealVector::Constant(1, first), RealVector::Constant(1, second)};
}

const char* point_kind_name(const Point& p) {
  return std::visit(overloaded{[](const RealVector&) { return "RealVector"; },
                               [](const ComplexVector&) { return "ComplexVector"; },
                               [](const PointPair&) { return "Pair"; }},
                    p);
}

std::string point_key(const Point& p) {
  std::string key;
  key.push_back(static_cast<char>(p.index()));
  std::visit(overloaded{[&](const RealVector& v) {
                          append_size(key, v.size());
                          for (Index i = 0; i < v.size(); ++i) append_bits(key, v(i));
                        },
                        [&](const ComplexVector& v) {
                          append_size(key, v.size());
                          for (Index i = 0; i < v.size(); ++i) {
                            append_bits(key, v(i).real());
                            append_bits(key, v(i).imag());
                          }
                        },
                        [&](const PointPair& v) {
                          append_size(key, v.first.size());
                          append_size(key, v.second.size());
                          for (Index i = 0; i < v.first.size(); ++i) append_bits(key, v.first(i));
                          for (Index i = 0; i < v.second.size(); ++i) append_bits(key, v.second(i));
                        }},
             p);
  return key;
}

bool identical_points(const Point& a, const Point& b) { return point_key(a) == point_key(b); }

// ---------------------------------------------------------------------------

ScalarKernel ScalarKernel::gaussian(double gamma) {
  ScalarKernel k{ScalarFamily::Gaussian, gamma, 1.0, 0.5};
  k.validate();
  return k;
}

ScalarKernel ScalarKernel::laplacian(double gamma) {
  ScalarKernel k{ScalarFamily::Laplacian, gamma, 1.0, 0.5};
  k.validate();
  return k;
}

ScalarKernel ScalarKernel::inverse_multiquadric(double c, double beta) {
  ScalarKernel k{ScalarFamily::InverseMultiquadric, 1.0, c, beta};
  k.validate();
  return k;
}

void ScalarKernel::validate() const {
  const bool ok = family == ScalarFamily::InverseMultiquadric
                      ? (std::isfinite(c) && std::isfinite(beta) && c > 0 && beta > 0)
                      : (std::isfinite(gamma) && gamma > 0);
  if (!ok) throw Error(ErrorCode::InvalidArgument, std::string(family_name(family)) + " parameters must be positive");
}

double ScalarKernel::from_distances(double sq, double manhattan) const {
  switch (family) {
    case ScalarFamily::Gaussian: return std::exp(-gamma * sq);
    case ScalarFamily::Laplacian: return std::exp(-gamma * manhattan);
    case ScalarFamily::InverseMultiquadric: return std::pow(c * c + sq, -beta);
  }
  return 0.0;
}

double ScalarKernel::operator()(const RealVector& x, const RealVector& y) const {
  if (x.size() != y.size()) throw Error(ErrorCode::DimensionMismatch, "scalar kernel inputs differ in length");
  return from_distances(squared_l2(x, y), family == ScalarFamily::Laplacian ? l1(x, y) : 0.0);
}

double ScalarKernel::operator()(Complex x, Complex y) const {
  const Complex d = x - y;
  return from_distances(std::norm(d), std::abs(d.real()) + std::abs(d.imag()));
}

double ScalarKernel::operator()(double x, double y) const {
  const double d = x - y;
  return from_distances(d * d, std::abs(d));
}

const char* family_name(ScalarFamily f) {
  switch (f) {
    case ScalarFamily::Gaussian: return "gaussian";
    case ScalarFamily::Laplacian: return "laplacian";
    case ScalarFamily::InverseMultiquadric: return "inverse_multiquadric";
  }
  return "?";
}

// ---------------------------------------------------------------------------

KernelSpec::KernelSpec(Variant v) : v_(std::move(v)) {
  std::visit(overloaded{
                 [&](const DiagonalScalar& d) {
                   if (d.diagonal.empty()) throw Error(ErrorCode::InvalidDimension, "diagonal kernel needs m >= 1");
                   for (const auto& k : d.diagonal) k.validate();
                   m_ = static_cast<Index>(d.diagonal.size());
                   scalar_identity_ = true;
                   for (const auto& k : d.diagonal) scalar_identity_ = scalar_identity_ && k == d.diagonal.front();
                 },
                 [&](const Elementwise& e) {
                   if (e.m < 1) throw Error(ErrorCode::InvalidDimension, "elementwise kernel needs m >= 1");
                   e.base.validate();
                   m_ = e.m;
                 },
                 [&](const QuantumProjective& q) {
                   if (q.m < 1) throw Error(ErrorCode::InvalidDimension, "projective kernel needs m >= 1");
                   m_ = q.m;
                 },
                 [&](const ProductScalarTimesIdentity& p) {
                   if (p.m < 1) throw Error(ErrorCode::InvalidDimension, "product kernel needs m >= 1");
                   p.first.validate();
                   p.second.validate();
                   m_ = p.m;
                   scalar_identity_ = true;
                 }},
             v_);
}

KernelSpec KernelSpec::diagonal(std::vector<ScalarKernel> diagonal) {
  return KernelSpec(DiagonalScalar{std::move(diagonal)});
}

KernelSpec KernelSpec::diagonal(const ScalarKernel& k, Index m) {
  if (m < 1) throw Error(ErrorCode::InvalidDimension, "diagonal kernel needs m >= 1");
  return KernelSpec(DiagonalScalar{std::vector<ScalarKernel>(static_cast<std::size_t>(m), k)});
}

KernelSpec KernelSpec::elementwise(const ScalarKernel& k, Index m) { return KernelSpec(Elementwise{k, m}); }

KernelSpec KernelSpec::quantum_projective(Index m) { return KernelSpec(QuantumProjective{m}); }

KernelSpec KernelSpec::product_identity(const ScalarKernel& first, const ScalarKernel& second, Index m) {
  return KernelSpec(ProductScalarTimesIdentity{first, second, m});
}

std::string KernelSpec::name() const {
  return std::visit(overloaded{[](const DiagonalScalar&) { return std::string("diagonal_scalar"); },
                               [](const Elementwise&) { return std::string("elementwise"); },
                               [](const QuantumProjective&) { return std::string("quantum_projective"); },
                               [](const ProductScalarTimesIdentity&) {
                                 return std::string("product_scalar_identity");
                               }},
                    v_);
}

void KernelSpec::check_point(const Point& x) const {
  const auto mismatch = [&] {
    throw Error(ErrorCode::PointKindMismatch,
                name() + " kernel cannot take a " + point_kind_name(x) + " point");
  };
  std::visit(overloaded{
                 [&](const DiagonalScalar&) {
                   if (std::holds_alternative<ComplexVector>(x)) mismatch();
                 },
                 [&](const Elementwise&) {
                   Index n = -1;
                   if (const auto* r = std::get_if<RealVector>(&x)) n = r->size();
                   else if (const auto* c = std::get_if<ComplexVector>(&x)) n = c->size();
                   else mismatch();
                   if (n != m_) throw Error(ErrorCode::DimensionMismatch, "elementwise kernel needs m-tuples");
                 },
                 [&](const QuantumProjective&) {
                   const auto* c = std::get_if<ComplexVector>(&x);
                   if (!c) mismatch();
                   if (c->size() != m_) throw Error(ErrorCode::DimensionMismatch, "projective kernel needs vectors in C^m");
                 },
                 [&](const ProductScalarTimesIdentity&) {
                   if (!std::holds_alternative<PointPair>(x)) mismatch();
                 }},
             v_);
}

namespace {

// Squared L2 and L1 distances between two points of the same real kind.
std::pair<double, double> real_distances(const Point& x, const Point& y) {
  if (const auto* a = std::get_if<RealVector>(&x)) {
    const auto& b = expect_real(y, "diagonal kernel");
    if (a->size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "points differ in length");
    return {squared_l2(*a, b), l1(*a, b)};
  }
  const auto* a = std::get_if<PointPair>(&x);
  const auto* b = std::get_if<PointPair>(&y);
  if (!a || !b) throw Error(ErrorCode::PointKindMismatch, "points are of different kinds");
  if (a->first.size() != b->first.size() || a->second.size() != b->second.size())
    throw Error(ErrorCode::DimensionMismatch, "pair points differ in length");
  return {squared_l2(a->first, b->first) + squared_l2(a->second, b->second),
          l1(a->first, b->first) + l1(a->second, b->second)};
}

double product_value(const ProductScalarTimesIdentity& p, const Point& x, const Point& y) {
  const auto* a = std::get_if<PointPair>(&x);
  const auto* b = std::get_if<PointPair>(&y);
  if (!a || !b) throw Error(ErrorCode::PointKindMismatch, "product kernel expects pair points");
  return p.first(a->first, b->first) * p.second(a->second, b->second);
}

template <typename Vec>
void elementwise_into(const ScalarKernel& k, const Vec& x, const Vec& y, ComplexMatrix& out) {
  const Index m = out.rows();
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) out(i, j) = k(x(i), y(j));
}

}  // namespace

void KernelSpec::evaluate_into(const Point& x, const Point& y, ComplexMatrix& out) const {
  out.resize(m_, m_);
  std::visit(overloaded{
                 [&](const DiagonalScalar& d) {
                   const auto [sq, manhattan] = real_distances(x, y);
                   out.setZero();
                   for (Index i = 0; i < m_; ++i) out(i, i) = d.diagonal[i].from_distances(sq, manhattan);
                 },
                 [&](const Elementwise& e) {
                   if (const auto* a = std::get_if<RealVector>(&x)) {
                     elementwise_into(e.base, *a, expect_real(y, "elementwise kernel"), out);
                   } else {
                     const auto* c = std::get_if<ComplexVector>(&x);
                     const auto* d = std::get_if<ComplexVector>(&y);
                     if (!c || !d) throw Error(ErrorCode::PointKindMismatch, "elementwise kernel point kinds differ");
                     elementwise_into(e.base, *c, *d, out);
                   }
                 },
                 [&](const QuantumProjective&) {
                   const auto& a = std::get<ComplexVector>(x);
                   const auto& b = std::get<ComplexVector>(y);
                   out.noalias() = a * a.dot(b) * b.adjoint();
                 },
                 [&](const ProductScalarTimesIdentity& p) {
                   out.setZero();
                   out.diagonal().setConstant(product_value(p, x, y));
                 }},
             v_);
}

ComplexMatrix KernelSpec::operator()(const Point& x, const Point& y) const {
  check_point(x);
  check_point(y);
  if (x.index() != y.index())
    throw Error(ErrorCode::PointKindMismatch, "kernel arguments are of different point kinds");
  ComplexMatrix out(m_, m_);
  evaluate_into(x, y, out);
  return out;
}

double KernelSpec::scalar_value(const Point& x, const Point& y) const {
  if (!scalar_identity_) throw Error(ErrorCode::KernelMismatch, name() + " kernel is not scalar times identity");
  if (const auto* d = std::get_if<DiagonalScalar>(&v_)) {
    const auto [sq, manhattan] = real_distances(x, y);
    return d->diagonal.front().from_distances(sq, manhattan);
  }
  if (const auto* p = std::get_if<ProductScalarTimesIdentity>(&v_)) return product_value(*p, x, y);
  throw Error(ErrorCode::KernelMismatch, name() + " kernel is not scalar times identity");
}

bool check_positive_definite(const KernelSpec& kernel, std::span<const Point> points,
                             std::span<const ComplexMatrix> coeffs, double tol) {
  for (const auto& c : coeffs)
    if (c.rows() != kernel.dim() || c.cols() != kernel.dim())
      throw Error(ErrorCode::DimensionMismatch, "coefficients must be m x m");
  return check_positive_definite([&](const Point& x, const Point& y) { return kernel(x, y); }, points,
                                 coeffs, tol);
}

}  // namespace rkhm
