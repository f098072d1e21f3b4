#include "rkhm/synthetic.hpp"

namespace rkhm {

CorrelatedSource::CorrelatedSource(RealMatrix correlation) : correlation_(std::move(correlation)) {
  if (correlation_.rows() < 1 || correlation_.rows() != correlation_.cols())
    throw Error(ErrorCode::DimensionMismatch, "correlation matrix must be square");
  if (!correlation_.allFinite()) throw Error(ErrorCode::NonFinite, "correlation matrix has non-finite entries");
  for (Index i = 0; i < correlation_.rows(); ++i)
    if (correlation_(i, i) != 1.0) throw Error(ErrorCode::InvalidArgument, "correlation diagonal must be 1");
  if (!correlation_.isApprox(correlation_.transpose()))
    throw Error(ErrorCode::InvalidArgument, "correlation matrix must be symmetric");
  Eigen::LLT<RealMatrix> llt(correlation_);
  if (llt.info() != Eigen::Success)
    throw Error(ErrorCode::NotPSD, "correlation matrix must be positive definite");
  chol_ = llt.matrixL();
}

CorrelatedSource CorrelatedSource::three_variable(double coupling) {
  if (!(coupling > -1.0 && coupling < 1.0))
    throw Error(ErrorCode::InvalidArgument, "coupling must lie in (-1, 1)");
  RealMatrix c(3, 3);
  c << 1.0, 0.3, coupling,  //
      0.3, 1.0, 0.3 * coupling,  //
      coupling, 0.3 * coupling, 1.0;
  return CorrelatedSource(c);
}

RealMatrix CorrelatedSource::sample(Index n, std::mt19937_64& rng) const {
  std::normal_distribution<double> normal;
  RealMatrix z(n, dim());
  for (Index t = 0; t < n; ++t)
    for (Index j = 0; j < dim(); ++j) z(t, j) = normal(rng);
  return z * chol_.transpose();
}

}  // namespace rkhm
