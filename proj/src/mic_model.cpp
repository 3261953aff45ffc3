#include "sparse_ridge/mic_model.hpp"

#include "sparse_ridge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace sridge {

MicModel::MicModel(const ProblemSpec& spec, Support fixed_one, Support free)
    : spec_(spec),
      fixed_(normalize_support(std::move(fixed_one), spec.p())),
      free_(normalize_support(std::move(free), spec.p())) {
  Support overlap;
  std::set_intersection(fixed_.begin(), fixed_.end(), free_.begin(), free_.end(), std::back_inserter(overlap));
  if (!overlap.empty()) throw InvalidArgument("fixed and free coordinates overlap");

  const Index m = static_cast<Index>(fixed_.size() + free_.size());
  cols_.resize(spec.n(), m);
  Index c = 0;
  for (Index i : fixed_) cols_.col(c++) = spec.x().col(i);
  for (Index i : free_) cols_.col(c++) = spec.x().col(i);
  cty_ = cols_.transpose() * spec.y();
  yy_ = spec.y().squaredNorm();
  woodbury_ = m < spec.n();
  if (woodbury_) gram_ = cols_.transpose() * cols_;
}

MicModel::MicModel(const ProblemSpec& spec) : MicModel(spec, {}, [&] {
  Support all(static_cast<std::size_t>(spec.p()));
  for (Index i = 0; i < spec.p(); ++i) all[static_cast<std::size_t>(i)] = i;
  return all;
}()) {}

MicModel::Evaluation MicModel::evaluate(const Vector& z) const {
  const Index nf = static_cast<Index>(fixed_.size());
  const Index m = cols_.cols();
  if (z.size() != dimension()) throw InvalidArgument("relaxation vector has wrong length");

  Vector weight(m);
  weight.head(nf).setOnes();
  weight.tail(m - nf) = z.cwiseMax(0.0);

  const double nl = spec_.n_lambda();
  const double n = static_cast<double>(spec_.n());
  Evaluation ev;
  Vector ctu;  // cols^T A^{-1} y
  if (m == 0) {
    ev.value = yy_ / n;
    ctu = Vector(0);
  } else if (woodbury_) {
    const Vector s = weight.cwiseSqrt();
    Matrix b = s.asDiagonal() * gram_ * s.asDiagonal();
    b.diagonal().array() += nl;
    Eigen::LLT<Matrix> llt(b);
    if (llt.info() != Eigen::Success) throw NumericalFailure("relaxed Woodbury system is not positive definite");
    const Vector h = s.cwiseProduct(llt.solve(s.cwiseProduct(cty_)));
    ev.value = (yy_ - cty_.dot(h)) / n;
    ctu = (cty_ - gram_ * h) / nl;
  } else {
    Matrix a = cols_ * weight.asDiagonal() * cols_.transpose();
    a.diagonal().array() += nl;
    Eigen::LLT<Matrix> llt(a);
    if (llt.info() != Eigen::Success) throw NumericalFailure("relaxed n x n system is not positive definite");
    const Vector u = llt.solve(spec_.y());
    ev.value = spec_.lambda() * spec_.y().dot(u);
    ctu = cols_.transpose() * u;
  }
  ev.correlation = ctu.tail(m - nf);
  ev.gradient = -spec_.lambda() * ev.correlation.array().square().matrix();
  return ev;
}

}  // namespace sridge
