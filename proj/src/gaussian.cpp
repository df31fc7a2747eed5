#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include <Eigen/Dense>

#include "devink/classifiers.hpp"
#include "devink/error.hpp"

namespace devink::classifiers {

namespace {

constexpr int kDim = features::kDirections;
using Mat = Eigen::Matrix<double, kDim, kDim, Eigen::RowMajor>;
using Vec = Eigen::Matrix<double, kDim, 1>;

Mat to_eigen(const Matrix8& m) { return Eigen::Map<const Mat>(m.data()); }

Matrix8 from_eigen(const Mat& m) {
  Matrix8 out{};
  Eigen::Map<Mat>(out.data()) = m;
  return out;
}

}  // namespace

std::size_t rank_of(const RankedCandidates& ranking, PrimitiveId id) noexcept {
  for (std::size_t i = 0; i < ranking.size(); ++i) {
    if (ranking[i].id == id) return i + 1;
  }
  return 0;
}

GaussianClassModel::GaussianClassModel(PrimitiveId id, int count, const DirectionVector& mean,
                                       const Matrix8& covariance, double ridge)
    : id_(id), count_(count), mean_(mean), covariance_(covariance), ridge_(ridge) {
  const Mat sigma = to_eigen(covariance_) + ridge_ * Mat::Identity();
  Eigen::LLT<Mat> llt(sigma);
  if (llt.info() != Eigen::Success) {
    throw DataError("covariance of class '" + std::string(id_.name()) +
                    "' is not positive definite");
  }
  const Mat lower = llt.matrixL();
  chol_ = from_eigen(lower);
  log_det_ = 2.0 * lower.diagonal().array().log().sum();
}

double GaussianClassModel::log_likelihood(const DirectionVector& t) const {
  const Mat lower = to_eigen(chol_);
  const Vec diff = Eigen::Map<const Vec>(t.data()) - Eigen::Map<const Vec>(mean_.data());
  const Vec z = lower.triangularView<Eigen::Lower>().solve(diff);
  return -0.5 * kDim * std::log(2.0 * std::numbers::pi) - 0.5 * log_det_ - 0.5 * z.squaredNorm();
}

GaussianModel train_gaussian(std::span<const std::pair<DirectionVector, PrimitiveId>> samples,
                             std::span<const PrimitiveId> required) {
  std::map<PrimitiveId, std::vector<const DirectionVector*>> by_class;
  for (const auto& [f, id] : samples) by_class[id].push_back(&f);
  for (PrimitiveId id : required) {
    if (by_class.find(id) == by_class.end()) {
      throw DataError("train_gaussian: class '" + std::string(id.name()) + "' has no samples");
    }
  }
  if (by_class.empty()) throw DataError("train_gaussian: no training samples");

  GaussianModel model;
  for (const auto& [id, rows] : by_class) {
    const auto beta = static_cast<int>(rows.size());
    Vec mu = Vec::Zero();
    for (const auto* f : rows) mu += Eigen::Map<const Vec>(f->data());
    mu /= beta;

    Mat cov = Mat::Zero();
    if (beta > 1) {
      for (const auto* f : rows) {
        const Vec d = Eigen::Map<const Vec>(f->data()) - mu;
        cov.noalias() += d * d.transpose();
      }
      cov /= (beta - 1);
    }

    const double trace = cov.trace();
    double step = trace > 0 ? 1e-6 * trace / kDim : 1e-6;
    double ridge = step;
    while (Eigen::LLT<Mat>(cov + ridge * Mat::Identity()).info() != Eigen::Success) {
      step *= 10;
      ridge += step;
    }

    DirectionVector mean{};
    std::copy(mu.data(), mu.data() + kDim, mean.begin());
    model.classes.emplace_back(id, beta, mean, from_eigen(cov), ridge);
  }
  return model;
}

RankedCandidates score_gaussian(const GaussianModel& model, const DirectionVector& t) {
  for (double v : t) {
    if (!std::isfinite(v)) throw DataError("score_gaussian: non-finite feature value");
  }
  std::array<bool, kPrimitiveCount + 1> trained{};
  RankedCandidates out;
  out.reserve(kPrimitiveCount);
  for (const auto& c : model.classes) {
    out.push_back({c.id(), c.log_likelihood(t), 0.0});
    trained[c.id().index()] = true;
  }
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
  for (int i = 1; i <= kPrimitiveCount; ++i) {
    if (!trained[i]) out.push_back({PrimitiveId(i), -std::numeric_limits<double>::infinity(), 0.0});
  }
  return out;
}

}  // namespace devink::classifiers
