#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "devink/classifiers.hpp"
#include "devink/error.hpp"

namespace devink::classifiers {

double rbf_kernel(const DirectionVector& u, const DirectionVector& v, double gamma) noexcept {
  double d2 = 0.0;
  for (std::size_t k = 0; k < u.size(); ++k) {
    const double d = u[k] - v[k];
    d2 += d * d;
  }
  return std::exp(-gamma * d2);
}

namespace {

constexpr double kTau = 1e-12;

}  // namespace

// Second-order working-set selection after Fan, Chen & Lin (JMLR 2005),
// the scheme LIBSVM uses; the clipping below follows the same case split.
BinarySolution solve_smo(std::span<const DirectionVector> x, std::span<const int> y,
                         const SvmParams& params) {
  const std::size_t n = x.size();
  if (n == 0 || y.size() != n) throw DataError("solve_smo: empty or mismatched problem");
  const double C = params.C;

  std::vector<double> K(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      K[i * n + j] = K[j * n + i] = rbf_kernel(x[i], x[j], params.gamma);
    }
  }
  auto Q = [&](std::size_t i, std::size_t j) { return y[i] * y[j] * K[i * n + j]; };

  std::vector<double> alpha(n, 0.0);
  std::vector<double> G(n, -1.0);
  auto at_upper = [&](std::size_t t) { return alpha[t] >= C; };
  auto at_lower = [&](std::size_t t) { return alpha[t] <= 0.0; };

  std::int64_t iter = 0;
  double violation = 0.0;
  for (;; ++iter) {
    // i: maximal violating index in I_up.
    double gmax = -std::numeric_limits<double>::infinity();
    std::ptrdiff_t i = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? !at_upper(t) : !at_lower(t)) {
        const double v = -y[t] * G[t];
        if (v >= gmax) {
          gmax = v;
          i = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    // j: largest second-order decrease among I_low.
    double gmax2 = -std::numeric_limits<double>::infinity();
    double best_obj = std::numeric_limits<double>::infinity();
    std::ptrdiff_t j = -1;
    for (std::size_t t = 0; t < n; ++t) {
      if (y[t] == 1 ? at_lower(t) : at_upper(t)) continue;
      const double v = y[t] * G[t];
      gmax2 = std::max(gmax2, v);
      if (i < 0) continue;
      const double grad_diff = gmax + v;
      if (grad_diff > 0) {
        double quad = K[i * n + i] + K[t * n + t] - 2.0 * K[i * n + t];
        if (quad <= 0) quad = kTau;
        const double obj = -(grad_diff * grad_diff) / quad;
        if (obj <= best_obj) {
          best_obj = obj;
          j = static_cast<std::ptrdiff_t>(t);
        }
      }
    }
    violation = gmax + gmax2;
    if (i < 0 || j < 0 || violation < params.tolerance) break;
    if (iter >= params.max_iterations) {
      throw ConvergenceError("SMO did not converge in " + std::to_string(iter) +
                                 " iterations; worst KKT violation " + std::to_string(violation),
                             violation);
    }

    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    const double old_i = alpha[ui];
    const double old_j = alpha[uj];
    if (y[ui] != y[uj]) {
      double quad = K[ui * n + ui] + K[uj * n + uj] + 2.0 * Q(ui, uj);
      if (quad <= 0) quad = kTau;
      const double delta = (-G[ui] - G[uj]) / quad;
      const double diff = alpha[ui] - alpha[uj];
      alpha[ui] += delta;
      alpha[uj] += delta;
      if (diff > 0) {
        if (alpha[uj] < 0) {
          alpha[uj] = 0;
          alpha[ui] = diff;
        }
      } else if (alpha[ui] < 0) {
        alpha[ui] = 0;
        alpha[uj] = -diff;
      }
      if (diff > 0) {
        if (alpha[ui] > C) {
          alpha[ui] = C;
          alpha[uj] = C - diff;
        }
      } else if (alpha[uj] > C) {
        alpha[uj] = C;
        alpha[ui] = C + diff;
      }
    } else {
      double quad = K[ui * n + ui] + K[uj * n + uj] - 2.0 * Q(ui, uj);
      if (quad <= 0) quad = kTau;
      const double delta = (G[ui] - G[uj]) / quad;
      const double sum = alpha[ui] + alpha[uj];
      alpha[ui] -= delta;
      alpha[uj] += delta;
      if (sum > C) {
        if (alpha[ui] > C) {
          alpha[ui] = C;
          alpha[uj] = sum - C;
        }
      } else if (alpha[uj] < 0) {
        alpha[uj] = 0;
        alpha[ui] = sum;
      }
      if (sum > C) {
        if (alpha[uj] > C) {
          alpha[uj] = C;
          alpha[ui] = sum - C;
        }
      } else if (alpha[ui] < 0) {
        alpha[ui] = 0;
        alpha[uj] = sum;
      }
    }

    const double di = alpha[ui] - old_i;
    const double dj = alpha[uj] - old_j;
    for (std::size_t t = 0; t < n; ++t) G[t] += Q(ui, t) * di + Q(uj, t) * dj;
  }

  BinarySolution sol;
  sol.iterations = iter;

  // rho: mean of y*G over free vectors, else midpoint of the feasible interval.
  double ub = std::numeric_limits<double>::infinity();
  double lb = -std::numeric_limits<double>::infinity();
  double sum_free = 0.0;
  int n_free = 0;
  for (std::size_t t = 0; t < n; ++t) {
    const double yg = y[t] * G[t];
    if (at_upper(t)) {
      if (y[t] == -1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else if (at_lower(t)) {
      if (y[t] == 1) ub = std::min(ub, yg); else lb = std::max(lb, yg);
    } else {
      ++n_free;
      sum_free += yg;
    }
  }
  if (n_free > 0) {
    sol.rho = sum_free / n_free;
  } else if (std::isfinite(ub) && std::isfinite(lb)) {
    sol.rho = 0.5 * (ub + lb);
  } else {
    sol.rho = std::isfinite(ub) ? ub : (std::isfinite(lb) ? lb : 0.0);
  }

  double obj = 0.0;
  for (std::size_t t = 0; t < n; ++t) obj += alpha[t] * (G[t] - 1.0);
  sol.objective = -0.5 * obj;
  sol.alpha = std::move(alpha);
  return sol;
}

double BinaryMachine::decision(const DirectionVector& t, double gamma) const noexcept {
  double acc = bias;
  for (std::size_t i = 0; i < support_vectors.size(); ++i) {
    acc += coefficients[i] * rbf_kernel(support_vectors[i], t, gamma);
  }
  return acc;
}

SvmModel train_svm(std::span<const std::pair<DirectionVector, PrimitiveId>> samples,
                   const SvmParams& params) {
  if (params.C <= 0 || params.gamma <= 0) throw DataError("train_svm: C and gamma must be positive");
  std::map<PrimitiveId, std::vector<std::size_t>> by_class;
  for (std::size_t s = 0; s < samples.size(); ++s) by_class[samples[s].second].push_back(s);
  if (by_class.size() < 2) throw DataError("train_svm: at least two classes are required");

  SvmModel model;
  model.C = params.C;
  model.gamma = params.gamma;
  for (const auto& entry : by_class) model.classes.push_back(entry.first);

  for (std::size_t a = 0; a < model.classes.size(); ++a) {
    for (std::size_t b = a + 1; b < model.classes.size(); ++b) {
      std::vector<std::size_t> rows;
      const auto& ra = by_class[model.classes[a]];
      const auto& rb = by_class[model.classes[b]];
      std::merge(ra.begin(), ra.end(), rb.begin(), rb.end(), std::back_inserter(rows));
      std::vector<DirectionVector> x;
      std::vector<int> y;
      for (std::size_t r : rows) {
        x.push_back(samples[r].first);
        y.push_back(samples[r].second == model.classes[a] ? 1 : -1);
      }
      const BinarySolution sol = solve_smo(x, y, params);

      BinaryMachine m{model.classes[a], model.classes[b], {}, {}, -sol.rho};
      for (std::size_t t = 0; t < x.size(); ++t) {
        if (sol.alpha[t] > 0) {
          m.support_vectors.push_back(x[t]);
          m.coefficients.push_back(sol.alpha[t] * y[t]);
        }
      }
      model.machines.push_back(std::move(m));
    }
  }
  return model;
}

RankedCandidates predict_svm(const SvmModel& model, const DirectionVector& t) {
  std::map<PrimitiveId, Candidate> tally;
  for (PrimitiveId id : model.classes) tally.emplace(id, Candidate{id, 0.0, 0.0});
  for (const auto& m : model.machines) {
    const double d = m.decision(t, model.gamma);
    auto& pos = tally.at(m.positive);
    auto& neg = tally.at(m.negative);
    (d > 0 ? pos : neg).score += 1.0;
    pos.margin += d;
    neg.margin -= d;
  }
  RankedCandidates out;
  out.reserve(tally.size());
  for (const auto& entry : tally) out.push_back(entry.second);
  std::sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.margin != b.margin) return a.margin > b.margin;
    return a.id < b.id;
  });
  for (int i = 1; i <= kPrimitiveCount; ++i) {
    if (!tally.contains(PrimitiveId(i))) {
      out.push_back({PrimitiveId(i), -std::numeric_limits<double>::infinity(), 0.0});
    }
  }
  return out;
}

}  // namespace devink::classifiers
