#include "evofss/classifier.hpp"

#include <cmath>
#include <stdexcept>

namespace evofss {

namespace {

constexpr double kStep = 0.1;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Mean log-likelihood, computed stably from the raw score z.
// y=1: log p = -log1p(exp(-z)); y=0: log(1-p) = -z - log1p(exp(-z)).
double mean_log_likelihood(const std::vector<double>& scores,
                           const std::vector<int>& labels) {
  double total = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    const double z = scores[i];
    const double log_p =
        z >= 0.0 ? -std::log1p(std::exp(-z)) : z - std::log1p(std::exp(z));
    total += labels[i] ? log_p : log_p - z;
  }
  return total / static_cast<double>(scores.size());
}

}  // namespace

LogisticModel train_logistic(const Dataset& train, std::size_t max_epochs,
                             double tol) {
  if (train.nfeat == 0) throw std::invalid_argument("zero features");
  if (train.nrows == 0) throw std::invalid_argument("empty training set");
  bool has_pos = false, has_neg = false;
  for (int y : train.labels) (y ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("single-class training labels");

  const std::size_t n = train.nrows;
  const std::size_t d = train.nfeat;
  const double inv_n = 1.0 / static_cast<double>(n);

  LogisticModel model;
  model.weights.assign(d, 0.0);
  model.mean.assign(d, 0.0);
  model.stddev.assign(d, 1.0);
  model.constant.assign(d, 0);

  for (std::size_t j = 0; j < d; ++j) {
    double sum = 0.0;
    for (std::size_t r = 0; r < n; ++r) sum += train.at(r, j);
    model.mean[j] = sum * inv_n;
  }
  for (std::size_t j = 0; j < d; ++j) {
    double sq = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double delta = train.at(r, j) - model.mean[j];
      sq += delta * delta;
    }
    const double sd = std::sqrt(sq * inv_n);
    if (sd > 0.0) {
      model.stddev[j] = sd;
    } else {
      model.constant[j] = 1;  // standardized value is 0, weight stays 0
    }
  }

  // Standardize once; row-major like the input.
  std::vector<double> z(n * d);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t j = 0; j < d; ++j)
      z[r * d + j] = model.constant[j]
                         ? 0.0
                         : (train.at(r, j) - model.mean[j]) / model.stddev[j];

  std::vector<double> scores(n, 0.0);
  std::vector<double> grad(d);
  double prev_loss = mean_log_likelihood(scores, train.labels);

  for (std::size_t epoch = 0; epoch < max_epochs; ++epoch) {
    std::fill(grad.begin(), grad.end(), 0.0);
    double grad_b = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double err =
          static_cast<double>(train.labels[r]) - sigmoid(scores[r]);
      const double* zr = z.data() + r * d;
      for (std::size_t j = 0; j < d; ++j) grad[j] += err * zr[j];
      grad_b += err;
    }
    for (std::size_t j = 0; j < d; ++j)
      model.weights[j] += kStep * grad[j] * inv_n;
    model.intercept += kStep * grad_b * inv_n;

    for (std::size_t r = 0; r < n; ++r) {
      const double* zr = z.data() + r * d;
      double s = model.intercept;
      for (std::size_t j = 0; j < d; ++j) s += model.weights[j] * zr[j];
      scores[r] = s;
    }
    const double loss = mean_log_likelihood(scores, train.labels);
    if (std::fabs(loss - prev_loss) < tol) break;
    prev_loss = loss;
  }

  for (std::size_t j = 0; j < d; ++j)
    if (model.constant[j]) model.weights[j] = 0.0;
  return model;
}

double predict_probability(const LogisticModel& model,
                           std::span<const double> row) {
  if (row.size() != model.nfeat())
    throw std::invalid_argument("row width does not match model");
  double s = model.intercept;
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (model.constant[j]) continue;
    s += model.weights[j] * ((row[j] - model.mean[j]) / model.stddev[j]);
  }
  return sigmoid(s);
}

ConfusionMatrix evaluate_confusion(const LogisticModel& model,
                                   const Dataset& eval) {
  if (eval.nrows == 0) throw std::invalid_argument("empty evaluation set");
  if (eval.nfeat != model.nfeat())
    throw std::invalid_argument("evaluation width does not match model");
  ConfusionMatrix cm;
  for (std::size_t r = 0; r < eval.nrows; ++r) {
    const bool predicted = predict_probability(model, eval.row(r)) >= 0.5;
    if (eval.labels[r]) {
      predicted ? ++cm.tp : ++cm.fn;
    } else {
      predicted ? ++cm.fp : ++cm.tn;
    }
  }
  return cm;
}

FitnessScore auc_score(const ConfusionMatrix& cm) {
  if (cm.tp + cm.fn == 0)
    throw std::invalid_argument("no positive samples in evaluation set");
  if (cm.tn + cm.fp == 0)
    throw std::invalid_argument("no negative samples in evaluation set");
  FitnessScore score;
  score.sensitivity =
      static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
  score.specificity =
      static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
  score.auc = (score.sensitivity + score.specificity) / 2.0;
  return score;
}

FitnessScore evaluate_fitness(const FeatureMask& mask, const Dataset& train,
                              const Dataset& eval) {
  if (mask.empty_subset()) return FitnessScore{};  // 0.0 sentinel
  const Dataset train_proj = project_columns(train, mask);
  const Dataset eval_proj = project_columns(eval, mask);
  const LogisticModel model = train_logistic(train_proj);
  return auc_score(evaluate_confusion(model, eval_proj));
}

}  // namespace evofss
