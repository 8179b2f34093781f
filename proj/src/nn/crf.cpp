#include "tocgen/nn/crf.hpp"

#include <cmath>
#include <limits>

#include "tocgen/errors.hpp"

namespace tocgen::nn {

CrfParams::CrfParams(int num_labels)
    : transitions({num_labels, num_labels}), start({num_labels}), end({num_labels}) {}

namespace {

double logsumexp(const std::vector<double>& v) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : v) mx = std::max(mx, x);
  if (!std::isfinite(mx)) return mx;
  double sum = 0;
  for (double x : v) sum += std::exp(x - mx);
  return mx + std::log(sum);
}

void check_labels(const std::vector<int>& labels, int n, int k) {
  if (static_cast<int>(labels.size()) != n) {
    throw DataError("crf: label sequence length mismatch");
  }
  for (int y : labels) {
    if (y < 0 || y >= k) throw DataError("crf: label out of range");
  }
}

}  // namespace

double crf_path_score(const Tensor& emissions, const std::vector<int>& labels,
                      const CrfParams& params) {
  int n = emissions.rows();
  int k = emissions.cols();
  check_labels(labels, n, k);
  double score = params.start.data[static_cast<size_t>(labels[0])] + emissions.at(0, labels[0]);
  for (int t = 1; t < n; ++t) {
    score += params.transitions.at(labels[t - 1], labels[t]) + emissions.at(t, labels[t]);
  }
  score += params.end.data[static_cast<size_t>(labels[n - 1])];
  return score;
}

double crf_log_partition(const Tensor& emissions, const CrfParams& params) {
  int n = emissions.rows();
  int k = emissions.cols();
  std::vector<double> alpha(k), next(k), scratch(k);
  for (int j = 0; j < k; ++j) {
    alpha[j] = params.start.data[static_cast<size_t>(j)] + emissions.at(0, j);
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) scratch[i] = alpha[i] + params.transitions.at(i, j);
      next[j] = emissions.at(t, j) + logsumexp(scratch);
    }
    alpha.swap(next);
  }
  for (int j = 0; j < k; ++j) alpha[j] += params.end.data[static_cast<size_t>(j)];
  return logsumexp(alpha);
}

double crf_nll(const Tensor& emissions, const std::vector<int>& labels,
               const CrfParams& params, CrfGrads* grads) {
  int n = emissions.rows();
  int k = emissions.cols();
  check_labels(labels, n, k);
  double log_z = crf_log_partition(emissions, params);
  double nll = log_z - crf_path_score(emissions, labels, params);
  if (!grads) return nll;

  // forward-backward in log space for the expected-count gradients
  std::vector<std::vector<double>> alpha(n, std::vector<double>(k)),
      beta(n, std::vector<double>(k));
  std::vector<double> scratch(k);
  for (int j = 0; j < k; ++j) {
    alpha[0][j] = params.start.data[static_cast<size_t>(j)] + emissions.at(0, j);
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      for (int i = 0; i < k; ++i) scratch[i] = alpha[t - 1][i] + params.transitions.at(i, j);
      alpha[t][j] = emissions.at(t, j) + logsumexp(scratch);
    }
  }
  for (int j = 0; j < k; ++j) beta[n - 1][j] = params.end.data[static_cast<size_t>(j)];
  for (int t = n - 2; t >= 0; --t) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        scratch[j] = params.transitions.at(i, j) + emissions.at(t + 1, j) + beta[t + 1][j];
      }
      beta[t][i] = logsumexp(scratch);
    }
  }

  grads->d_emissions = Tensor({n, k});
  grads->d_transitions = Tensor({k, k});
  grads->d_start = Tensor({k});
  grads->d_end = Tensor({k});
  for (int t = 0; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      grads->d_emissions.at(t, j) = std::exp(alpha[t][j] + beta[t][j] - log_z);
    }
    grads->d_emissions.at(t, labels[t]) -= 1.0;
  }
  for (int t = 0; t + 1 < n; ++t) {
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        grads->d_transitions.at(i, j) +=
            std::exp(alpha[t][i] + params.transitions.at(i, j) +
                     emissions.at(t + 1, j) + beta[t + 1][j] - log_z);
      }
    }
    grads->d_transitions.at(labels[t], labels[t + 1]) -= 1.0;
  }
  for (int j = 0; j < k; ++j) {
    grads->d_start.data[static_cast<size_t>(j)] =
        std::exp(alpha[0][j] + beta[0][j] - log_z);
    grads->d_end.data[static_cast<size_t>(j)] =
        std::exp(alpha[n - 1][j] + beta[n - 1][j] - log_z);
  }
  grads->d_start.data[static_cast<size_t>(labels[0])] -= 1.0;
  grads->d_end.data[static_cast<size_t>(labels[n - 1])] -= 1.0;
  return nll;
}

std::vector<int> crf_viterbi(const Tensor& emissions, const CrfParams& params) {
  int n = emissions.rows();
  int k = emissions.cols();
  std::vector<double> score(k), next(k);
  std::vector<std::vector<int>> back(n, std::vector<int>(k, 0));
  for (int j = 0; j < k; ++j) {
    score[j] = params.start.data[static_cast<size_t>(j)] + emissions.at(0, j);
  }
  for (int t = 1; t < n; ++t) {
    for (int j = 0; j < k; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      int best_i = 0;
      for (int i = 0; i < k; ++i) {  // ascending order keeps ties at lowest index
        double s = score[i] + params.transitions.at(i, j);
        if (s > best) {
          best = s;
          best_i = i;
        }
      }
      next[j] = best + emissions.at(t, j);
      back[t][j] = best_i;
    }
    score.swap(next);
  }
  for (int j = 0; j < k; ++j) score[j] += params.end.data[static_cast<size_t>(j)];
  int best_last = 0;
  for (int j = 1; j < k; ++j) {
    if (score[j] > score[best_last]) best_last = j;
  }
  std::vector<int> path(n);
  path[n - 1] = best_last;
  for (int t = n - 1; t > 0; --t) path[t - 1] = back[t][path[t]];
  return path;
}

}  // namespace tocgen::nn
