#include "tocgen/nn/lstm.hpp"

#include <cmath>

#include "eigen_util.hpp"
#include "tocgen/errors.hpp"

namespace tocgen::nn {

LstmCell::LstmCell(int in_dim_, int units_, Rng& rng)
    : in_dim(in_dim_),
      units(units_),
      w({in_dim_, 4 * units_}),
      u({units_, 4 * units_}),
      b({4 * units_}),
      gw({in_dim_, 4 * units_}),
      gu({units_, 4 * units_}),
      gb({4 * units_}) {
  init_glorot_uniform(w, in_dim_, 4 * units_, rng);
  init_orthogonal(u, rng);
  for (int j = units_; j < 2 * units_; ++j) b.data[static_cast<size_t>(j)] = 1.0;
}

std::vector<ParamRef> LstmCell::params(const std::string& prefix) {
  return {{prefix + ".w", &w, &gw}, {prefix + ".u", &u, &gu}, {prefix + ".b", &b, &gb}};
}

namespace {

inline double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

Tensor lstm_forward(const LstmCell& cell, const Tensor& seq, double recurrent_dropout,
                    bool train, Rng* rng, LstmTrace* trace) {
  int n = seq.rows();
  int u = cell.units;
  if (seq.cols() != cell.in_dim) {
    throw DataError("lstm: input dim " + std::to_string(seq.cols()) + " != " +
                    std::to_string(cell.in_dim));
  }

  Tensor x_w({n, 4 * u});
  mat(x_w).noalias() = mat(seq) * mat(cell.w);
  mat(x_w).rowwise() += vec(cell.b).transpose();

  Tensor rec_mask({u});
  std::fill(rec_mask.data.begin(), rec_mask.data.end(), 1.0);
  if (train && recurrent_dropout > 0.0 && rng) {
    double keep = 1.0 - recurrent_dropout;
    for (double& v : rec_mask.data) v = rng->bernoulli(keep) ? 1.0 / keep : 0.0;
  }

  Tensor h({n + 1, u}), c({n + 1, u});
  Tensor gi({n, u}), gf({n, u}), gg({n, u}), go({n, u}), tc({n, u});
  Eigen::VectorXd h_used(u), pre(4 * u);
  for (int t = 0; t < n; ++t) {
    for (int j = 0; j < u; ++j) h_used(j) = h.at(t, j) * rec_mask.data[static_cast<size_t>(j)];
    pre = ECMap(x_w.data.data() + static_cast<size_t>(t) * 4 * u, 1, 4 * u).transpose();
    pre.noalias() += mat(cell.u).transpose() * h_used;
    for (int j = 0; j < u; ++j) {
      double i_g = sigmoid(pre(j));
      double f_g = sigmoid(pre(u + j));
      double g_g = std::tanh(pre(2 * u + j));
      double o_g = sigmoid(pre(3 * u + j));
      double c_t = f_g * c.at(t, j) + i_g * g_g;
      double tanh_c = std::tanh(c_t);
      gi.at(t, j) = i_g;
      gf.at(t, j) = f_g;
      gg.at(t, j) = g_g;
      go.at(t, j) = o_g;
      tc.at(t, j) = tanh_c;
      c.at(t + 1, j) = c_t;
      h.at(t + 1, j) = o_g * tanh_c;
    }
  }

  Tensor out({n, u});
  std::copy(h.data.begin() + u, h.data.end(), out.data.begin());
  if (trace) {
    trace->h = std::move(h);
    trace->c = std::move(c);
    trace->i = std::move(gi);
    trace->f = std::move(gf);
    trace->g = std::move(gg);
    trace->o = std::move(go);
    trace->tanh_c = std::move(tc);
    trace->x_w = std::move(x_w);
    trace->rec_mask = std::move(rec_mask);
    trace->input = &seq;
  }
  return out;
}

Tensor lstm_backward(LstmCell& cell, const LstmTrace& trace, const Tensor& d_h_out) {
  int n = d_h_out.rows();
  int u = cell.units;
  const Tensor& seq = *trace.input;

  Tensor d_pre_all({n, 4 * u});
  Eigen::VectorXd d_h(u), d_c(u), d_h_rec(u);
  d_h.setZero();
  d_c.setZero();
  for (int t = n - 1; t >= 0; --t) {
    for (int j = 0; j < u; ++j) d_h(j) += d_h_out.at(t, j);
    for (int j = 0; j < u; ++j) {
      double i_g = trace.i.at(t, j), f_g = trace.f.at(t, j);
      double g_g = trace.g.at(t, j), o_g = trace.o.at(t, j);
      double tanh_c = trace.tanh_c.at(t, j);
      double dc = d_c(j) + d_h(j) * o_g * (1.0 - tanh_c * tanh_c);
      double d_o = d_h(j) * tanh_c;
      double d_f = dc * trace.c.at(t, j);
      double d_i = dc * g_g;
      double d_g = dc * i_g;
      d_pre_all.at(t, j) = d_i * i_g * (1.0 - i_g);
      d_pre_all.at(t, u + j) = d_f * f_g * (1.0 - f_g);
      d_pre_all.at(t, 2 * u + j) = d_g * (1.0 - g_g * g_g);
      d_pre_all.at(t, 3 * u + j) = d_o * o_g * (1.0 - o_g);
      d_c(j) = dc * f_g;
    }
    // dU uses the dropout-masked h that actually entered the recurrence
    ECMap d_pre_row(d_pre_all.data.data() + static_cast<size_t>(t) * 4 * u, 1, 4 * u);
    d_h_rec.noalias() = mat(cell.u) * d_pre_row.transpose();
    for (int j = 0; j < u; ++j) {
      double masked_h = trace.h.at(t, j) * trace.rec_mask.data[static_cast<size_t>(j)];
      for (int k = 0; k < 4 * u; ++k) {
        cell.gu.at(j, k) += masked_h * d_pre_all.at(t, k);
      }
      d_h(j) = d_h_rec(j) * trace.rec_mask.data[static_cast<size_t>(j)];
    }
  }
  mat(cell.gw).noalias() += mat(seq).transpose() * mat(d_pre_all);
  vec(cell.gb) += mat(d_pre_all).colwise().sum();
  Tensor d_x({n, cell.in_dim});
  mat(d_x).noalias() = mat(d_pre_all) * mat(cell.w).transpose();
  return d_x;
}

BiLstm::BiLstm(int in_dim, int units, double recurrent_dropout_, Rng& rng)
    : fwd(in_dim, units, rng), bwd(in_dim, units, rng),
      recurrent_dropout(recurrent_dropout_) {}

namespace {

Tensor reverse_rows(const Tensor& x) {
  Tensor out({x.rows(), x.cols()});
  for (int i = 0; i < x.rows(); ++i) {
    std::copy_n(x.data.begin() + static_cast<size_t>(i) * x.cols(), x.cols(),
                out.data.begin() + static_cast<size_t>(x.rows() - 1 - i) * x.cols());
  }
  return out;
}

}  // namespace

Tensor BiLstm::forward(const Tensor& seq, bool train, Rng* rng, Cache* cache) const {
  int n = seq.rows();
  int u = fwd.units;
  Tensor reversed = reverse_rows(seq);
  LstmTrace local_f, local_b;
  LstmTrace* tf = cache ? &cache->fwd : &local_f;
  LstmTrace* tb = cache ? &cache->bwd : &local_b;
  if (cache) cache->reversed_input = std::move(reversed);
  const Tensor& rev = cache ? cache->reversed_input : reversed;

  Tensor h_f = lstm_forward(fwd, seq, recurrent_dropout, train, rng,
                            cache ? tf : nullptr);
  Tensor h_b = lstm_forward(bwd, rev, recurrent_dropout, train, rng,
                            cache ? tb : nullptr);
  Tensor out({n, 2 * u});
  for (int t = 0; t < n; ++t) {
    std::copy_n(h_f.data.begin() + static_cast<size_t>(t) * u, u,
                out.data.begin() + static_cast<size_t>(t) * 2 * u);
    std::copy_n(h_b.data.begin() + static_cast<size_t>(n - 1 - t) * u, u,
                out.data.begin() + static_cast<size_t>(t) * 2 * u + u);
  }
  return out;
}

Tensor BiLstm::backward(const Cache& cache, const Tensor& d_out) {
  int n = d_out.rows();
  int u = fwd.units;
  Tensor d_f({n, u}), d_b({n, u});
  for (int t = 0; t < n; ++t) {
    std::copy_n(d_out.data.begin() + static_cast<size_t>(t) * 2 * u, u,
                d_f.data.begin() + static_cast<size_t>(t) * u);
    std::copy_n(d_out.data.begin() + static_cast<size_t>(t) * 2 * u + u, u,
                d_b.data.begin() + static_cast<size_t>(n - 1 - t) * u);
  }
  Tensor d_seq = lstm_backward(fwd, cache.fwd, d_f);
  Tensor d_rev = lstm_backward(bwd, cache.bwd, d_b);
  for (int t = 0; t < n; ++t) {
    const double* src = d_rev.data.data() + static_cast<size_t>(n - 1 - t) * d_seq.cols();
    double* dst = d_seq.data.data() + static_cast<size_t>(t) * d_seq.cols();
    for (int j = 0; j < d_seq.cols(); ++j) dst[j] += src[j];
  }
  return d_seq;
}

std::vector<ParamRef> BiLstm::params(const std::string& prefix) {
  std::vector<ParamRef> out = fwd.params(prefix + ".fwd");
  for (auto& p : bwd.params(prefix + ".bwd")) out.push_back(p);
  return out;
}

}  // namespace tocgen::nn
