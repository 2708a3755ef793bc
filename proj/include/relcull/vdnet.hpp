#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcull/embed.hpp"
#include "relcull/error.hpp"
#include "relcull/pairgeom.hpp"
#include "relcull/rng.hpp"
#include "relcull/sgdata.hpp"

namespace relcull {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

struct VDNetConfig {
  int word_proj_dim = 64;
  int hidden_dim = 128;
  double learning_rate = 1e-3;
  int epochs = 20;
  int batch_size = 256;
  std::uint64_t seed = 0;
  double bn_momentum = 0.9;
  double bn_epsilon = 1e-5;
  double sgd_momentum = 0.9;
  bool bn_identity = false;  // diagnostic: skip normalization, keep the affine

  void validate() const {
    if (word_proj_dim < 1 || hidden_dim < 1) throw DataError("VDNetConfig: dims must be >= 1");
    if (learning_rate <= 0.0) throw DataError("VDNetConfig: learning_rate must be > 0");
    if (bn_momentum <= 0.0 || bn_momentum >= 1.0) {
      throw DataError("VDNetConfig: bn_momentum must lie in (0, 1)");
    }
    if (batch_size < 2) throw DataError("VDNetConfig: batch_size must be >= 2");
    if (epochs < 0) throw DataError("VDNetConfig: epochs must be >= 0");
  }
};

struct BatchNormState {
  VectorXd gamma, beta, running_mean, running_var;

  static BatchNormState identity_init(int dim) {
    BatchNormState s;
    s.gamma = VectorXd::Ones(dim);
    s.beta = VectorXd::Zero(dim);
    s.running_mean = VectorXd::Zero(dim);
    s.running_var = VectorXd::Ones(dim);
    return s;
  }
};

/// One training/evaluation sample: label embeddings of both entities, both
/// normalized box four-tuples, the 12-d joint geometry, and the gold
/// predicate id.
struct PairSample {
  std::vector<double> v_s, v_o;
  NormBox p_s, p_o;
  PairGeometry p_j{};
  int target = -1;
};

/// Weights of the discriminator:
///   v_s -> ReLU(W_s v_s + b_s),  v_o -> ReLU(W_o v_o + b_o)
///   x = [proj_s, p_s(4), proj_o, p_o(4), p_j(12)]
///   h = ReLU(bn_1(W_1 x + b_1))
///   logits = bn_2(W_2 h + b_2)
struct VDNetParams {
  VDNetConfig config;
  int embed_dim = 0;
  int n_predicates = 0;
  MatrixXd W_s, W_o;  // word_proj_dim x embed_dim
  VectorXd b_s, b_o;
  MatrixXd W_1;  // hidden_dim x concat_dim
  VectorXd b_1;
  BatchNormState bn_1;
  MatrixXd W_2;  // n_predicates x hidden_dim
  VectorXd b_2;
  BatchNormState bn_2;

  int concat_dim() const { return 2 * config.word_proj_dim + 4 + 4 + 12; }
};

struct PredicateAccuracy {
  double accuracy = 0.0;
  std::int64_t support = 0;
};

/// Held-out accuracy per predicate; zero-support predicates are omitted.
struct AccuracyReport {
  std::map<int, PredicateAccuracy> per_predicate;
  double overall_accuracy = 0.0;
};

enum class ForwardMode { train, eval };

// ---------------------------------------------------------------------------
// Initialization
// ---------------------------------------------------------------------------

namespace detail {

inline void glorot_uniform(MatrixXd& w, Rng& rng) {
  const double limit = std::sqrt(6.0 / static_cast<double>(w.rows() + w.cols()));
  for (Eigen::Index r = 0; r < w.rows(); ++r) {
    for (Eigen::Index c = 0; c < w.cols(); ++c) {
      w(r, c) = rng.uniform(-limit, limit);
    }
  }
}

}  // namespace detail

inline VDNetParams init_vdnet(const VDNetConfig& config, int embed_dim, int n_predicates) {
  config.validate();
  if (embed_dim < 1) throw DataError("init_vdnet: embed_dim must be >= 1");
  if (n_predicates < 2) throw DataError("init_vdnet: need at least 2 predicate classes");
  VDNetParams p;
  p.config = config;
  p.embed_dim = embed_dim;
  p.n_predicates = n_predicates;
  Rng rng(config.seed);
  p.W_s.resize(config.word_proj_dim, embed_dim);
  p.W_o.resize(config.word_proj_dim, embed_dim);
  p.W_1.resize(config.hidden_dim, p.concat_dim());
  p.W_2.resize(n_predicates, config.hidden_dim);
  detail::glorot_uniform(p.W_s, rng);
  detail::glorot_uniform(p.W_o, rng);
  detail::glorot_uniform(p.W_1, rng);
  detail::glorot_uniform(p.W_2, rng);
  p.b_s = VectorXd::Zero(config.word_proj_dim);
  p.b_o = VectorXd::Zero(config.word_proj_dim);
  p.b_1 = VectorXd::Zero(config.hidden_dim);
  p.b_2 = VectorXd::Zero(n_predicates);
  p.bn_1 = BatchNormState::identity_init(config.hidden_dim);
  p.bn_2 = BatchNormState::identity_init(n_predicates);
  return p;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

namespace detail {

struct BatchInputs {
  MatrixXd Vs, Vo;  // m x embed_dim
  MatrixXd Ps, Po;  // m x 4
  MatrixXd Pj;      // m x 12
  std::vector<int> targets;
};

inline BatchInputs assemble_batch(const VDNetParams& p, std::span<const PairSample> batch) {
  const auto m = static_cast<Eigen::Index>(batch.size());
  BatchInputs in;
  in.Vs.resize(m, p.embed_dim);
  in.Vo.resize(m, p.embed_dim);
  in.Ps.resize(m, 4);
  in.Po.resize(m, 4);
  in.Pj.resize(m, 12);
  in.targets.resize(batch.size());
  for (Eigen::Index i = 0; i < m; ++i) {
    const PairSample& s = batch[static_cast<std::size_t>(i)];
    if (static_cast<int>(s.v_s.size()) != p.embed_dim ||
        static_cast<int>(s.v_o.size()) != p.embed_dim) {
      throw DataError("vdnet: sample embedding length does not match embed_dim");
    }
    for (int k = 0; k < p.embed_dim; ++k) {
      in.Vs(i, k) = s.v_s[static_cast<std::size_t>(k)];
      in.Vo(i, k) = s.v_o[static_cast<std::size_t>(k)];
    }
    in.Ps.row(i) << s.p_s.x, s.p_s.y, s.p_s.w, s.p_s.h;
    in.Po.row(i) << s.p_o.x, s.p_o.y, s.p_o.w, s.p_o.h;
    for (int k = 0; k < 12; ++k) in.Pj(i, k) = s.p_j[static_cast<std::size_t>(k)];
    in.targets[static_cast<std::size_t>(i)] = s.target;
  }
  return in;
}

struct BnCache {
  VectorXd mean, var, istd;
  MatrixXd xhat;
};

/// Batch-statistics normalization (training path). Pure: running stats are
/// not touched here. Per-column scalar loops keep the reduction order fixed.
inline MatrixXd bn_forward_train(const MatrixXd& x, const BatchNormState& bn, double eps,
                                 bool identity, BnCache& cache) {
  const Eigen::Index m = x.rows(), n = x.cols();
  cache.mean.resize(n);
  cache.var.resize(n);
  cache.istd.resize(n);
  if (identity) {
    cache.mean.setZero();
    cache.var.setOnes();
    cache.istd.setOnes();
    cache.xhat = x;
  } else {
    cache.xhat.resize(m, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double mu = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) mu += x(i, j);
      mu /= static_cast<double>(m);
      double var = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double d = x(i, j) - mu;
        var += d * d;
      }
      var /= static_cast<double>(m);  // biased, as in standard batchnorm
      const double istd = 1.0 / std::sqrt(var + eps);
      cache.mean(j) = mu;
      cache.var(j) = var;
      cache.istd(j) = istd;
      for (Eigen::Index i = 0; i < m; ++i) cache.xhat(i, j) = (x(i, j) - mu) * istd;
    }
  }
  MatrixXd y(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < m; ++i) {
      y(i, j) = bn.gamma(j) * cache.xhat(i, j) + bn.beta(j);
    }
  }
  return y;
}

inline MatrixXd bn_forward_eval(const MatrixXd& x, const BatchNormState& bn, double eps,
                                bool identity) {
  const Eigen::Index m = x.rows(), n = x.cols();
  MatrixXd y(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double scale = identity ? 1.0 : 1.0 / std::sqrt(bn.running_var(j) + eps);
    const double shift = identity ? 0.0 : bn.running_mean(j);
    for (Eigen::Index i = 0; i < m; ++i) {
      y(i, j) = bn.gamma(j) * (x(i, j) - shift) * scale + bn.beta(j);
    }
  }
  return y;
}

struct ForwardCache {
  BatchInputs in;
  MatrixXd As, Ao;  // pre-ReLU projections
  MatrixXd Zs, Zo;  // post-ReLU projections
  MatrixXd X;       // concatenated features
  MatrixXd H1;      // pre-bn hidden
  BnCache bn1;
  MatrixXd Y1;  // post-bn hidden
  MatrixXd Z1;  // post-ReLU hidden
  MatrixXd H2;  // pre-bn logits
  BnCache bn2;
  MatrixXd logits;
};

inline MatrixXd relu(const MatrixXd& x) { return x.cwiseMax(0.0); }

/// Train-mode forward with batch statistics. Pure in the parameters.
inline void forward_train_cached(const VDNetParams& p, BatchInputs in, ForwardCache& c) {
  c.in = std::move(in);
  const auto m = c.in.Vs.rows();
  c.As = (c.in.Vs * p.W_s.transpose()).rowwise() + p.b_s.transpose();
  c.Ao = (c.in.Vo * p.W_o.transpose()).rowwise() + p.b_o.transpose();
  c.Zs = relu(c.As);
  c.Zo = relu(c.Ao);
  const int pd = p.config.word_proj_dim;
  c.X.resize(m, p.concat_dim());
  c.X.block(0, 0, m, pd) = c.Zs;
  c.X.block(0, pd, m, 4) = c.in.Ps;
  c.X.block(0, pd + 4, m, pd) = c.Zo;
  c.X.block(0, 2 * pd + 4, m, 4) = c.in.Po;
  c.X.block(0, 2 * pd + 8, m, 12) = c.in.Pj;
  c.H1 = (c.X * p.W_1.transpose()).rowwise() + p.b_1.transpose();
  c.Y1 = bn_forward_train(c.H1, p.bn_1, p.config.bn_epsilon, p.config.bn_identity, c.bn1);
  c.Z1 = relu(c.Y1);
  c.H2 = (c.Z1 * p.W_2.transpose()).rowwise() + p.b_2.transpose();
  c.logits = bn_forward_train(c.H2, p.bn_2, p.config.bn_epsilon, p.config.bn_identity, c.bn2);
}

inline MatrixXd forward_eval(const VDNetParams& p, const BatchInputs& in) {
  const auto m = in.Vs.rows();
  MatrixXd zs = relu(((in.Vs * p.W_s.transpose()).rowwise() + p.b_s.transpose()).eval());
  MatrixXd zo = relu(((in.Vo * p.W_o.transpose()).rowwise() + p.b_o.transpose()).eval());
  const int pd = p.config.word_proj_dim;
  MatrixXd x(m, p.concat_dim());
  x.block(0, 0, m, pd) = zs;
  x.block(0, pd, m, 4) = in.Ps;
  x.block(0, pd + 4, m, pd) = zo;
  x.block(0, 2 * pd + 4, m, 4) = in.Po;
  x.block(0, 2 * pd + 8, m, 12) = in.Pj;
  MatrixXd h1 = (x * p.W_1.transpose()).rowwise() + p.b_1.transpose();
  MatrixXd z1 =
      relu(bn_forward_eval(h1, p.bn_1, p.config.bn_epsilon, p.config.bn_identity).eval());
  MatrixXd h2 = (z1 * p.W_2.transpose()).rowwise() + p.b_2.transpose();
  return bn_forward_eval(h2, p.bn_2, p.config.bn_epsilon, p.config.bn_identity);
}

inline void update_running_stats(BatchNormState& bn, const BnCache& cache, double momentum) {
  bn.running_mean = momentum * bn.running_mean + (1.0 - momentum) * cache.mean;
  bn.running_var = momentum * bn.running_var + (1.0 - momentum) * cache.var;
}

}  // namespace detail

/// Forward pass over a batch. Train mode normalizes with batch statistics and
/// advances the running statistics; eval mode normalizes with running
/// statistics and mutates nothing, so eval outputs are a pure per-sample
/// function of the parameters.
inline MatrixXd forward(VDNetParams& params, std::span<const PairSample> batch,
                        ForwardMode mode) {
  if (batch.empty()) throw DataError("forward: empty batch");
  detail::BatchInputs in = detail::assemble_batch(params, batch);
  if (mode == ForwardMode::eval) return detail::forward_eval(params, in);
  if (batch.size() < 2) {
    throw DataError("forward: train mode needs a batch of at least 2 samples");
  }
  detail::ForwardCache cache;
  detail::forward_train_cached(params, std::move(in), cache);
  if (!params.config.bn_identity) {
    detail::update_running_stats(params.bn_1, cache.bn1, params.config.bn_momentum);
    detail::update_running_stats(params.bn_2, cache.bn2, params.config.bn_momentum);
  }
  return cache.logits;
}

// ---------------------------------------------------------------------------
// Loss and exact gradients
// ---------------------------------------------------------------------------

struct VDNetGrads {
  MatrixXd W_s, W_o, W_1, W_2;
  VectorXd b_s, b_o, b_1, b_2;
  VectorXd gamma_1, beta_1, gamma_2, beta_2;

  static VDNetGrads zeros_like(const VDNetParams& p) {
    VDNetGrads g;
    g.W_s = MatrixXd::Zero(p.W_s.rows(), p.W_s.cols());
    g.W_o = MatrixXd::Zero(p.W_o.rows(), p.W_o.cols());
    g.W_1 = MatrixXd::Zero(p.W_1.rows(), p.W_1.cols());
    g.W_2 = MatrixXd::Zero(p.W_2.rows(), p.W_2.cols());
    g.b_s = VectorXd::Zero(p.b_s.size());
    g.b_o = VectorXd::Zero(p.b_o.size());
    g.b_1 = VectorXd::Zero(p.b_1.size());
    g.b_2 = VectorXd::Zero(p.b_2.size());
    g.gamma_1 = VectorXd::Zero(p.bn_1.gamma.size());
    g.beta_1 = VectorXd::Zero(p.bn_1.beta.size());
    g.gamma_2 = VectorXd::Zero(p.bn_2.gamma.size());
    g.beta_2 = VectorXd::Zero(p.bn_2.beta.size());
    return g;
  }
};

namespace detail {

/// Mean softmax cross-entropy and its gradient w.r.t. the logits.
inline double softmax_ce(const MatrixXd& logits, const std::vector<int>& targets,
                         int n_classes, MatrixXd* dlogits) {
  const auto m = logits.rows();
  double loss = 0.0;
  if (dlogits) dlogits->resize(m, logits.cols());
  for (Eigen::Index i = 0; i < m; ++i) {
    const int t = targets[static_cast<std::size_t>(i)];
    if (t < 0 || t >= n_classes) {
      throw DataError("vdnet: target id " + std::to_string(t) + " out of range");
    }
    const double mx = logits.row(i).maxCoeff();
    const Eigen::ArrayXd shifted = logits.row(i).transpose().array() - mx;
    const double sum = shifted.exp().sum();
    loss += std::log(sum) - shifted(t);
    if (dlogits) {
      dlogits->row(i) = (shifted.exp() / sum).matrix().transpose() / static_cast<double>(m);
      (*dlogits)(i, t) -= 1.0 / static_cast<double>(m);
    }
  }
  return loss / static_cast<double>(m);
}

/// Backward through batch normalization with batch statistics (the full
/// gradient, including the dependence of mean and variance on x).
inline MatrixXd bn_backward(const MatrixXd& dy, const MatrixXd& x, const BnCache& cache,
                            const BatchNormState& bn, bool identity, VectorXd& dgamma,
                            VectorXd& dbeta) {
  const Eigen::Index m = x.rows(), n = x.cols();
  dgamma.resize(n);
  dbeta.resize(n);
  MatrixXd dx(m, n);
  const double md = static_cast<double>(m);
  for (Eigen::Index j = 0; j < n; ++j) {
    double dg = 0.0, db = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      dg += dy(i, j) * cache.xhat(i, j);
      db += dy(i, j);
    }
    dgamma(j) = dg;
    dbeta(j) = db;
    if (identity) {
      for (Eigen::Index i = 0; i < m; ++i) dx(i, j) = dy(i, j) * bn.gamma(j);
      continue;
    }
    const double mu = cache.mean(j);
    const double istd = cache.istd(j);
    double dvar = 0.0, sum_dxhat = 0.0, sum_centered = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double dxhat = dy(i, j) * bn.gamma(j);
      const double centered = x(i, j) - mu;
      dvar += dxhat * centered;
      sum_dxhat += dxhat;
      sum_centered += centered;
    }
    dvar *= -0.5 * istd * istd * istd;
    const double dmean = -istd * sum_dxhat + dvar * (-2.0 / md) * sum_centered;
    for (Eigen::Index i = 0; i < m; ++i) {
      const double dxhat = dy(i, j) * bn.gamma(j);
      dx(i, j) = dxhat * istd + dvar * 2.0 * (x(i, j) - mu) / md + dmean / md;
    }
  }
  return dx;
}

inline double loss_and_grads_cached(const VDNetParams& p, const ForwardCache& c,
                                    VDNetGrads& g) {
  MatrixXd dlogits;
  const double loss = softmax_ce(c.logits, c.in.targets, p.n_predicates, &dlogits);

  MatrixXd dh2 = bn_backward(dlogits, c.H2, c.bn2, p.bn_2, p.config.bn_identity, g.gamma_2,
                             g.beta_2);
  g.W_2 = dh2.transpose() * c.Z1;
  g.b_2 = dh2.colwise().sum().transpose();
  MatrixXd dz1 = dh2 * p.W_2;
  MatrixXd dy1 = dz1.cwiseProduct((c.Y1.array() > 0.0).cast<double>().matrix());
  MatrixXd dh1 =
      bn_backward(dy1, c.H1, c.bn1, p.bn_1, p.config.bn_identity, g.gamma_1, g.beta_1);
  g.W_1 = dh1.transpose() * c.X;
  g.b_1 = dh1.colwise().sum().transpose();
  MatrixXd dx = dh1 * p.W_1;

  const int pd = p.config.word_proj_dim;
  const auto m = c.X.rows();
  MatrixXd dzs = dx.block(0, 0, m, pd);
  MatrixXd dzo = dx.block(0, pd + 4, m, pd);
  MatrixXd das = dzs.cwiseProduct((c.As.array() > 0.0).cast<double>().matrix());
  MatrixXd dao = dzo.cwiseProduct((c.Ao.array() > 0.0).cast<double>().matrix());
  g.W_s = das.transpose() * c.in.Vs;
  g.b_s = das.colwise().sum().transpose();
  g.W_o = dao.transpose() * c.in.Vo;
  g.b_o = dao.colwise().sum().transpose();
  return loss;
}

}  // namespace detail

/// Mean cross-entropy over the batch (train-mode batch statistics) together
/// with exact analytic gradients for every parameter, both batchnorm
/// transforms included. Pure: neither weights nor running statistics change.
inline std::pair<double, VDNetGrads> loss_and_grads(const VDNetParams& params,
                                                    std::span<const PairSample> batch) {
  if (batch.size() < 2) throw DataError("loss_and_grads: need a batch of at least 2 samples");
  detail::ForwardCache cache;
  detail::forward_train_cached(params, detail::assemble_batch(params, batch), cache);
  VDNetGrads g = VDNetGrads::zeros_like(params);
  const double loss = detail::loss_and_grads_cached(params, cache, g);
  return {loss, std::move(g)};
}

/// Train-mode loss only (used by the finite-difference harness).
inline double batch_loss(const VDNetParams& params, std::span<const PairSample> batch) {
  detail::ForwardCache cache;
  detail::forward_train_cached(params, detail::assemble_batch(params, batch), cache);
  return detail::softmax_ce(cache.logits, cache.in.targets, params.n_predicates, nullptr);
}

// ---------------------------------------------------------------------------
// Parameter traversal (SGD, finite differences, serialization)
// ---------------------------------------------------------------------------

namespace detail {

struct ParamView {
  const char* name;
  double* data;
  std::size_t size;
};

inline std::vector<ParamView> param_views(VDNetParams& p) {
  return {
      {"W_s", p.W_s.data(), static_cast<std::size_t>(p.W_s.size())},
      {"b_s", p.b_s.data(), static_cast<std::size_t>(p.b_s.size())},
      {"W_o", p.W_o.data(), static_cast<std::size_t>(p.W_o.size())},
      {"b_o", p.b_o.data(), static_cast<std::size_t>(p.b_o.size())},
      {"W_1", p.W_1.data(), static_cast<std::size_t>(p.W_1.size())},
      {"b_1", p.b_1.data(), static_cast<std::size_t>(p.b_1.size())},
      {"bn_1.gamma", p.bn_1.gamma.data(), static_cast<std::size_t>(p.bn_1.gamma.size())},
      {"bn_1.beta", p.bn_1.beta.data(), static_cast<std::size_t>(p.bn_1.beta.size())},
      {"W_2", p.W_2.data(), static_cast<std::size_t>(p.W_2.size())},
      {"b_2", p.b_2.data(), static_cast<std::size_t>(p.b_2.size())},
      {"bn_2.gamma", p.bn_2.gamma.data(), static_cast<std::size_t>(p.bn_2.gamma.size())},
      {"bn_2.beta", p.bn_2.beta.data(), static_cast<std::size_t>(p.bn_2.beta.size())},
  };
}

inline std::vector<ParamView> grad_views(VDNetGrads& g) {
  return {
      {"W_s", g.W_s.data(), static_cast<std::size_t>(g.W_s.size())},
      {"b_s", g.b_s.data(), static_cast<std::size_t>(g.b_s.size())},
      {"W_o", g.W_o.data(), static_cast<std::size_t>(g.W_o.size())},
      {"b_o", g.b_o.data(), static_cast<std::size_t>(g.b_o.size())},
      {"W_1", g.W_1.data(), static_cast<std::size_t>(g.W_1.size())},
      {"b_1", g.b_1.data(), static_cast<std::size_t>(g.b_1.size())},
      {"bn_1.gamma", g.gamma_1.data(), static_cast<std::size_t>(g.gamma_1.size())},
      {"bn_1.beta", g.beta_1.data(), static_cast<std::size_t>(g.beta_1.size())},
      {"W_2", g.W_2.data(), static_cast<std::size_t>(g.W_2.size())},
      {"b_2", g.b_2.data(), static_cast<std::size_t>(g.b_2.size())},
      {"bn_2.gamma", g.gamma_2.data(), static_cast<std::size_t>(g.gamma_2.size())},
      {"bn_2.beta", g.beta_2.data(), static_cast<std::size_t>(g.beta_2.size())},
  };
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Training
// ---------------------------------------------------------------------------

struct TrainResult {
  VDNetParams params;
  std::vector<double> epoch_loss;
};

/// Mini-batch SGD with momentum. Per epoch the sample order is reshuffled
/// from the given seed; a trailing remainder smaller than batch_size is used
/// when it still has >= 2 samples (batch statistics need that) and dropped
/// otherwise. Single-threaded with a fixed reduction order, so a fixed seed
/// reproduces the trained parameters exactly.
inline TrainResult train_vdnet(VDNetParams params, std::span<const PairSample> train_set,
                               std::uint64_t shuffle_seed) {
  if (train_set.empty()) throw DataError("train_vdnet: empty training set");
  const VDNetConfig& cfg = params.config;
  TrainResult result;
  VDNetGrads velocity = VDNetGrads::zeros_like(params);
  Rng rng(shuffle_seed);
  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::vector<PairSample> batch;
  batch.reserve(static_cast<std::size_t>(cfg.batch_size));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    std::int64_t n_used = 0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t end = std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      if (end - start < 2) break;  // drop a size-1 remainder
      batch.clear();
      for (std::size_t i = start; i < end; ++i) batch.push_back(train_set[order[i]]);

      detail::ForwardCache cache;
      detail::forward_train_cached(params, detail::assemble_batch(params, batch), cache);
      if (!cfg.bn_identity) {
        detail::update_running_stats(params.bn_1, cache.bn1, cfg.bn_momentum);
        detail::update_running_stats(params.bn_2, cache.bn2, cfg.bn_momentum);
      }
      VDNetGrads grads = VDNetGrads::zeros_like(params);
      const double loss = detail::loss_and_grads_cached(params, cache, grads);
      loss_sum += loss * static_cast<double>(end - start);
      n_used += static_cast<std::int64_t>(end - start);

      auto pv = detail::param_views(params);
      auto gv = detail::grad_views(grads);
      auto vv = detail::grad_views(velocity);
      for (std::size_t k = 0; k < pv.size(); ++k) {
        for (std::size_t j = 0; j < pv[k].size; ++j) {
          vv[k].data[j] = cfg.sgd_momentum * vv[k].data[j] + gv[k].data[j];
          pv[k].data[j] -= cfg.learning_rate * vv[k].data[j];
        }
      }
    }
    result.epoch_loss.push_back(n_used > 0 ? loss_sum / static_cast<double>(n_used) : 0.0);
  }
  result.params = std::move(params);
  return result;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

inline int argmax_row(const MatrixXd& logits, Eigen::Index row) {
  int best = 0;
  double best_v = logits(row, 0);
  for (Eigen::Index c = 1; c < logits.cols(); ++c) {
    if (logits(row, c) > best_v) {
      best_v = logits(row, c);
      best = static_cast<int>(c);
    }
  }
  return best;
}

/// Eval-mode accuracy per gold predicate. overall_accuracy equals the
/// support-weighted mean of the per-predicate accuracies.
inline AccuracyReport evaluate(const VDNetParams& params, std::span<const PairSample> test_set) {
  if (test_set.empty()) throw DataError("evaluate: empty test set");
  std::map<int, std::pair<std::int64_t, std::int64_t>> hits;  // target -> (correct, support)
  constexpr std::size_t kChunk = 2048;
  for (std::size_t start = 0; start < test_set.size(); start += kChunk) {
    const std::size_t end = std::min(test_set.size(), start + kChunk);
    auto chunk = test_set.subspan(start, end - start);
    MatrixXd logits = detail::forward_eval(params, detail::assemble_batch(params, chunk));
    for (Eigen::Index i = 0; i < logits.rows(); ++i) {
      const int gold = chunk[static_cast<std::size_t>(i)].target;
      auto& h = hits[gold];
      h.second++;
      if (argmax_row(logits, i) == gold) h.first++;
    }
  }
  AccuracyReport report;
  std::int64_t correct = 0, total = 0;
  for (const auto& [pred, h] : hits) {
    report.per_predicate[pred] =
        PredicateAccuracy{static_cast<double>(h.first) / static_cast<double>(h.second), h.second};
    correct += h.first;
    total += h.second;
  }
  report.overall_accuracy = total > 0 ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
  return report;
}

/// Softmax probabilities of a single sample in eval mode.
inline std::vector<double> predict_proba(const VDNetParams& params, const PairSample& sample) {
  MatrixXd logits = detail::forward_eval(params, detail::assemble_batch(params, {&sample, 1}));
  const double mx = logits.row(0).maxCoeff();
  Eigen::ArrayXd e = (logits.row(0).transpose().array() - mx).exp();
  const double sum = e.sum();
  std::vector<double> out(static_cast<std::size_t>(logits.cols()));
  for (Eigen::Index c = 0; c < logits.cols(); ++c) out[static_cast<std::size_t>(c)] = e(c) / sum;
  return out;
}

// ---------------------------------------------------------------------------
// Gradient verification
// ---------------------------------------------------------------------------

/// Compare analytic gradients against central finite differences. When the
/// network has more than max_checked parameters, a seeded random subsample of
/// coordinates is checked instead of all of them. Returns the maximum
/// relative error, |a - n| / max(|a| + |n|, 1e-6).
inline double grad_check(const VDNetParams& params, std::span<const PairSample> batch,
                         double epsilon, std::size_t max_checked = 10000,
                         std::uint64_t subsample_seed = 0) {
  if (epsilon <= 0.0) throw DataError("grad_check: epsilon must be > 0");
  auto [loss, grads] = loss_and_grads(params, batch);
  (void)loss;

  VDNetParams work = params;
  auto pv = detail::param_views(work);
  auto gv = detail::grad_views(grads);
  std::size_t total = 0;
  for (const auto& v : pv) total += v.size;

  std::vector<std::size_t> flat;
  if (total <= max_checked) {
    flat.resize(total);
    for (std::size_t i = 0; i < total; ++i) flat[i] = i;
  } else {
    Rng rng(subsample_seed);
    std::vector<std::size_t> all(total);
    for (std::size_t i = 0; i < total; ++i) all[i] = i;
    for (std::size_t i = 0; i < max_checked; ++i) {
      const std::size_t j = i + rng.uniform_index(total - i);
      std::swap(all[i], all[j]);
    }
    flat.assign(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(max_checked));
  }

  double max_rel = 0.0;
  for (std::size_t idx : flat) {
    std::size_t k = 0, off = idx;
    while (off >= pv[k].size) {
      off -= pv[k].size;
      ++k;
    }
    double* slot = pv[k].data + off;
    const double saved = *slot;
    *slot = saved + epsilon;
    const double lp = batch_loss(work, batch);
    *slot = saved - epsilon;
    const double lm = batch_loss(work, batch);
    *slot = saved;
    const double numeric = (lp - lm) / (2.0 * epsilon);
    const double analytic = gv[k].data[off];
    const double rel = std::abs(analytic - numeric) /
                       std::max(std::abs(analytic) + std::abs(numeric), 1e-6);
    max_rel = std::max(max_rel, rel);
  }
  return max_rel;
}

// ---------------------------------------------------------------------------
// Sample construction from a dataset
// ---------------------------------------------------------------------------

/// One PairSample per triplet, in image order. Label embeddings come from
/// mean-pooled phrase vectors of the object labels; tokens missing from the
/// table degrade to the zero vector.
inline std::vector<PairSample> build_pair_samples(const Dataset& ds, const EmbeddingTable& table) {
  std::vector<std::vector<double>> label_vec(static_cast<std::size_t>(ds.object_vocab.size()));
  for (int i = 0; i < ds.object_vocab.size(); ++i) {
    label_vec[static_cast<std::size_t>(i)] = phrase_vector(table, ds.object_vocab.label(i)).values;
  }
  std::vector<PairSample> samples;
  samples.reserve(static_cast<std::size_t>(ds.n_triplets()));
  for (const auto& im : ds.images) {
    for (const auto& t : im.triplets) {
      const Instance* s = im.find_instance(t.subject_id);
      const Instance* o = im.find_instance(t.object_id);
      if (!s || !o) throw DataError("build_pair_samples: dangling triplet");
      PairSample ps;
      ps.v_s = label_vec[static_cast<std::size_t>(s->object_label)];
      ps.v_o = label_vec[static_cast<std::size_t>(o->object_label)];
      ps.p_s = normalize_box(s->bbox, im.width, im.height);
      ps.p_o = normalize_box(o->bbox, im.width, im.height);
      ps.p_j = pair_embedding(ps.p_s, ps.p_o);
      ps.target = t.predicate;
      samples.push_back(std::move(ps));
    }
  }
  return samples;
}

/// Adapter: score an instance pair with the trained discriminator, returning
/// softmax probabilities over the predicate vocabulary.
inline std::function<std::vector<double>(const ImageRecord&, const Instance&, const Instance&)>
make_vdnet_pair_scorer(const VDNetParams& params, const EmbeddingTable& table,
                       const Vocab& object_vocab) {
  auto label_vec = std::make_shared<std::vector<std::vector<double>>>();
  label_vec->resize(static_cast<std::size_t>(object_vocab.size()));
  for (int i = 0; i < object_vocab.size(); ++i) {
    (*label_vec)[static_cast<std::size_t>(i)] = phrase_vector(table, object_vocab.label(i)).values;
  }
  VDNetParams snapshot = params;
  return [snapshot = std::move(snapshot), label_vec](const ImageRecord& im, const Instance& s,
                                                     const Instance& o) {
    PairSample ps;
    ps.v_s = (*label_vec)[static_cast<std::size_t>(s.object_label)];
    ps.v_o = (*label_vec)[static_cast<std::size_t>(o.object_label)];
    ps.p_s = normalize_box(s.bbox, im.width, im.height);
    ps.p_o = normalize_box(o.bbox, im.width, im.height);
    ps.p_j = pair_embedding(ps.p_s, ps.p_o);
    ps.target = 0;
    return predict_proba(snapshot, ps);
  };
}

// ---------------------------------------------------------------------------
// Checkpoints and loss history
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json matrix_to_json(const MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline MatrixXd matrix_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array() || j.empty()) throw SchemaError("checkpoint: bad matrix '" + name + "'");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    if (static_cast<Eigen::Index>(j[static_cast<std::size_t>(r)].size()) != cols) {
      throw SchemaError("checkpoint: ragged matrix '" + name + "'");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = j[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

inline nlohmann::json vector_to_json(const VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

inline VectorXd vector_from_json(const nlohmann::json& j, const std::string& name) {
  if (!j.is_array()) throw SchemaError("checkpoint: bad vector '" + name + "'");
  VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace detail

inline void save_checkpoint(const VDNetParams& p, const std::string& path) {
  nlohmann::json j{
      {"format", "vdnet-checkpoint"},
      {"version", 1},
      {"config",
       {{"word_proj_dim", p.config.word_proj_dim},
        {"hidden_dim", p.config.hidden_dim},
        {"learning_rate", p.config.learning_rate},
        {"epochs", p.config.epochs},
        {"batch_size", p.config.batch_size},
        {"seed", p.config.seed},
        {"bn_momentum", p.config.bn_momentum},
        {"bn_epsilon", p.config.bn_epsilon},
        {"sgd_momentum", p.config.sgd_momentum},
        {"bn_identity", p.config.bn_identity}}},
      {"embed_dim", p.embed_dim},
      {"n_predicates", p.n_predicates},
      {"W_s", detail::matrix_to_json(p.W_s)},
      {"b_s", detail::vector_to_json(p.b_s)},
      {"W_o", detail::matrix_to_json(p.W_o)},
      {"b_o", detail::vector_to_json(p.b_o)},
      {"W_1", detail::matrix_to_json(p.W_1)},
      {"b_1", detail::vector_to_json(p.b_1)},
      {"bn_1",
       {{"gamma", detail::vector_to_json(p.bn_1.gamma)},
        {"beta", detail::vector_to_json(p.bn_1.beta)},
        {"running_mean", detail::vector_to_json(p.bn_1.running_mean)},
        {"running_var", detail::vector_to_json(p.bn_1.running_var)}}},
      {"W_2", detail::matrix_to_json(p.W_2)},
      {"b_2", detail::vector_to_json(p.b_2)},
      {"bn_2",
       {{"gamma", detail::vector_to_json(p.bn_2.gamma)},
        {"beta", detail::vector_to_json(p.bn_2.beta)},
        {"running_mean", detail::vector_to_json(p.bn_2.running_mean)},
        {"running_var", detail::vector_to_json(p.bn_2.running_var)}}}};
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << j.dump() << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

inline VDNetParams load_checkpoint(const std::string& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  if (detail::require_field(j, "format", path).get<std::string>() != "vdnet-checkpoint") {
    throw DataError(path + ": not a vdnet checkpoint");
  }
  if (detail::require_int(j, "version", path) != 1) {
    throw DataError(path + ": unsupported checkpoint version");
  }
  VDNetParams p;
  const nlohmann::json& c = detail::require_field(j, "config", path);
  p.config.word_proj_dim = static_cast<int>(detail::require_int(c, "word_proj_dim", path));
  p.config.hidden_dim = static_cast<int>(detail::require_int(c, "hidden_dim", path));
  p.config.learning_rate = detail::require_number(c, "learning_rate", path);
  p.config.epochs = static_cast<int>(detail::require_int(c, "epochs", path));
  p.config.batch_size = static_cast<int>(detail::require_int(c, "batch_size", path));
  p.config.seed = static_cast<std::uint64_t>(detail::require_int(c, "seed", path));
  p.config.bn_momentum = detail::require_number(c, "bn_momentum", path);
  p.config.bn_epsilon = detail::require_number(c, "bn_epsilon", path);
  p.config.sgd_momentum = detail::require_number(c, "sgd_momentum", path);
  p.config.bn_identity = detail::require_field(c, "bn_identity", path).get<bool>();
  p.embed_dim = static_cast<int>(detail::require_int(j, "embed_dim", path));
  p.n_predicates = static_cast<int>(detail::require_int(j, "n_predicates", path));
  p.W_s = detail::matrix_from_json(detail::require_field(j, "W_s", path), "W_s");
  p.b_s = detail::vector_from_json(detail::require_field(j, "b_s", path), "b_s");
  p.W_o = detail::matrix_from_json(detail::require_field(j, "W_o", path), "W_o");
  p.b_o = detail::vector_from_json(detail::require_field(j, "b_o", path), "b_o");
  p.W_1 = detail::matrix_from_json(detail::require_field(j, "W_1", path), "W_1");
  p.b_1 = detail::vector_from_json(detail::require_field(j, "b_1", path), "b_1");
  p.W_2 = detail::matrix_from_json(detail::require_field(j, "W_2", path), "W_2");
  p.b_2 = detail::vector_from_json(detail::require_field(j, "b_2", path), "b_2");
  auto load_bn = [&](const char* key) {
    const nlohmann::json& b = detail::require_field(j, key, path);
    BatchNormState s;
    s.gamma = detail::vector_from_json(detail::require_field(b, "gamma", path), key);
    s.beta = detail::vector_from_json(detail::require_field(b, "beta", path), key);
    s.running_mean = detail::vector_from_json(detail::require_field(b, "running_mean", path), key);
    s.running_var = detail::vector_from_json(detail::require_field(b, "running_var", path), key);
    return s;
  };
  p.bn_1 = load_bn("bn_1");
  p.bn_2 = load_bn("bn_2");
  if (p.W_1.cols() != p.concat_dim() || p.W_2.rows() != p.n_predicates) {
    throw DataError(path + ": checkpoint shapes are inconsistent with its config");
  }
  return p;
}

inline nlohmann::json accuracy_report_json(const AccuracyReport& r, const Vocab& predicate_vocab) {
  nlohmann::json per = nlohmann::json::object();
  for (const auto& [pred, acc] : r.per_predicate) {
    per[predicate_vocab.label(pred)] =
        nlohmann::json{{"accuracy", acc.accuracy}, {"support", acc.support}};
  }
  return nlohmann::json{{"overall_accuracy", r.overall_accuracy},
                        {"per_predicate", std::move(per)}};
}

/// Parse a report written by accuracy_report_json. Labels map onto dense ids
/// in sorted order; callers that only need the accuracy multiset (e.g. the
/// predictability curve) can ignore the returned labels.
inline std::pair<AccuracyReport, std::vector<std::string>> load_accuracy_report(
    const std::string& path) {
  const nlohmann::json j = detail::parse_json_file(path);
  AccuracyReport r;
  r.overall_accuracy = detail::require_number(j, "overall_accuracy", path);
  const nlohmann::json& per = detail::require_field(j, "per_predicate", path);
  std::vector<std::string> labels;
  for (const auto& [label, entry] : per.items()) labels.push_back(label);
  std::sort(labels.begin(), labels.end());
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const nlohmann::json& e = per.at(labels[i]);
    r.per_predicate[static_cast<int>(i)] =
        PredicateAccuracy{detail::require_number(e, "accuracy", path),
                          detail::require_int(e, "support", path)};
  }
  return {std::move(r), std::move(labels)};
}

inline void write_loss_history(const std::vector<double>& history, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "epoch,mean_loss\n";
  char buf[64];
  for (std::size_t i = 0; i < history.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", i, history[i]);
    out << buf;
  }
}

}  // namespace relcull
