#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcull/error.hpp"
#include "relcull/pairgeom.hpp"
#include "relcull/rng.hpp"
#include "relcull/vdnet.hpp"

namespace relcull {

// ---------------------------------------------------------------------------
// Types
// ---------------------------------------------------------------------------

/// Precomputed proposal features plus gold annotations for one image. Ordered
/// pairs absent from gold_relations count as background.
struct ProposalBatch {
  MatrixXd features;  // k x D
  std::vector<NormBox> gold_boxes;
  std::vector<int> gold_classes;
  std::vector<std::vector<int>> gold_attributes;      // sorted ids per proposal
  std::map<std::pair<int, int>, int> gold_relations;  // (i, j), i != j -> predicate id

  int k() const { return static_cast<int>(features.rows()); }
};

struct RelHeadDims {
  int feature_dim = 0;
  int n_obj_classes = 0;
  int n_attr_classes = 0;
  int n_rel_classes = 0;  // real predicates; a background class is appended
  int attr_hidden = 0;
  int rel_hidden = 0;
};

/// Linear heads over shared proposal features:
///   LOC_i  = W_loc f_i + b_loc
///   CLS_i  = W_cls f_i + b_cls
///   ATT_i  = W_attr2 (W_attr1 [CLS_i, f_i] + b_attr1) + b_attr2
///   N_i    = W_R1 f_i + b_R1
///   R_ij   = W_R2 (N_i + N_j) + b_R2          (i != j; diagonal masked)
/// The additive fusion makes R_ij == R_ji for every parameter setting.
struct RelHeadParams {
  RelHeadDims dims;
  MatrixXd W_loc;    // 4 x D
  VectorXd b_loc;
  MatrixXd W_cls;    // C_obj x D
  VectorXd b_cls;
  MatrixXd W_attr1;  // H_a x (C_obj + D)
  VectorXd b_attr1;
  MatrixXd W_attr2;  // C_attr x H_a
  VectorXd b_attr2;
  MatrixXd W_R1;     // H_r x D
  VectorXd b_R1;
  MatrixXd W_R2;     // (C_rel + 1) x H_r
  VectorXd b_R2;

  int background_class() const { return dims.n_rel_classes; }
};

inline RelHeadParams init_relheads(const RelHeadDims& dims, std::uint64_t seed) {
  if (dims.feature_dim < 1 || dims.n_obj_classes < 1 || dims.n_attr_classes < 1 ||
      dims.n_rel_classes < 1 || dims.attr_hidden < 1 || dims.rel_hidden < 1) {
    throw DataError("init_relheads: all dimensions must be >= 1");
  }
  RelHeadParams p;
  p.dims = dims;
  Rng rng(seed);
  auto glorot = [&](Eigen::Index rows, Eigen::Index cols) {
    MatrixXd m(rows, cols);
    detail::glorot_uniform(m, rng);
    return m;
  };
  p.W_loc = glorot(4, dims.feature_dim);
  p.b_loc = VectorXd::Zero(4);
  p.W_cls = glorot(dims.n_obj_classes, dims.feature_dim);
  p.b_cls = VectorXd::Zero(dims.n_obj_classes);
  p.W_attr1 = glorot(dims.attr_hidden, dims.n_obj_classes + dims.feature_dim);
  p.b_attr1 = VectorXd::Zero(dims.attr_hidden);
  p.W_attr2 = glorot(dims.n_attr_classes, dims.attr_hidden);
  p.b_attr2 = VectorXd::Zero(dims.n_attr_classes);
  p.W_R1 = glorot(dims.rel_hidden, dims.feature_dim);
  p.b_R1 = VectorXd::Zero(dims.rel_hidden);
  p.W_R2 = glorot(dims.n_rel_classes + 1, dims.rel_hidden);
  p.b_R2 = VectorXd::Zero(dims.n_rel_classes + 1);
  return p;
}

// ---------------------------------------------------------------------------
// Forward
// ---------------------------------------------------------------------------

struct HeadsOutput {
  MatrixXd loc;  // k x 4
  MatrixXd cls;  // k x C_obj
  MatrixXd att;  // k x C_attr
  MatrixXd rel;  // (k*k) x (C_rel + 1); row i*k + j, diagonal rows zeroed

  Eigen::Index rel_row(int i, int j, int k) const { return static_cast<Eigen::Index>(i) * k + j; }
};

namespace relheads_detail {

struct ForwardCache {
  MatrixXd u;   // [CLS, F] concatenation
  MatrixXd a1;  // attr hidden
  MatrixXd n;   // k x H_r
};

inline HeadsOutput forward(const RelHeadParams& p, const MatrixXd& features,
                           ForwardCache* cache) {
  const Eigen::Index k = features.rows();
  if (k < 2) throw DataError("heads_forward: need at least 2 proposals");
  if (features.cols() != p.dims.feature_dim) {
    throw DataError("heads_forward: feature dimensionality mismatch");
  }
  HeadsOutput out;
  out.loc = (features * p.W_loc.transpose()).rowwise() + p.b_loc.transpose();
  out.cls = (features * p.W_cls.transpose()).rowwise() + p.b_cls.transpose();
  MatrixXd u(k, p.dims.n_obj_classes + p.dims.feature_dim);
  u.leftCols(p.dims.n_obj_classes) = out.cls;
  u.rightCols(p.dims.feature_dim) = features;
  MatrixXd a1 = (u * p.W_attr1.transpose()).rowwise() + p.b_attr1.transpose();
  out.att = (a1 * p.W_attr2.transpose()).rowwise() + p.b_attr2.transpose();
  MatrixXd n = (features * p.W_R1.transpose()).rowwise() + p.b_R1.transpose();
  out.rel = MatrixXd::Zero(k * k, p.dims.n_rel_classes + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const VectorXd s = n.row(i).transpose() + n.row(j).transpose();
      out.rel.row(i * k + j) = (p.W_R2 * s + p.b_R2).transpose();
    }
  }
  if (cache) {
    cache->u = std::move(u);
    cache->a1 = std::move(a1);
    cache->n = std::move(n);
  }
  return out;
}

}  // namespace relheads_detail

inline HeadsOutput heads_forward(const RelHeadParams& p, const MatrixXd& features) {
  return relheads_detail::forward(p, features, nullptr);
}

// ---------------------------------------------------------------------------
// Loss and gradients
// ---------------------------------------------------------------------------

struct LossWeights {
  double loc = 1.0;
  double cls = 1.0;
  double attr = 1.0;
  double rel = 1.0;

  void validate() const {
    if (loc < 0 || cls < 0 || attr < 0 || rel < 0) {
      throw DataError("LossWeights: weights must be non-negative");
    }
  }
};

struct RelHeadGrads {
  MatrixXd W_loc, W_cls, W_attr1, W_attr2, W_R1, W_R2;
  VectorXd b_loc, b_cls, b_attr1, b_attr2, b_R1, b_R2;

  static RelHeadGrads zeros_like(const RelHeadParams& p) {
    RelHeadGrads g;
    g.W_loc = MatrixXd::Zero(p.W_loc.rows(), p.W_loc.cols());
    g.W_cls = MatrixXd::Zero(p.W_cls.rows(), p.W_cls.cols());
    g.W_attr1 = MatrixXd::Zero(p.W_attr1.rows(), p.W_attr1.cols());
    g.W_attr2 = MatrixXd::Zero(p.W_attr2.rows(), p.W_attr2.cols());
    g.W_R1 = MatrixXd::Zero(p.W_R1.rows(), p.W_R1.cols());
    g.W_R2 = MatrixXd::Zero(p.W_R2.rows(), p.W_R2.cols());
    g.b_loc = VectorXd::Zero(p.b_loc.size());
    g.b_cls = VectorXd::Zero(p.b_cls.size());
    g.b_attr1 = VectorXd::Zero(p.b_attr1.size());
    g.b_attr2 = VectorXd::Zero(p.b_attr2.size());
    g.b_R1 = VectorXd::Zero(p.b_R1.size());
    g.b_R2 = VectorXd::Zero(p.b_R2.size());
    return g;
  }
};

/// Decomposed loss terms; total = w_loc*loc + w_cls*cls + w_attr*attr +
/// w_rel*rel, each term computed as an unweighted mean.
struct HeadsLoss {
  double total = 0.0;
  double loc = 0.0, cls = 0.0, attr = 0.0, rel = 0.0;
};

namespace relheads_detail {

inline void validate_batch(const RelHeadParams& p, const ProposalBatch& batch) {
  const int k = batch.k();
  if (k < 2) throw DataError("heads_loss: need at least 2 proposals");
  if (static_cast<int>(batch.gold_boxes.size()) != k ||
      static_cast<int>(batch.gold_classes.size()) != k ||
      static_cast<int>(batch.gold_attributes.size()) != k) {
    throw DataError("heads_loss: gold annotation arity mismatch");
  }
  for (int c : batch.gold_classes) {
    if (c < 0 || c >= p.dims.n_obj_classes) throw DataError("heads_loss: gold class out of range");
  }
  for (const auto& attrs : batch.gold_attributes) {
    for (int a : attrs) {
      if (a < 0 || a >= p.dims.n_attr_classes) {
        throw DataError("heads_loss: gold attribute out of range");
      }
    }
  }
  for (const auto& [pair, pred] : batch.gold_relations) {
    if (pair.first == pair.second || pair.first < 0 || pair.first >= k || pair.second < 0 ||
        pair.second >= k) {
      throw DataError("heads_loss: bad relation pair index");
    }
    if (pred < 0 || pred >= p.dims.n_rel_classes) {
      throw DataError("heads_loss: gold relation predicate out of range");
    }
  }
}

}  // namespace relheads_detail

inline std::pair<HeadsLoss, RelHeadGrads> heads_loss(const RelHeadParams& p,
                                                     const ProposalBatch& batch,
                                                     const LossWeights& w) {
  w.validate();
  relheads_detail::validate_batch(p, batch);
  const Eigen::Index k = batch.features.rows();
  const double kd = static_cast<double>(k);

  relheads_detail::ForwardCache cache;
  HeadsOutput out = relheads_detail::forward(p, batch.features, &cache);
  RelHeadGrads g = RelHeadGrads::zeros_like(p);
  HeadsLoss loss;

  // Box regression: mean over proposals of the squared L2 distance on
  // normalized coordinates.
  MatrixXd gold(k, 4);
  for (Eigen::Index i = 0; i < k; ++i) {
    const NormBox& b = batch.gold_boxes[static_cast<std::size_t>(i)];
    gold.row(i) << b.x, b.y, b.w, b.h;
  }
  MatrixXd loc_diff = out.loc - gold;
  loss.loc = loc_diff.squaredNorm() / kd;
  MatrixXd dloc = (2.0 * w.loc / kd) * loc_diff;

  // Class head: mean softmax cross-entropy.
  MatrixXd dcls(k, p.dims.n_obj_classes);
  loss.cls = detail::softmax_ce(out.cls, batch.gold_classes, p.dims.n_obj_classes, &dcls);

  // Attribute head: multi-label binary cross-entropy with logits, averaged
  // over every (proposal, attribute) cell.
  const double att_cells = kd * static_cast<double>(p.dims.n_attr_classes);
  MatrixXd datt(k, p.dims.n_attr_classes);
  loss.attr = 0.0;
  {
    std::vector<char> hot(static_cast<std::size_t>(p.dims.n_attr_classes));
    for (Eigen::Index i = 0; i < k; ++i) {
      std::fill(hot.begin(), hot.end(), 0);
      for (int a : batch.gold_attributes[static_cast<std::size_t>(i)]) {
        hot[static_cast<std::size_t>(a)] = 1;
      }
      for (Eigen::Index c = 0; c < p.dims.n_attr_classes; ++c) {
        const double a = out.att(i, c);
        const double y = hot[static_cast<std::size_t>(c)] ? 1.0 : 0.0;
        // Stable BCE-with-logits: max(a,0) - a*y + log(1 + exp(-|a|)).
        loss.attr += std::max(a, 0.0) - a * y + std::log1p(std::exp(-std::abs(a)));
        const double sigma = 1.0 / (1.0 + std::exp(-a));
        datt(i, c) = (sigma - y) / att_cells;
      }
    }
    loss.attr /= att_cells;
  }

  // Relation head: softmax cross-entropy over all k(k-1) ordered pairs with
  // the background class for unannotated pairs.
  const double n_pairs = kd * (kd - 1.0);
  const int n_rel = p.dims.n_rel_classes + 1;
  MatrixXd drel = MatrixXd::Zero(k * k, n_rel);
  loss.rel = 0.0;
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      auto it = batch.gold_relations.find({static_cast<int>(i), static_cast<int>(j)});
      const int target = it == batch.gold_relations.end() ? p.background_class() : it->second;
      const Eigen::Index row = i * k + j;
      const double mx = out.rel.row(row).maxCoeff();
      double sum = 0.0;
      for (int c = 0; c < n_rel; ++c) sum += std::exp(out.rel(row, c) - mx);
      loss.rel += std::log(sum) - (out.rel(row, target) - mx);
      for (int c = 0; c < n_rel; ++c) {
        drel(row, c) = std::exp(out.rel(row, c) - mx) / sum / n_pairs;
      }
      drel(row, target) -= 1.0 / n_pairs;
    }
  }
  loss.rel /= n_pairs;

  loss.total = w.loc * loss.loc + w.cls * loss.cls + w.attr * loss.attr + w.rel * loss.rel;

  // Backward. dcls carries its own 1/k; apply the weights here.
  MatrixXd datt_w = w.attr * datt;
  g.W_attr2 = datt_w.transpose() * cache.a1;
  g.b_attr2 = datt_w.colwise().sum().transpose();
  MatrixXd da1 = datt_w * p.W_attr2;
  g.W_attr1 = da1.transpose() * cache.u;
  g.b_attr1 = da1.colwise().sum().transpose();
  MatrixXd du = da1 * p.W_attr1;

  MatrixXd dcls_total = w.cls * dcls + du.leftCols(p.dims.n_obj_classes);
  g.W_cls = dcls_total.transpose() * batch.features;
  g.b_cls = dcls_total.colwise().sum().transpose();

  g.W_loc = dloc.transpose() * batch.features;
  g.b_loc = dloc.colwise().sum().transpose();

  MatrixXd dn = MatrixXd::Zero(k, p.dims.rel_hidden);
  for (Eigen::Index i = 0; i < k; ++i) {
    for (Eigen::Index j = 0; j < k; ++j) {
      if (i == j) continue;
      const Eigen::Index row = i * k + j;
      const VectorXd dr = w.rel * drel.row(row).transpose();
      const VectorXd s = cache.n.row(i).transpose() + cache.n.row(j).transpose();
      g.W_R2 += dr * s.transpose();
      g.b_R2 += dr;
      const VectorXd ds = p.W_R2.transpose() * dr;
      dn.row(i) += ds.transpose();
      dn.row(j) += ds.transpose();
    }
  }
  g.W_R1 = dn.transpose() * batch.features;
  g.b_R1 = dn.colwise().sum().transpose();

  return {loss, std::move(g)};
}

inline double heads_batch_loss(const RelHeadParams& p, const ProposalBatch& batch,
                               const LossWeights& w) {
  // Loss-only evaluation for finite differencing; shares the code path above.
  return heads_loss(p, batch, w).first.total;
}

// ---------------------------------------------------------------------------
// Parameter traversal, gradient check, training
// ---------------------------------------------------------------------------

namespace relheads_detail {

inline std::vector<detail::ParamView> param_views(RelHeadParams& p) {
  return {
      {"W_loc", p.W_loc.data(), static_cast<std::size_t>(p.W_loc.size())},
      {"b_loc", p.b_loc.data(), static_cast<std::size_t>(p.b_loc.size())},
      {"W_cls", p.W_cls.data(), static_cast<std::size_t>(p.W_cls.size())},
      {"b_cls", p.b_cls.data(), static_cast<std::size_t>(p.b_cls.size())},
      {"W_attr1", p.W_attr1.data(), static_cast<std::size_t>(p.W_attr1.size())},
      {"b_attr1", p.b_attr1.data(), static_cast<std::size_t>(p.b_attr1.size())},
      {"W_attr2", p.W_attr2.data(), static_cast<std::size_t>(p.W_attr2.size())},
      {"b_attr2", p.b_attr2.data(), static_cast<std::size_t>(p.b_attr2.size())},
      {"W_R1", p.W_R1.data(), static_cast<std::size_t>(p.W_R1.size())},
      {"b_R1", p.b_R1.data(), static_cast<std::size_t>(p.b_R1.size())},
      {"W_R2", p.W_R2.data(), static_cast<std::size_t>(p.W_R2.size())},
      {"b_R2", p.b_R2.data(), static_cast<std::size_t>(p.b_R2.size())},
  };
}

inline std::vector<detail::ParamView> grad_views(RelHeadGrads& g) {
  return {
      {"W_loc", g.W_loc.data(), static_cast<std::size_t>(g.W_loc.size())},
      {"b_loc", g.b_loc.data(), static_cast<std::size_t>(g.b_loc.size())},
      {"W_cls", g.W_cls.data(), static_cast<std::size_t>(g.W_cls.size())},
      {"b_cls", g.b_cls.data(), static_cast<std::size_t>(g.b_cls.size())},
      {"W_attr1", g.W_attr1.data(), static_cast<std::size_t>(g.W_attr1.size())},
      {"b_attr1", g.b_attr1.data(), static_cast<std::size_t>(g.b_attr1.size())},
      {"W_attr2", g.W_attr2.data(), static_cast<std::size_t>(g.W_attr2.size())},
      {"b_attr2", g.b_attr2.data(), static_cast<std::size_t>(g.b_attr2.size())},
      {"W_R1", g.W_R1.data(), static_cast<std::size_t>(g.W_R1.size())},
      {"b_R1", g.b_R1.data(), static_cast<std::size_t>(g.b_R1.size())},
      {"W_R2", g.W_R2.data(), static_cast<std::size_t>(g.W_R2.size())},
      {"b_R2", g.b_R2.data(), static_cast<std::size_t>(g.b_R2.size())},
  };
}

}  // namespace relheads_detail

inline double heads_grad_check(const RelHeadParams& params, const ProposalBatch& batch,
                               const LossWeights& w, double epsilon,
                               std::size_t max_checked = 10000, std::uint64_t subsample_seed = 0) {
  if (epsilon <= 0.0) throw DataError("heads_grad_check: epsilon must be > 0");
  auto [loss, grads] = heads_loss(params, batch, w);
  (void)loss;
  RelHeadParams work = params;
  auto pv = relheads_detail::param_views(work);
  auto gv = relheads_detail::grad_views(grads);
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
    const double lp = heads_batch_loss(work, batch, w);
    *slot = saved - epsilon;
    const double lm = heads_batch_loss(work, batch, w);
    *slot = saved;
    const double numeric = (lp - lm) / (2.0 * epsilon);
    const double analytic = gv[k].data[off];
    max_rel = std::max(max_rel, std::abs(analytic - numeric) /
                                    std::max(std::abs(analytic) + std::abs(numeric), 1e-6));
  }
  return max_rel;
}

struct RelTrainConfig {
  double learning_rate = 1e-2;
  int epochs = 10;
  std::uint64_t seed = 0;
  LossWeights weights;
};

struct RelTrainResult {
  RelHeadParams params;
  std::vector<double> epoch_loss;
};

/// Plain seeded SGD over the batch stream; the batch order is reshuffled each
/// epoch. Deterministic for a fixed seed.
inline RelTrainResult heads_train(RelHeadParams params, const std::vector<ProposalBatch>& batches,
                                  const RelTrainConfig& cfg) {
  if (batches.empty()) throw DataError("heads_train: empty batch stream");
  if (cfg.learning_rate <= 0.0) throw DataError("heads_train: learning_rate must be > 0");
  cfg.weights.validate();
  RelTrainResult result;
  Rng rng(cfg.seed);
  std::vector<std::size_t> order(batches.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    rng.shuffle(order);
    double loss_sum = 0.0;
    for (std::size_t idx : order) {
      auto [loss, grads] = heads_loss(params, batches[idx], cfg.weights);
      loss_sum += loss.total;
      auto pv = relheads_detail::param_views(params);
      auto gv = relheads_detail::grad_views(grads);
      for (std::size_t k = 0; k < pv.size(); ++k) {
        for (std::size_t j = 0; j < pv[k].size; ++j) {
          pv[k].data[j] -= cfg.learning_rate * gv[k].data[j];
        }
      }
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(batches.size()));
  }
  result.params = std::move(params);
  return result;
}

// ---------------------------------------------------------------------------
// Proposal batch file format (JSONL)
// ---------------------------------------------------------------------------

inline void save_proposal_batches(const std::vector<ProposalBatch>& batches,
                                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  for (const auto& b : batches) {
    nlohmann::json feats = nlohmann::json::array();
    for (Eigen::Index i = 0; i < b.features.rows(); ++i) {
      for (Eigen::Index j = 0; j < b.features.cols(); ++j) feats.push_back(b.features(i, j));
    }
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& box : b.gold_boxes) {
      boxes.push_back(nlohmann::json::array({box.x, box.y, box.w, box.h}));
    }
    nlohmann::json rels = nlohmann::json::array();
    for (const auto& [pair, pred] : b.gold_relations) {
      rels.push_back(nlohmann::json::array({pair.first, pair.second, pred}));
    }
    out << nlohmann::json{{"k", b.k()},
                          {"D", b.features.cols()},
                          {"features", std::move(feats)},
                          {"boxes", std::move(boxes)},
                          {"classes", b.gold_classes},
                          {"attributes", b.gold_attributes},
                          {"relations", std::move(rels)}}
               .dump()
        << "\n";
  }
}

inline std::vector<ProposalBatch> load_proposal_batches(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::vector<ProposalBatch> batches;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string where = path + ": line " + std::to_string(line_no);
    const int k = static_cast<int>(detail::require_int(j, "k", where));
    const int d = static_cast<int>(detail::require_int(j, "D", where));
    const nlohmann::json& feats = detail::require_field(j, "features", where);
    if (!feats.is_array() || static_cast<int>(feats.size()) != k * d) {
      throw SchemaError(where + ": field 'features' must hold k*D row-major floats");
    }
    ProposalBatch b;
    b.features.resize(k, d);
    for (int i = 0; i < k; ++i) {
      for (int c = 0; c < d; ++c) {
        b.features(i, c) = feats[static_cast<std::size_t>(i * d + c)].get<double>();
      }
    }
    for (const auto& box : detail::require_field(j, "boxes", where)) {
      if (!box.is_array() || box.size() != 4) {
        throw SchemaError(where + ": box entries must be [x, y, w, h]");
      }
      b.gold_boxes.push_back(NormBox{box[0].get<double>(), box[1].get<double>(),
                                     box[2].get<double>(), box[3].get<double>()});
    }
    for (const auto& c : detail::require_field(j, "classes", where)) {
      b.gold_classes.push_back(c.get<int>());
    }
    for (const auto& attrs : detail::require_field(j, "attributes", where)) {
      std::vector<int> a;
      for (const auto& x : attrs) a.push_back(x.get<int>());
      b.gold_attributes.push_back(std::move(a));
    }
    for (const auto& r : detail::require_field(j, "relations", where)) {
      if (!r.is_array() || r.size() != 3) {
        throw SchemaError(where + ": relation entries must be [i, j, predicate]");
      }
      b.gold_relations[{r[0].get<int>(), r[1].get<int>()}] = r[2].get<int>();
    }
    batches.push_back(std::move(b));
  }
  return batches;
}

}  // namespace relcull
