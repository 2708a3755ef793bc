#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcull/embed.hpp"
#include "relcull/error.hpp"
#include "relcull/parallel.hpp"
#include "relcull/rng.hpp"
#include "relcull/sgdata.hpp"

namespace relcull {

/// Scores every predicate for an ordered instance pair of an image.
using Predictor =
    std::function<std::vector<double>(const ImageRecord&, const Instance&, const Instance&)>;

// ---------------------------------------------------------------------------
// Frequency baseline
// ---------------------------------------------------------------------------

/// Conditional predicate counts keyed by (subject class, object class).
struct FreqModel {
  std::map<std::pair<int, int>, std::map<int, std::int64_t>> counts;
  double smoothing_k = 0.0;
  int n_predicates = 0;
};

inline FreqModel fit_freq_baseline(const Dataset& train, double smoothing_k = 0.0) {
  if (smoothing_k < 0.0) throw DataError("fit_freq_baseline: smoothing_k must be >= 0");
  if (train.images.empty()) throw DataError("fit_freq_baseline: empty training set");
  FreqModel model;
  model.smoothing_k = smoothing_k;
  model.n_predicates = train.predicate_vocab.size();
  for (const auto& im : train.images) {
    std::unordered_map<std::int64_t, int> cls;
    for (const auto& inst : im.instances) cls[inst.instance_id] = inst.object_label;
    for (const auto& t : im.triplets) {
      model.counts[{cls.at(t.subject_id), cls.at(t.object_id)}][t.predicate]++;
    }
  }
  return model;
}

/// Add-k smoothed conditional distribution over predicates. An unseen class
/// pair with k = 0 backs off to the uniform distribution.
inline std::vector<double> freq_predict(const FreqModel& model, int subject_class,
                                        int object_class) {
  const int c = model.n_predicates;
  std::vector<double> probs(static_cast<std::size_t>(c), 0.0);
  if (c == 0) return probs;
  const auto it = model.counts.find({subject_class, object_class});
  std::int64_t total = 0;
  if (it != model.counts.end()) {
    for (const auto& [pred, n] : it->second) total += n;
  }
  const double denom = static_cast<double>(total) + model.smoothing_k * c;
  if (denom == 0.0) {
    std::fill(probs.begin(), probs.end(), 1.0 / c);
    return probs;
  }
  for (int p = 0; p < c; ++p) probs[static_cast<std::size_t>(p)] = model.smoothing_k / denom;
  if (it != model.counts.end()) {
    for (const auto& [pred, n] : it->second) {
      probs[static_cast<std::size_t>(pred)] =
          (static_cast<double>(n) + model.smoothing_k) / denom;
    }
  }
  return probs;
}

inline Predictor make_freq_predictor(FreqModel model) {
  return [model = std::move(model)](const ImageRecord&, const Instance& s, const Instance& o) {
    return freq_predict(model, s.object_label, o.object_label);
  };
}

// ---------------------------------------------------------------------------
// Recall@K evaluation
// ---------------------------------------------------------------------------

struct RecallResult {
  std::map<int, double> recall_at;  // K -> recall in [0, 1]
  std::int64_t n_gold = 0;
};

/// image_average: per-image recall averaged over images with gold triplets
/// (the scene-graph convention). micro_pooled: one global matched/gold ratio.
enum class RecallAggregation { image_average, micro_pooled };

namespace detail {

struct PairKey {
  std::int64_t subject_id, object_id;
  auto operator<=>(const PairKey&) const = default;
};

/// Rank (pair, predicate) candidates by score and count how many gold
/// triplets land in the top K. Ties break by (pair index, predicate id).
inline std::int64_t matched_in_top_k(const std::vector<std::vector<double>>& pair_scores,
                                     const std::vector<PairKey>& pairs,
                                     const std::vector<Triplet>& gold, int k) {
  struct Candidate {
    double score;
    int pair_idx;
    int pred;
  };
  std::vector<Candidate> cands;
  cands.reserve(pair_scores.size() * (pair_scores.empty() ? 0 : pair_scores[0].size()));
  for (std::size_t pi = 0; pi < pair_scores.size(); ++pi) {
    for (std::size_t p = 0; p < pair_scores[pi].size(); ++p) {
      cands.push_back(Candidate{pair_scores[pi][p], static_cast<int>(pi), static_cast<int>(p)});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.pair_idx != b.pair_idx) return a.pair_idx < b.pair_idx;
    return a.pred < b.pred;
  });
  std::set<std::pair<int, int>> top;  // (pair index, predicate)
  const std::size_t kk = std::min<std::size_t>(static_cast<std::size_t>(k), cands.size());
  for (std::size_t i = 0; i < kk; ++i) top.emplace(cands[i].pair_idx, cands[i].pred);

  std::map<PairKey, int> pair_index;
  for (std::size_t i = 0; i < pairs.size(); ++i) pair_index[pairs[i]] = static_cast<int>(i);
  std::int64_t matched = 0;
  for (const auto& g : gold) {
    auto it = pair_index.find(PairKey{g.subject_id, g.object_id});
    if (it != pair_index.end() && top.count({it->second, g.predicate})) ++matched;
  }
  return matched;
}

/// Per-image evaluation runs in parallel (the predictor must tolerate
/// concurrent calls); aggregation is sequential in image order, so results do
/// not depend on the thread count.
inline RecallResult eval_recall(const Predictor& predictor, const Dataset& test,
                                const std::vector<int>& ks, bool gold_pairs_only,
                                RecallAggregation agg) {
  for (int k : ks) {
    if (k <= 0) throw DataError("eval: K must be > 0");
  }
  std::vector<const ImageRecord*> images;
  for (const auto& im : test.images) {
    if (!im.triplets.empty()) images.push_back(&im);
  }
  std::vector<std::map<int, std::int64_t>> matched_per_image(images.size());
  parallel_for(images.size(), [&](std::size_t idx) {
    const ImageRecord& im = *images[idx];
    std::vector<PairKey> pairs;
    if (gold_pairs_only) {
      std::set<PairKey> seen;
      for (const auto& t : im.triplets) seen.insert(PairKey{t.subject_id, t.object_id});
      pairs.assign(seen.begin(), seen.end());
    } else {
      for (const auto& a : im.instances) {
        for (const auto& b : im.instances) {
          if (a.instance_id == b.instance_id) continue;
          pairs.push_back(PairKey{a.instance_id, b.instance_id});
        }
      }
    }
    std::vector<std::vector<double>> scores;
    scores.reserve(pairs.size());
    for (const auto& pk : pairs) {
      const Instance* s = im.find_instance(pk.subject_id);
      const Instance* o = im.find_instance(pk.object_id);
      if (!s || !o) throw DataError("eval: triplet references missing instance");
      scores.push_back(predictor(im, *s, *o));
    }
    for (int k : ks) {
      matched_per_image[idx][k] = matched_in_top_k(scores, pairs, im.triplets, k);
    }
  });

  std::map<int, double> recall_sum;
  std::map<int, std::int64_t> matched_sum;
  std::int64_t n_gold_total = 0;
  for (std::size_t idx = 0; idx < images.size(); ++idx) {
    const auto n_gold = static_cast<std::int64_t>(images[idx]->triplets.size());
    n_gold_total += n_gold;
    for (int k : ks) {
      recall_sum[k] +=
          static_cast<double>(matched_per_image[idx][k]) / static_cast<double>(n_gold);
      matched_sum[k] += matched_per_image[idx][k];
    }
  }
  RecallResult res;
  res.n_gold = n_gold_total;
  for (int k : ks) {
    if (agg == RecallAggregation::image_average) {
      res.recall_at[k] =
          !images.empty() ? recall_sum[k] / static_cast<double>(images.size()) : 0.0;
    } else {
      res.recall_at[k] =
          n_gold_total > 0 ? static_cast<double>(matched_sum[k]) / static_cast<double>(n_gold_total)
                           : 0.0;
    }
  }
  return res;
}

}  // namespace detail

/// PredDet: gold pair connections are given; rank predicates over them.
inline RecallResult eval_preddet(const Predictor& predictor, const Dataset& test,
                                 const std::vector<int>& ks,
                                 RecallAggregation agg = RecallAggregation::image_average) {
  return detail::eval_recall(predictor, test, ks, /*gold_pairs_only=*/true, agg);
}

/// PredCls: instances are given; rank predicates over all ordered pairs.
inline RecallResult eval_predcls(const Predictor& predictor, const Dataset& test,
                                 const std::vector<int>& ks,
                                 RecallAggregation agg = RecallAggregation::image_average) {
  return detail::eval_recall(predictor, test, ks, /*gold_pairs_only=*/false, agg);
}

inline nlohmann::json recall_to_json(const RecallResult& r) {
  nlohmann::json at = nlohmann::json::object();
  for (const auto& [k, v] : r.recall_at) at[std::to_string(k)] = v;
  return nlohmann::json{{"recall_at", std::move(at)}, {"n_gold", r.n_gold}};
}

// ---------------------------------------------------------------------------
// Distribution reports
// ---------------------------------------------------------------------------

struct LabelShare {
  int label_id = -1;
  std::int64_t count = 0;
  double share = 0.0;
};

namespace detail {

inline std::vector<LabelShare> shares_from_counts(const std::map<int, std::int64_t>& counts,
                                                  const Vocab& vocab) {
  std::int64_t total = 0;
  for (const auto& [id, n] : counts) total += n;
  std::vector<LabelShare> out;
  out.reserve(counts.size());
  for (const auto& [id, n] : counts) {
    out.push_back(LabelShare{id, n, total > 0 ? static_cast<double>(n) / static_cast<double>(total) : 0.0});
  }
  std::sort(out.begin(), out.end(), [&](const LabelShare& a, const LabelShare& b) {
    if (a.count != b.count) return a.count > b.count;
    return vocab.label(a.label_id) < vocab.label(b.label_id);
  });
  return out;
}

}  // namespace detail

/// Predicate shares in descending order; shares sum to 1 for non-empty data.
inline std::vector<LabelShare> label_distribution(const Dataset& ds) {
  std::map<int, std::int64_t> counts;
  for (const auto& im : ds.images) {
    for (const auto& t : im.triplets) counts[t.predicate]++;
  }
  return detail::shares_from_counts(counts, ds.predicate_vocab);
}

/// Predicate distribution restricted to triplets whose subject/object classes
/// match the given pair. Absent pair -> empty histogram.
inline std::vector<LabelShare> conditional_distribution(const Dataset& ds, int subject_class,
                                                        int object_class) {
  std::map<int, std::int64_t> counts;
  for (const auto& im : ds.images) {
    std::unordered_map<std::int64_t, int> cls;
    for (const auto& inst : im.instances) cls[inst.instance_id] = inst.object_label;
    for (const auto& t : im.triplets) {
      if (cls.at(t.subject_id) == subject_class && cls.at(t.object_id) == object_class) {
        counts[t.predicate]++;
      }
    }
  }
  return detail::shares_from_counts(counts, ds.predicate_vocab);
}

inline void write_distribution_csv(const std::vector<LabelShare>& shares, const Vocab& vocab,
                                   const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "label,count,share\n";
  char buf[64];
  for (const auto& s : shares) {
    std::snprintf(buf, sizeof(buf), ",%lld,%.17g\n", static_cast<long long>(s.count), s.share);
    out << vocab.label(s.label_id) << buf;
  }
}

// ---------------------------------------------------------------------------
// Synthetic dataset generator (testing oracle)
// ---------------------------------------------------------------------------

enum class SynthKind { above, left_of, contains, coin };

/// One predicate rule. Geometric rules label a constructed pair whose
/// geometry satisfies the rule; coin rules label an unconstrained pair by a
/// hidden seeded coin (n_outcomes = 1 emits the rule name itself, k > 1
/// emits "name#0".."name#k-1"). weight sets the rule's share of the
/// triplets generated per image.
struct SynthRule {
  std::string name;
  SynthKind kind = SynthKind::coin;
  int n_outcomes = 1;
  int weight = 1;
};

struct SynthSpec {
  int n_images = 0;
  int instances_per_image = 2;
  std::vector<SynthRule> rules;
  int class_vocab_size = 10;
  std::uint64_t seed = 0;
  double image_size = 1000.0;
};

inline bool synth_box_contains(const BBox& outer, const BBox& inner) {
  return outer.x <= inner.x && outer.y <= inner.y && outer.x + outer.w >= inner.x + inner.w &&
         outer.y + outer.h >= inner.y + inner.h && outer.w * outer.h > inner.w * inner.h;
}

/// Random images with random boxes and classes; one triplet per rule weight
/// unit per image. Geometric predicates hold by construction (and "above" /
/// "left_of" pairs are additionally axis-dominant and never containments, so
/// distinct geometric rules stay separable from geometry alone). Classes are
/// drawn from disjoint ranges for the geometric and coin rule groups, while
/// coin outcomes depend on nothing observable. Deterministic per seed.
inline Dataset gen_synthetic(const SynthSpec& spec) {
  if (spec.rules.empty()) throw DataError("gen_synthetic: need at least one rule");
  if (spec.instances_per_image < 2) {
    throw DataError("gen_synthetic: instances_per_image must be >= 2");
  }
  if (spec.class_vocab_size < 1) throw DataError("gen_synthetic: class_vocab_size must be >= 1");
  if (spec.n_images < 0) throw DataError("gen_synthetic: n_images must be >= 0");
  int total_weight = 0;
  bool has_geo = false, has_coin = false;
  for (const auto& r : spec.rules) {
    if (r.weight < 1) throw DataError("gen_synthetic: rule weight must be >= 1");
    if (r.kind == SynthKind::coin) {
      if (r.n_outcomes < 1) throw DataError("gen_synthetic: coin n_outcomes must be >= 1");
      has_coin = true;
    } else {
      has_geo = true;
    }
    total_weight += r.weight;
  }
  if (spec.instances_per_image < 2 * total_weight) {
    throw DataError("gen_synthetic: instances_per_image must cover 2 instances per rule "
                    "weight unit (need " +
                    std::to_string(2 * total_weight) + ")");
  }
  if (has_geo && has_coin && spec.class_vocab_size < 2) {
    throw DataError("gen_synthetic: mixed rule kinds need class_vocab_size >= 2");
  }
  if (spec.instances_per_image >= 10000) {
    throw DataError("gen_synthetic: instances_per_image must be < 10000");
  }

  // Disjoint class ranges per rule group keep geometric labels identifiable:
  // a pair's classes reveal its group, never the coin outcome.
  const int geo_lo = 0;
  const int geo_hi = has_geo ? (has_coin ? spec.class_vocab_size / 2 : spec.class_vocab_size) : 0;
  const int coin_lo = has_coin ? geo_hi : 0;
  const int coin_hi = spec.class_vocab_size;

  std::vector<const SynthRule*> slots;
  for (const auto& r : spec.rules) {
    for (int w = 0; w < r.weight; ++w) slots.push_back(&r);
  }

  auto class_label = [&](int c) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "obj%04d", c);
    return std::string(buf);
  };
  auto outcome_label = [](const SynthRule& r, int outcome) {
    if (r.n_outcomes == 1) return r.name;
    return r.name + "#" + std::to_string(outcome);
  };

  Rng rng(spec.seed);
  const double sz = spec.image_size;
  auto sample_box = [&]() {
    const double w = rng.uniform(0.04, 0.38) * sz;
    const double h = rng.uniform(0.04, 0.38) * sz;
    const double x = rng.uniform(0.0, sz - w);
    const double y = rng.uniform(0.0, sz - h);
    return BBox{x, y, w, h};
  };
  auto center = [](const BBox& b) {
    return std::pair<double, double>{b.x + 0.5 * b.w, b.y + 0.5 * b.h};
  };

  // Hidden coin per rule: a shuffled balanced urn rather than independent
  // Bernoulli draws. Outcomes stay independent of everything observable while
  // the outcome counts stay balanced, which is what a chance-level predicate
  // needs to actually sit at chance.
  std::map<const SynthRule*, std::vector<int>> urns;
  auto draw_outcome = [&](const SynthRule& rule) {
    auto& urn = urns[&rule];
    if (urn.empty()) {
      for (int o = 0; o < rule.n_outcomes; ++o) urn.push_back(o);
      rng.shuffle(urn);
    }
    const int outcome = urn.back();
    urn.pop_back();
    return outcome;
  };

  struct RawInstance {
    BBox box;
    std::string label;
  };
  struct RawTriplet {
    int subject_idx, object_idx;
    std::string predicate;
  };

  std::map<std::string, std::int64_t> obj_counts, pred_counts;
  std::vector<ImageRecord> images;
  std::vector<std::vector<RawInstance>> raw_instances;
  std::vector<std::vector<RawTriplet>> raw_triplets;

  for (int img = 0; img < spec.n_images; ++img) {
    std::vector<RawInstance> inst;
    std::vector<RawTriplet> trips;
    for (const SynthRule* rule : slots) {
      BBox a, b;
      int subject_idx = static_cast<int>(inst.size());
      int object_idx = subject_idx + 1;
      if (rule->kind == SynthKind::contains) {
        // Outer box large enough to nest a strictly smaller box.
        a.w = rng.uniform(0.25, 0.45) * sz;
        a.h = rng.uniform(0.25, 0.45) * sz;
        a.x = rng.uniform(0.0, sz - a.w);
        a.y = rng.uniform(0.0, sz - a.h);
        b.w = rng.uniform(0.2, 0.7) * a.w;
        b.h = rng.uniform(0.2, 0.7) * a.h;
        b.x = a.x + rng.uniform(0.05, 0.95) * (a.w - b.w);
        b.y = a.y + rng.uniform(0.05, 0.95) * (a.h - b.h);
      } else if (rule->kind == SynthKind::coin) {
        a = sample_box();
        b = sample_box();
      } else {
        // above / left_of: axis-dominant with a margin (the dominant center
        // offset is at least 1.3x the other axis), non-containing, oriented.
        // The margin keeps the two geometric populations separable instead of
        // meeting at a dense |dx| == |dy| boundary.
        const bool vertical = rule->kind == SynthKind::above;
        for (;;) {
          a = sample_box();
          b = sample_box();
          auto [ax, ay] = center(a);
          auto [bx, by] = center(b);
          const double dxm = std::abs(ax - bx), dym = std::abs(ay - by);
          if (vertical ? (dym <= 1.3 * dxm || dym == 0.0) : (dxm <= 1.3 * dym || dxm == 0.0)) {
            continue;
          }
          if (synth_box_contains(a, b) || synth_box_contains(b, a)) continue;
          const bool a_first = vertical ? (ay < by) : (ax < bx);
          if (!a_first) std::swap(a, b);
          break;
        }
      }
      const int s_class = rule->kind == SynthKind::coin
                              ? coin_lo + static_cast<int>(rng.uniform_index(
                                              static_cast<std::uint64_t>(coin_hi - coin_lo)))
                              : geo_lo + static_cast<int>(rng.uniform_index(
                                             static_cast<std::uint64_t>(geo_hi - geo_lo)));
      const int o_class = rule->kind == SynthKind::coin
                              ? coin_lo + static_cast<int>(rng.uniform_index(
                                              static_cast<std::uint64_t>(coin_hi - coin_lo)))
                              : geo_lo + static_cast<int>(rng.uniform_index(
                                             static_cast<std::uint64_t>(geo_hi - geo_lo)));
      int outcome = 0;
      if (rule->kind == SynthKind::coin && rule->n_outcomes > 1) {
        outcome = draw_outcome(*rule);
      }
      inst.push_back(RawInstance{a, class_label(s_class)});
      inst.push_back(RawInstance{b, class_label(o_class)});
      trips.push_back(RawTriplet{subject_idx, object_idx, outcome_label(*rule, outcome)});
    }
    while (static_cast<int>(inst.size()) < spec.instances_per_image) {
      const int c = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(spec.class_vocab_size)));
      inst.push_back(RawInstance{sample_box(), class_label(c)});
    }
    for (const auto& ri : inst) obj_counts[ri.label]++;
    for (const auto& rt : trips) pred_counts[rt.predicate]++;
    raw_instances.push_back(std::move(inst));
    raw_triplets.push_back(std::move(trips));
  }

  Dataset ds;
  ds.object_vocab = Vocab::from_counts(obj_counts);
  ds.predicate_vocab = Vocab::from_counts(pred_counts);
  for (int img = 0; img < spec.n_images; ++img) {
    ImageRecord rec;
    rec.image_id = img + 1;
    rec.width = sz;
    rec.height = sz;
    const auto& inst = raw_instances[static_cast<std::size_t>(img)];
    for (std::size_t i = 0; i < inst.size(); ++i) {
      Instance out;
      out.instance_id = rec.image_id * 10000 + static_cast<std::int64_t>(i);
      out.image_id = rec.image_id;
      out.bbox = inst[i].box;
      out.object_label = *ds.object_vocab.id_of(inst[i].label);
      rec.instances.push_back(std::move(out));
    }
    for (const auto& rt : raw_triplets[static_cast<std::size_t>(img)]) {
      rec.triplets.push_back(Triplet{rec.image_id * 10000 + rt.subject_idx,
                                     *ds.predicate_vocab.id_of(rt.predicate),
                                     rec.image_id * 10000 + rt.object_idx});
    }
    ds.images.push_back(std::move(rec));
  }
  return ds;
}

/// Random unit-vector embeddings for a token list; the testing stand-in for
/// pre-trained word vectors when labels are synthetic.
inline EmbeddingTable synthetic_embeddings(const std::vector<std::string>& tokens, int dim,
                                           std::uint64_t seed) {
  if (dim < 1) throw DataError("synthetic_embeddings: dim must be >= 1");
  EmbeddingTable table;
  table.dim = dim;
  Rng rng(seed);
  for (const auto& tok : tokens) {
    if (table.vectors.count(tok)) continue;
    std::vector<double> v(static_cast<std::size_t>(dim));
    double norm = 0.0;
    for (auto& x : v) {
      x = rng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    if (norm == 0.0) norm = 1.0;
    for (auto& x : v) x /= norm;
    table.vectors.emplace(tok, std::move(v));
  }
  return table;
}

/// All label strings of a dataset (object + predicate + attribute), the token
/// universe a synthetic embedding table must cover.
inline std::vector<std::string> dataset_label_tokens(const Dataset& ds) {
  std::vector<std::string> out;
  for (const auto& l : ds.object_vocab.labels()) out.push_back(l);
  for (const auto& l : ds.predicate_vocab.labels()) out.push_back(l);
  for (const auto& l : ds.attribute_vocab.labels()) out.push_back(l);
  return out;
}

// ---------------------------------------------------------------------------
// Prediction files (external predictor interface)
// ---------------------------------------------------------------------------

/// JSONL: one {"image_id", "subject_id", "object_id", "scores": [...]} per
/// line. Pairs absent from the file score uniformly.
inline Predictor load_prediction_file(const std::string& path, int n_predicates) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  auto table = std::make_shared<
      std::map<std::tuple<std::int64_t, std::int64_t, std::int64_t>, std::vector<double>>>();
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
    const std::int64_t image_id = detail::require_int(j, "image_id", where);
    const std::int64_t sid = detail::require_int(j, "subject_id", where);
    const std::int64_t oid = detail::require_int(j, "object_id", where);
    const nlohmann::json& scores = detail::require_field(j, "scores", where);
    if (!scores.is_array() || static_cast<int>(scores.size()) != n_predicates) {
      throw SchemaError(where + ": field 'scores' must be an array of " +
                        std::to_string(n_predicates) + " numbers");
    }
    std::vector<double> s(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) s[i] = scores[i].get<double>();
    (*table)[{image_id, sid, oid}] = std::move(s);
  }
  const double uniform = n_predicates > 0 ? 1.0 / n_predicates : 0.0;
  return [table, n_predicates, uniform](const ImageRecord& im, const Instance& s,
                                        const Instance& o) {
    auto it = table->find({im.image_id, s.instance_id, o.instance_id});
    if (it != table->end()) return it->second;
    return std::vector<double>(static_cast<std::size_t>(n_predicates), uniform);
  };
}

}  // namespace relcull
