#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcull/embed.hpp"
#include "relcull/error.hpp"
#include "relcull/labelspace.hpp"
#include "relcull/sgdata.hpp"
#include "relcull/vdnet.hpp"

namespace relcull {

struct CurateConfig {
  int n_objects = 1600;
  int n_predicates = 500;
  Linkage linkage = Linkage::average;
  double cluster_threshold = 0.35;
  double alpha = 0.5;  // drop predicates with held-out accuracy > alpha
  VDNetConfig vdnet;
  double split_fraction = 0.7;
  std::uint64_t split_seed = 0;
  std::int64_t min_support = 20;  // below this, keep and flag instead of judging

  void validate() const {
    if (alpha < 0.0 || alpha > 1.0) throw DataError("CurateConfig: alpha must lie in [0, 1]");
    if (split_fraction < 0.0 || split_fraction > 1.0) {
      throw DataError("CurateConfig: split_fraction must lie in [0, 1]");
    }
    if (min_support < 0) throw DataError("CurateConfig: min_support must be >= 0");
    vdnet.validate();
  }
};

struct StageCount {
  std::string stage;
  std::map<std::string, std::int64_t> counts;
};

struct CurationResult {
  Dataset rvg;  // after frequency pre-selection and predicate clustering
  Dataset vrr;  // after discriminator filtering
  AccuracyReport report;
  std::vector<int> kept;         // rvg predicate ids with accuracy <= alpha (or unjudged)
  std::vector<int> dropped;      // rvg predicate ids with accuracy > alpha
  std::vector<int> low_support;  // kept without enough held-out evidence
  ClusterMapping mapping;
  Vocab pre_cluster_vocab;  // predicate vocab the mapping's ids refer to
  std::vector<double> loss_history;
  std::vector<StageCount> stages;
};

/// Partition rvg predicate ids by held-out accuracy: accuracy > alpha drops
/// (ties keep), anything with support below min_support — or absent from the
/// report entirely — is kept and flagged rather than judged on noise.
struct FilterDecision {
  std::vector<int> kept, dropped, low_support;
};

inline FilterDecision classify_predicates(const AccuracyReport& report, int n_predicates,
                                          double alpha, std::int64_t min_support) {
  FilterDecision d;
  for (int p = 0; p < n_predicates; ++p) {
    auto it = report.per_predicate.find(p);
    if (it == report.per_predicate.end() || it->second.support < min_support) {
      d.kept.push_back(p);
      d.low_support.push_back(p);
    } else if (it->second.accuracy > alpha) {
      d.dropped.push_back(p);
    } else {
      d.kept.push_back(p);
    }
  }
  return d;
}

namespace detail {

inline StageCount stage_count(const std::string& stage, const Dataset& ds) {
  StageCount s;
  s.stage = stage;
  s.counts["images"] = static_cast<std::int64_t>(ds.images.size());
  s.counts["instances"] = ds.n_instances();
  s.counts["triplets"] = ds.n_triplets();
  s.counts["object_labels"] = ds.object_vocab.size();
  s.counts["predicate_labels"] = ds.predicate_vocab.size();
  return s;
}

template <typename F>
auto run_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw DataError(std::string("curate[") + stage + "]: " + e.what());
  }
}

/// Remove the dropped predicates' triplets, then every instance and image
/// that had triplets before and lost them all. Entities that never had a
/// triplet survive, so an empty dropped set leaves the dataset untouched.
inline Dataset prune_predicates(const Dataset& rvg, const std::vector<int>& dropped) {
  if (dropped.empty()) return rvg;
  std::unordered_set<int> drop(dropped.begin(), dropped.end());
  Dataset out = rvg;
  std::vector<ImageRecord> images;
  images.reserve(out.images.size());
  for (auto& im : out.images) {
    const bool had_triplets = !im.triplets.empty();
    std::unordered_set<std::int64_t> connected_before;
    for (const auto& t : im.triplets) {
      connected_before.insert(t.subject_id);
      connected_before.insert(t.object_id);
    }
    std::erase_if(im.triplets, [&](const Triplet& t) { return drop.count(t.predicate) != 0; });
    std::unordered_set<std::int64_t> connected_after;
    for (const auto& t : im.triplets) {
      connected_after.insert(t.subject_id);
      connected_after.insert(t.object_id);
    }
    std::erase_if(im.instances, [&](const Instance& inst) {
      return connected_before.count(inst.instance_id) &&
             !connected_after.count(inst.instance_id);
    });
    if (had_triplets && im.triplets.empty()) continue;  // image emptied by pruning
    images.push_back(std::move(im));
  }
  out.images = std::move(images);
  std::unordered_set<std::int64_t> alive;
  for (const auto& im : out.images) alive.insert(im.image_id);
  for (auto it = out.split_tags.begin(); it != out.split_tags.end();) {
    it = alive.count(it->first) ? std::next(it) : out.split_tags.erase(it);
  }
  densify_dataset(out);
  return out;
}

}  // namespace detail

/// The full construction pipeline: frequency pre-selection, predicate
/// clustering (yielding R-VG), a per-image split, discriminator training on
/// label + geometry features, held-out accuracy per predicate, and pruning of
/// every predicate the discriminator can predict above alpha (yielding the
/// visually-relevant subset).
inline CurationResult curate(const Dataset& dataset, const EmbeddingTable& table,
                             const CurateConfig& config) {
  config.validate();
  if (dataset.images.empty()) throw DataError("curate: empty dataset");

  CurationResult result;
  result.stages.push_back(detail::stage_count("input", dataset));

  Dataset basic = detail::run_stage("select_top_labels", [&] {
    return select_top_labels(dataset, config.n_objects, config.n_predicates);
  });
  result.stages.push_back(detail::stage_count("select_top_labels", basic));

  result.pre_cluster_vocab = basic.predicate_vocab;
  result.mapping = detail::run_stage("cluster_predicates", [&] {
    return cluster_predicates(basic.predicate_vocab, table, config.linkage,
                              config.cluster_threshold);
  });
  result.rvg = detail::run_stage("apply_mapping", [&] { return apply_mapping(basic, result.mapping); });
  result.stages.push_back(detail::stage_count("rvg", result.rvg));

  auto [train_ds, test_ds] = detail::run_stage("split", [&] {
    return split_dataset(result.rvg, config.split_fraction, config.split_seed);
  });
  result.rvg.split_tags = train_ds.split_tags;
  result.rvg.split_tags.insert(test_ds.split_tags.begin(), test_ds.split_tags.end());

  const std::vector<PairSample> train_samples = detail::run_stage(
      "build_samples", [&] { return build_pair_samples(train_ds, table); });
  const std::vector<PairSample> test_samples = detail::run_stage(
      "build_samples", [&] { return build_pair_samples(test_ds, table); });
  {
    StageCount s;
    s.stage = "samples";
    s.counts["train"] = static_cast<std::int64_t>(train_samples.size());
    s.counts["test"] = static_cast<std::int64_t>(test_samples.size());
    result.stages.push_back(std::move(s));
  }

  TrainResult trained = detail::run_stage("train_vdnet", [&] {
    if (train_samples.empty()) throw DataError("no training samples");
    VDNetParams params = init_vdnet(config.vdnet, table.dim, result.rvg.predicate_vocab.size());
    return train_vdnet(std::move(params), train_samples, config.vdnet.seed);
  });
  result.loss_history = trained.epoch_loss;

  result.report = detail::run_stage("evaluate", [&] {
    if (test_samples.empty()) throw DataError("held-out split has no samples");
    return evaluate(trained.params, test_samples);
  });

  FilterDecision decision = classify_predicates(result.report, result.rvg.predicate_vocab.size(),
                                                config.alpha, config.min_support);
  result.kept = std::move(decision.kept);
  result.dropped = std::move(decision.dropped);
  result.low_support = std::move(decision.low_support);

  result.vrr = detail::run_stage("prune", [&] {
    return detail::prune_predicates(result.rvg, result.dropped);
  });
  result.stages.push_back(detail::stage_count("vrr", result.vrr));
  return result;
}

// ---------------------------------------------------------------------------
// Predictability curve
// ---------------------------------------------------------------------------

/// (threshold t, fraction of reported predicates with accuracy >= t) over the
/// grid. Monotone non-increasing; 1.0 at t = 0.
inline std::vector<std::pair<double, double>> predictability_curve(
    const AccuracyReport& report, const std::vector<double>& accuracy_grid) {
  if (report.per_predicate.empty()) throw DataError("predictability_curve: empty report");
  std::vector<std::pair<double, double>> curve;
  curve.reserve(accuracy_grid.size());
  const double n = static_cast<double>(report.per_predicate.size());
  for (double t : accuracy_grid) {
    std::int64_t at_least = 0;
    for (const auto& [pred, acc] : report.per_predicate) {
      if (acc.accuracy >= t) ++at_least;
    }
    curve.emplace_back(t, static_cast<double>(at_least) / n);
  }
  return curve;
}

inline std::vector<double> default_accuracy_grid(int points = 101) {
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) {
    grid.push_back(static_cast<double>(i) / static_cast<double>(points - 1));
  }
  return grid;
}

// ---------------------------------------------------------------------------
// Report emission
// ---------------------------------------------------------------------------

inline nlohmann::json curation_report_json(const CurationResult& r) {
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : r.stages) {
    stages.push_back(nlohmann::json{{"stage", s.stage}, {"counts", s.counts}});
  }
  std::set<int> low(r.low_support.begin(), r.low_support.end());
  auto describe = [&](const std::vector<int>& ids) {
    nlohmann::json out = nlohmann::json::array();
    for (int p : ids) {
      nlohmann::json e{{"label", r.rvg.predicate_vocab.label(p)}};
      auto it = r.report.per_predicate.find(p);
      if (it != r.report.per_predicate.end()) {
        e["accuracy"] = it->second.accuracy;
        e["support"] = it->second.support;
      }
      if (low.count(p)) e["insufficient_evidence"] = true;
      out.push_back(std::move(e));
    }
    return out;
  };
  return nlohmann::json{{"stages", std::move(stages)},
                        {"kept", describe(r.kept)},
                        {"dropped", describe(r.dropped)},
                        {"overall_accuracy", r.report.overall_accuracy},
                        {"cluster_mapping", cluster_mapping_to_json(r.mapping, r.pre_cluster_vocab)},
                        {"loss_history", r.loss_history}};
}

inline void write_curation_report(const CurationResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << curation_report_json(r).dump(2) << "\n";
  if (!out) throw DataError("write failed for '" + path + "'");
}

inline void write_predictability_curve(const std::vector<std::pair<double, double>>& curve,
                                       const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << "threshold,fraction\n";
  char buf[80];
  for (const auto& [t, f] : curve) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", t, f);
    out << buf;
  }
}

}  // namespace relcull
