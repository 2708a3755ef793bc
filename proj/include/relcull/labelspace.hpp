#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "relcull/embed.hpp"
#include "relcull/error.hpp"
#include "relcull/parallel.hpp"
#include "relcull/sgdata.hpp"

namespace relcull {

enum class Linkage { single, complete, average };

inline const char* to_string(Linkage l) {
  switch (l) {
    case Linkage::single: return "single";
    case Linkage::complete: return "complete";
    default: return "average";
  }
}

inline Linkage linkage_from_string(const std::string& s) {
  if (s == "single") return Linkage::single;
  if (s == "complete") return Linkage::complete;
  if (s == "average") return Linkage::average;
  throw DataError("unknown linkage '" + s + "' (expected single|complete|average)");
}

/// Result of agglomerative predicate clustering: a total map from original
/// predicate ids to the canonical id of their cluster. The canonical id is
/// always a member of its own cluster.
struct ClusterMapping {
  std::vector<int> mapping;             // original id -> canonical id
  std::map<int, std::vector<int>> clusters;  // canonical id -> sorted members
  Linkage linkage = Linkage::average;
  double distance_threshold = 0.35;
};

namespace detail {

/// Drop vocabulary entries with zero count from all three vocabs, remapping
/// ids in the records. Surviving ids keep their relative order, which makes
/// pruning passes idempotent.
inline void densify_dataset(Dataset& ds) {
  rebuild_counts(ds);
  auto make_map = [](const Vocab& v, std::vector<int>& old_to_new) {
    Vocab out;
    old_to_new.assign(static_cast<std::size_t>(v.size()), -1);
    for (int i = 0; i < v.size(); ++i) {
      if (v.count(i) > 0) {
        old_to_new[static_cast<std::size_t>(i)] = out.size();
        out.push_back(v.label(i), v.count(i));
      }
    }
    return out;
  };
  std::vector<int> obj_map, pred_map, attr_map;
  Vocab new_obj = make_map(ds.object_vocab, obj_map);
  Vocab new_pred = make_map(ds.predicate_vocab, pred_map);
  Vocab new_attr = make_map(ds.attribute_vocab, attr_map);
  for (auto& im : ds.images) {
    for (auto& inst : im.instances) {
      inst.object_label = obj_map[static_cast<std::size_t>(inst.object_label)];
      for (auto& a : inst.attribute_labels) a = attr_map[static_cast<std::size_t>(a)];
    }
    for (auto& t : im.triplets) t.predicate = pred_map[static_cast<std::size_t>(t.predicate)];
  }
  ds.object_vocab = std::move(new_obj);
  ds.predicate_vocab = std::move(new_pred);
  ds.attribute_vocab = std::move(new_attr);
}

/// Ids of the n most frequent entries; ties broken by lexicographic label.
inline std::unordered_set<int> top_n_ids(const Vocab& v, int n) {
  std::vector<int> ids(static_cast<std::size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) ids[static_cast<std::size_t>(i)] = i;
  std::sort(ids.begin(), ids.end(), [&](int a, int b) {
    if (v.count(a) != v.count(b)) return v.count(a) > v.count(b);
    return v.label(a) < v.label(b);
  });
  std::unordered_set<int> keep;
  for (int i = 0; i < std::min<int>(n, v.size()); ++i) {
    keep.insert(ids[static_cast<std::size_t>(i)]);
  }
  return keep;
}

}  // namespace detail

/// Keep only the n most frequent object and predicate labels; instances and
/// triplets using a cut label are dropped (triplets also drop when an
/// endpoint instance was cut). Record order is preserved and vocabularies are
/// re-densified, so applying the same selection twice changes nothing.
inline Dataset select_top_labels(const Dataset& ds, int n_objects, int n_predicates) {
  if (n_objects < 1 || n_predicates < 1) {
    throw DataError("select_top_labels: n_objects and n_predicates must be >= 1");
  }
  const auto keep_obj = detail::top_n_ids(ds.object_vocab, n_objects);
  const auto keep_pred = detail::top_n_ids(ds.predicate_vocab, n_predicates);

  Dataset out = ds;
  for (auto& im : out.images) {
    std::erase_if(im.instances,
                  [&](const Instance& inst) { return !keep_obj.count(inst.object_label); });
    std::unordered_set<std::int64_t> live;
    for (const auto& inst : im.instances) live.insert(inst.instance_id);
    std::erase_if(im.triplets, [&](const Triplet& t) {
      return !keep_pred.count(t.predicate) || !live.count(t.subject_id) ||
             !live.count(t.object_id);
    });
  }
  detail::densify_dataset(out);
  return out;
}

/// Agglomerative clustering of predicate labels under cosine distance on
/// their phrase vectors. Merging proceeds while the minimum inter-cluster
/// distance is <= distance_threshold; ties pick the lowest-id pair. Labels
/// whose phrase vector is zero (all tokens out of vocabulary) sit at infinite
/// distance from everything and are never merged.
inline ClusterMapping cluster_predicates(const Vocab& predicate_vocab,
                                         const EmbeddingTable& table, Linkage linkage,
                                         double distance_threshold) {
  const int n = predicate_vocab.size();
  if (n == 0) throw DataError("cluster_predicates: empty predicate vocabulary");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<std::vector<double>> vecs(static_cast<std::size_t>(n));
  std::vector<double> norms(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    PhraseVector pv = phrase_vector(table, predicate_vocab.label(i));
    double sq = 0.0;
    for (double v : pv.values) sq += v * v;
    norms[static_cast<std::size_t>(i)] = std::sqrt(sq);
    vecs[static_cast<std::size_t>(i)] = std::move(pv.values);
  }

  // Condensed distance matrix over cluster slots; slot index == smallest
  // member id because a merge always folds the higher slot into the lower.
  // The fill is parallel (disjoint cells per pair); values are identical for
  // any thread count.
  std::vector<std::vector<double>> dist(static_cast<std::size_t>(n),
                                        std::vector<double>(static_cast<std::size_t>(n), 0.0));
  parallel_for(static_cast<std::size_t>(n), [&](std::size_t i) {
    for (std::size_t j = i + 1; j < static_cast<std::size_t>(n); ++j) {
      double d = kInf;
      if (norms[i] > 0.0 && norms[j] > 0.0) {
        double dot = 0.0;
        for (std::size_t k = 0; k < vecs[i].size(); ++k) dot += vecs[i][k] * vecs[j][k];
        d = 1.0 - dot / (norms[i] * norms[j]);
      }
      dist[i][j] = d;
      dist[j][i] = d;
    }
  });

  std::vector<bool> active(static_cast<std::size_t>(n), true);
  std::vector<std::vector<int>> members(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) members[static_cast<std::size_t>(i)] = {i};

  while (true) {
    double best = kInf;
    int bi = -1, bj = -1;
    for (int i = 0; i < n; ++i) {
      if (!active[static_cast<std::size_t>(i)]) continue;
      for (int j = i + 1; j < n; ++j) {
        if (!active[static_cast<std::size_t>(j)]) continue;
        if (dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] < best) {
          best = dist[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
          bi = i;
          bj = j;
        }
      }
    }
    if (bi < 0 || best > distance_threshold) break;

    const double size_i = static_cast<double>(members[static_cast<std::size_t>(bi)].size());
    const double size_j = static_cast<double>(members[static_cast<std::size_t>(bj)].size());
    for (int k = 0; k < n; ++k) {
      if (!active[static_cast<std::size_t>(k)] || k == bi || k == bj) continue;
      const double dik = dist[static_cast<std::size_t>(bi)][static_cast<std::size_t>(k)];
      const double djk = dist[static_cast<std::size_t>(bj)][static_cast<std::size_t>(k)];
      double d;
      switch (linkage) {
        case Linkage::single: d = std::min(dik, djk); break;
        case Linkage::complete: d = std::max(dik, djk); break;
        default: d = (size_i * dik + size_j * djk) / (size_i + size_j); break;
      }
      dist[static_cast<std::size_t>(bi)][static_cast<std::size_t>(k)] = d;
      dist[static_cast<std::size_t>(k)][static_cast<std::size_t>(bi)] = d;
    }
    auto& mi = members[static_cast<std::size_t>(bi)];
    auto& mj = members[static_cast<std::size_t>(bj)];
    mi.insert(mi.end(), mj.begin(), mj.end());
    mj.clear();
    active[static_cast<std::size_t>(bj)] = false;
  }

  ClusterMapping cm;
  cm.linkage = linkage;
  cm.distance_threshold = distance_threshold;
  cm.mapping.assign(static_cast<std::size_t>(n), -1);
  for (int slot = 0; slot < n; ++slot) {
    if (!active[static_cast<std::size_t>(slot)]) continue;
    auto mem = members[static_cast<std::size_t>(slot)];
    std::sort(mem.begin(), mem.end());
    int canonical = mem.front();
    for (int id : mem) {
      const bool better =
          predicate_vocab.count(id) > predicate_vocab.count(canonical) ||
          (predicate_vocab.count(id) == predicate_vocab.count(canonical) &&
           predicate_vocab.label(id) < predicate_vocab.label(canonical));
      if (better) canonical = id;
    }
    for (int id : mem) cm.mapping[static_cast<std::size_t>(id)] = canonical;
    cm.clusters[canonical] = std::move(mem);
  }
  return cm;
}

/// JSON audit form: canonical label -> member labels.
inline nlohmann::json cluster_mapping_to_json(const ClusterMapping& cm, const Vocab& vocab) {
  nlohmann::json clusters = nlohmann::json::object();
  for (const auto& [canonical, members] : cm.clusters) {
    nlohmann::json names = nlohmann::json::array();
    for (int id : members) names.push_back(vocab.label(id));
    clusters[vocab.label(canonical)] = std::move(names);
  }
  return nlohmann::json{{"linkage", to_string(cm.linkage)},
                        {"distance_threshold", cm.distance_threshold},
                        {"clusters", std::move(clusters)}};
}

/// Replace every triplet's predicate by its canonical id and shrink the
/// predicate vocabulary to the canonical set. Exact duplicate triplets
/// created by the merge are removed (first occurrence wins).
inline Dataset apply_mapping(const Dataset& ds, const ClusterMapping& cm) {
  if (static_cast<int>(cm.mapping.size()) < ds.predicate_vocab.size()) {
    const int first_missing = static_cast<int>(cm.mapping.size());
    throw DataError("apply_mapping: predicate '" + ds.predicate_vocab.label(first_missing) +
                    "' missing from mapping");
  }
  for (int i = 0; i < ds.predicate_vocab.size(); ++i) {
    const int c = cm.mapping[static_cast<std::size_t>(i)];
    if (c < 0 || c >= ds.predicate_vocab.size()) {
      throw DataError("apply_mapping: predicate '" + ds.predicate_vocab.label(i) +
                      "' maps outside the vocabulary");
    }
  }

  Dataset out = ds;
  for (auto& im : out.images) {
    std::set<Triplet> seen;
    std::vector<Triplet> kept;
    kept.reserve(im.triplets.size());
    for (auto t : im.triplets) {
      t.predicate = cm.mapping[static_cast<std::size_t>(t.predicate)];
      if (seen.insert(t).second) kept.push_back(t);
    }
    im.triplets = std::move(kept);
  }
  detail::densify_dataset(out);
  return out;
}

}  // namespace relcull
