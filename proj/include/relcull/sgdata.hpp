#pragma once

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include <json.hpp>

#include "relcull/error.hpp"
#include "relcull/pairgeom.hpp"
#include "relcull/rng.hpp"

namespace relcull {

using json = nlohmann::json;

/// Lowercase, trim, collapse internal whitespace runs to single spaces.
inline std::string normalize_label(std::string_view raw) {
  std::string out;
  out.reserve(raw.size());
  bool pending_space = false;
  for (char c : raw) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return out;
}

/// Bidirectional label <-> dense-id map with per-id occurrence counts.
/// Ids are dense in [0, size()). Construction assigns ids in lexicographic
/// label order; transformations that shrink a vocabulary keep the relative
/// order of the surviving ids, so re-applying a transformation is a no-op.
class Vocab {
 public:
  Vocab() = default;

  static Vocab from_counts(const std::map<std::string, std::int64_t>& counts) {
    Vocab v;
    for (const auto& [label, count] : counts) v.push_back(label, count);
    return v;
  }

  void push_back(const std::string& label, std::int64_t count) {
    if (index_.count(label)) throw DataError("Vocab: duplicate label '" + label + "'");
    index_.emplace(label, static_cast<int>(labels_.size()));
    labels_.push_back(label);
    counts_.push_back(count);
  }

  int size() const { return static_cast<int>(labels_.size()); }
  bool empty() const { return labels_.empty(); }

  const std::string& label(int id) const { return labels_.at(static_cast<std::size_t>(id)); }
  std::int64_t count(int id) const { return counts_.at(static_cast<std::size_t>(id)); }
  std::int64_t& count(int id) { return counts_.at(static_cast<std::size_t>(id)); }

  std::optional<int> id_of(const std::string& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<std::int64_t>& counts() const { return counts_; }

  void reset_counts() { std::fill(counts_.begin(), counts_.end(), 0); }

  bool operator==(const Vocab& other) const {
    return labels_ == other.labels_ && counts_ == other.counts_;
  }

 private:
  std::vector<std::string> labels_;
  std::vector<std::int64_t> counts_;
  std::unordered_map<std::string, int> index_;
};

struct Instance {
  std::int64_t instance_id = 0;
  std::int64_t image_id = 0;
  BBox bbox;
  int object_label = -1;
  std::vector<int> attribute_labels;  // sorted, unique

  bool operator==(const Instance&) const = default;
};

struct Triplet {
  std::int64_t subject_id = 0;
  int predicate = -1;
  std::int64_t object_id = 0;

  auto operator<=>(const Triplet&) const = default;
};

struct ImageRecord {
  std::int64_t image_id = 0;
  double width = 0.0;
  double height = 0.0;
  std::vector<Instance> instances;
  std::vector<Triplet> triplets;

  const Instance* find_instance(std::int64_t instance_id) const {
    for (const auto& inst : instances) {
      if (inst.instance_id == instance_id) return &inst;
    }
    return nullptr;
  }

  bool operator==(const ImageRecord&) const = default;
};

enum class Split { train, test };

struct Dataset {
  std::vector<ImageRecord> images;  // sorted by image_id
  Vocab object_vocab;
  Vocab predicate_vocab;
  Vocab attribute_vocab;
  std::map<std::int64_t, Split> split_tags;

  std::int64_t n_instances() const {
    std::int64_t n = 0;
    for (const auto& im : images) n += static_cast<std::int64_t>(im.instances.size());
    return n;
  }
  std::int64_t n_triplets() const {
    std::int64_t n = 0;
    for (const auto& im : images) n += static_cast<std::int64_t>(im.triplets.size());
    return n;
  }

  bool operator==(const Dataset&) const = default;
};

/// Recompute all three vocab counts from the records.
inline void rebuild_counts(Dataset& ds) {
  ds.object_vocab.reset_counts();
  ds.predicate_vocab.reset_counts();
  ds.attribute_vocab.reset_counts();
  for (const auto& im : ds.images) {
    for (const auto& inst : im.instances) {
      ds.object_vocab.count(inst.object_label)++;
      for (int a : inst.attribute_labels) ds.attribute_vocab.count(a)++;
    }
    for (const auto& t : im.triplets) ds.predicate_vocab.count(t.predicate)++;
  }
}

/// Check the dataset invariants; throws DataError on the first violation.
inline void validate_dataset(const Dataset& ds) {
  std::unordered_set<std::int64_t> seen_instances;
  std::int64_t prev_image = INT64_MIN;
  std::vector<std::int64_t> obj_counts(static_cast<std::size_t>(ds.object_vocab.size()), 0);
  std::vector<std::int64_t> pred_counts(static_cast<std::size_t>(ds.predicate_vocab.size()), 0);
  std::vector<std::int64_t> attr_counts(static_cast<std::size_t>(ds.attribute_vocab.size()), 0);
  for (const auto& im : ds.images) {
    if (im.image_id <= prev_image) throw DataError("dataset: images not sorted by image_id");
    prev_image = im.image_id;
    if (im.width <= 0 || im.height <= 0) throw DataError("dataset: non-positive image extent");
    std::unordered_set<std::int64_t> local;
    for (const auto& inst : im.instances) {
      if (!seen_instances.insert(inst.instance_id).second) {
        throw DataError("dataset: duplicate instance_id " + std::to_string(inst.instance_id));
      }
      local.insert(inst.instance_id);
      const BBox& b = inst.bbox;
      if (b.w <= 0 || b.h <= 0 || b.x < 0 || b.y < 0 ||
          b.x + b.w > im.width + 1e-6 || b.y + b.h > im.height + 1e-6) {
        throw DataError("dataset: bbox outside image " + std::to_string(im.image_id));
      }
      if (inst.object_label < 0 || inst.object_label >= ds.object_vocab.size()) {
        throw DataError("dataset: unresolved object label id");
      }
      obj_counts[static_cast<std::size_t>(inst.object_label)]++;
      for (int a : inst.attribute_labels) {
        if (a < 0 || a >= ds.attribute_vocab.size()) {
          throw DataError("dataset: unresolved attribute label id");
        }
        attr_counts[static_cast<std::size_t>(a)]++;
      }
    }
    for (const auto& t : im.triplets) {
      if (t.subject_id == t.object_id) throw DataError("dataset: self-loop triplet");
      if (!local.count(t.subject_id) || !local.count(t.object_id)) {
        throw DataError("dataset: triplet references missing instance in image " +
                        std::to_string(im.image_id));
      }
      if (t.predicate < 0 || t.predicate >= ds.predicate_vocab.size()) {
        throw DataError("dataset: unresolved predicate id");
      }
      pred_counts[static_cast<std::size_t>(t.predicate)]++;
    }
  }
  for (int i = 0; i < ds.object_vocab.size(); ++i) {
    if (obj_counts[static_cast<std::size_t>(i)] != ds.object_vocab.count(i)) {
      throw DataError("dataset: object vocab count mismatch for '" + ds.object_vocab.label(i) + "'");
    }
  }
  for (int i = 0; i < ds.predicate_vocab.size(); ++i) {
    if (pred_counts[static_cast<std::size_t>(i)] != ds.predicate_vocab.count(i)) {
      throw DataError("dataset: predicate vocab count mismatch for '" +
                      ds.predicate_vocab.label(i) + "'");
    }
  }
  for (int i = 0; i < ds.attribute_vocab.size(); ++i) {
    if (attr_counts[static_cast<std::size_t>(i)] != ds.attribute_vocab.count(i)) {
      throw DataError("dataset: attribute vocab count mismatch for '" +
                      ds.attribute_vocab.label(i) + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// VG-style ingestion
// ---------------------------------------------------------------------------

struct IngestReport {
  std::int64_t images = 0;
  std::int64_t instances = 0;
  std::int64_t triplets = 0;
  std::int64_t images_without_meta = 0;
  std::int64_t boxes_clamped = 0;
  std::int64_t boxes_degenerate_dropped = 0;
  std::int64_t instances_unnamed_dropped = 0;
  std::int64_t duplicate_instance_ids_dropped = 0;
  std::int64_t triplets_dangling_dropped = 0;
  std::int64_t triplets_self_loop_dropped = 0;
  std::int64_t triplets_unlabeled_dropped = 0;
  std::int64_t attribute_refs_unmatched = 0;

  bool operator==(const IngestReport&) const = default;
};

struct IngestResult {
  Dataset dataset;
  IngestReport report;
};

namespace detail {

inline json parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": malformed JSON at byte " + std::to_string(e.byte) + ": " +
                     e.what());
  }
}

inline const json& require_field(const json& j, const char* field, const std::string& where) {
  auto it = j.find(field);
  if (it == j.end()) {
    throw SchemaError(where + ": missing required field '" + std::string(field) + "'");
  }
  return *it;
}

inline double require_number(const json& j, const char* field, const std::string& where) {
  const json& v = require_field(j, field, where);
  if (!v.is_number()) {
    throw SchemaError(where + ": field '" + std::string(field) + "' must be a number");
  }
  return v.get<double>();
}

inline std::int64_t require_int(const json& j, const char* field, const std::string& where) {
  const json& v = require_field(j, field, where);
  if (!v.is_number_integer()) {
    throw SchemaError(where + ": field '" + std::string(field) + "' must be an integer");
  }
  return v.get<std::int64_t>();
}

}  // namespace detail

/// Ingest VG-style JSON sources into a canonical Dataset.
///
/// objects_path:       array of {image_id, objects:[{object_id, x, y, w, h,
///                     names:[...], attributes:[...]?}]}
/// relationships_path: array of {image_id, relationships:[{predicate,
///                     subject:{object_id}, object:{object_id}}]}
/// attributes_path:    optional ("" to skip); array of {image_id,
///                     attributes:[{object_id, attributes:[...]}]}
/// image_meta_path:    array of {image_id, width, height}
///
/// Unknown fields are ignored everywhere. Labels are normalized; boxes are
/// clamped to the image extent and dropped when degenerate; triplets that
/// reference missing instances are dropped. Every drop is counted in the
/// report. Output images are sorted by image_id; instances and triplets keep
/// source order, so ingesting the same sources twice yields identical
/// datasets.
inline IngestResult ingest_vg(const std::string& objects_path,
                              const std::string& relationships_path,
                              const std::string& attributes_path,
                              const std::string& image_meta_path) {
  IngestReport rep;

  const json meta_doc = detail::parse_json_file(image_meta_path);
  if (!meta_doc.is_array()) throw SchemaError(image_meta_path + ": top-level value must be an array");
  std::unordered_map<std::int64_t, std::pair<double, double>> meta;
  for (const auto& m : meta_doc) {
    const std::int64_t id = detail::require_int(m, "image_id", image_meta_path);
    const double w = detail::require_number(m, "width", image_meta_path);
    const double h = detail::require_number(m, "height", image_meta_path);
    meta.emplace(id, std::make_pair(w, h));
  }

  const json objects_doc = detail::parse_json_file(objects_path);
  if (!objects_doc.is_array()) throw SchemaError(objects_path + ": top-level value must be an array");

  struct PendingImage {
    double width, height;
    std::vector<Instance> instances;
    std::vector<std::string> instance_labels;                // parallel to instances
    std::vector<std::set<std::string>> instance_attributes;  // parallel to instances
    std::vector<Triplet> triplet_ids;                        // predicate unresolved yet
    std::vector<std::string> triplet_predicates;
  };
  std::map<std::int64_t, PendingImage> pending;  // sorted by image_id
  std::unordered_set<std::int64_t> seen_instance_ids;

  for (const auto& entry : objects_doc) {
    const std::int64_t image_id = detail::require_int(entry, "image_id", objects_path);
    auto mit = meta.find(image_id);
    if (mit == meta.end()) {
      rep.images_without_meta++;
      continue;
    }
    const double img_w = mit->second.first;
    const double img_h = mit->second.second;
    if (img_w <= 0 || img_h <= 0) {
      rep.images_without_meta++;
      continue;
    }
    PendingImage& img = pending[image_id];
    img.width = img_w;
    img.height = img_h;
    const json& objs = detail::require_field(entry, "objects", objects_path);
    for (const auto& o : objs) {
      const std::int64_t oid = detail::require_int(o, "object_id", objects_path);
      const double x = detail::require_number(o, "x", objects_path);
      const double y = detail::require_number(o, "y", objects_path);
      const double w = detail::require_number(o, "w", objects_path);
      const double h = detail::require_number(o, "h", objects_path);
      const json& names = detail::require_field(o, "names", objects_path);
      std::string label;
      if (names.is_array() && !names.empty() && names.front().is_string()) {
        label = normalize_label(names.front().get<std::string>());
      }
      if (label.empty()) {
        rep.instances_unnamed_dropped++;
        continue;
      }
      // Clamp to the image, drop if nothing is left.
      const double left = std::max(x, 0.0);
      const double top = std::max(y, 0.0);
      const double right = std::min(x + w, img_w);
      const double bottom = std::min(y + h, img_h);
      if (right - left <= 0.0 || bottom - top <= 0.0) {
        rep.boxes_degenerate_dropped++;
        continue;
      }
      if (left != x || top != y || right != x + w || bottom != y + h) rep.boxes_clamped++;
      if (!seen_instance_ids.insert(oid).second) {
        rep.duplicate_instance_ids_dropped++;
        continue;
      }
      Instance inst;
      inst.instance_id = oid;
      inst.image_id = image_id;
      inst.bbox = BBox{left, top, right - left, bottom - top};
      img.instances.push_back(inst);
      img.instance_labels.push_back(label);
      std::set<std::string> attrs;
      if (auto ait = o.find("attributes"); ait != o.end() && ait->is_array()) {
        for (const auto& a : *ait) {
          if (!a.is_string()) continue;
          std::string al = normalize_label(a.get<std::string>());
          if (!al.empty()) attrs.insert(al);
        }
      }
      img.instance_attributes.push_back(std::move(attrs));
    }
  }

  if (!attributes_path.empty()) {
    const json attr_doc = detail::parse_json_file(attributes_path);
    if (!attr_doc.is_array()) throw SchemaError(attributes_path + ": top-level value must be an array");
    for (const auto& entry : attr_doc) {
      const std::int64_t image_id = detail::require_int(entry, "image_id", attributes_path);
      auto pit = pending.find(image_id);
      const json& list = detail::require_field(entry, "attributes", attributes_path);
      for (const auto& a : list) {
        const std::int64_t oid = detail::require_int(a, "object_id", attributes_path);
        auto names_it = a.find("attributes");
        if (names_it == a.end() || !names_it->is_array()) continue;
        bool matched = false;
        if (pit != pending.end()) {
          PendingImage& img = pit->second;
          for (std::size_t i = 0; i < img.instances.size(); ++i) {
            if (img.instances[i].instance_id == oid) {
              for (const auto& n : *names_it) {
                if (!n.is_string()) continue;
                std::string al = normalize_label(n.get<std::string>());
                if (!al.empty()) img.instance_attributes[i].insert(al);
              }
              matched = true;
              break;
            }
          }
        }
        if (!matched) rep.attribute_refs_unmatched++;
      }
    }
  }

  const json rel_doc = detail::parse_json_file(relationships_path);
  if (!rel_doc.is_array()) throw SchemaError(relationships_path + ": top-level value must be an array");
  for (const auto& entry : rel_doc) {
    const std::int64_t image_id = detail::require_int(entry, "image_id", relationships_path);
    auto pit = pending.find(image_id);
    const json& rels = detail::require_field(entry, "relationships", relationships_path);
    for (const auto& r : rels) {
      const json& pred = detail::require_field(r, "predicate", relationships_path);
      if (!pred.is_string()) {
        throw SchemaError(relationships_path + ": field 'predicate' must be a string");
      }
      const json& subj = detail::require_field(r, "subject", relationships_path);
      const json& obj = detail::require_field(r, "object", relationships_path);
      const std::int64_t sid = detail::require_int(subj, "object_id", relationships_path);
      const std::int64_t oid = detail::require_int(obj, "object_id", relationships_path);
      const std::string plabel = normalize_label(pred.get<std::string>());
      if (plabel.empty()) {
        rep.triplets_unlabeled_dropped++;
        continue;
      }
      if (sid == oid) {
        rep.triplets_self_loop_dropped++;
        continue;
      }
      bool have_s = false, have_o = false;
      if (pit != pending.end()) {
        for (const auto& inst : pit->second.instances) {
          if (inst.instance_id == sid) have_s = true;
          if (inst.instance_id == oid) have_o = true;
        }
      }
      if (!have_s || !have_o) {
        rep.triplets_dangling_dropped++;
        continue;
      }
      pit->second.triplet_ids.push_back(Triplet{sid, -1, oid});
      pit->second.triplet_predicates.push_back(plabel);
    }
  }

  // Build vocabularies over surviving records, ids in lexicographic order.
  std::map<std::string, std::int64_t> obj_counts, pred_counts, attr_counts;
  for (const auto& [id, img] : pending) {
    for (const auto& l : img.instance_labels) obj_counts[l]++;
    for (const auto& attrs : img.instance_attributes)
      for (const auto& a : attrs) attr_counts[a]++;
    for (const auto& p : img.triplet_predicates) pred_counts[p]++;
  }

  Dataset ds;
  ds.object_vocab = Vocab::from_counts(obj_counts);
  ds.predicate_vocab = Vocab::from_counts(pred_counts);
  ds.attribute_vocab = Vocab::from_counts(attr_counts);

  for (auto& [id, img] : pending) {
    ImageRecord rec;
    rec.image_id = id;
    rec.width = img.width;
    rec.height = img.height;
    rec.instances = std::move(img.instances);
    for (std::size_t i = 0; i < rec.instances.size(); ++i) {
      rec.instances[i].object_label = *ds.object_vocab.id_of(img.instance_labels[i]);
      for (const auto& a : img.instance_attributes[i]) {
        rec.instances[i].attribute_labels.push_back(*ds.attribute_vocab.id_of(a));
      }
      std::sort(rec.instances[i].attribute_labels.begin(), rec.instances[i].attribute_labels.end());
    }
    rec.triplets = std::move(img.triplet_ids);
    for (std::size_t i = 0; i < rec.triplets.size(); ++i) {
      rec.triplets[i].predicate = *ds.predicate_vocab.id_of(img.triplet_predicates[i]);
    }
    rep.instances += static_cast<std::int64_t>(rec.instances.size());
    rep.triplets += static_cast<std::int64_t>(rec.triplets.size());
    ds.images.push_back(std::move(rec));
  }
  rep.images = static_cast<std::int64_t>(ds.images.size());
  return IngestResult{std::move(ds), rep};
}

// ---------------------------------------------------------------------------
// Canonical on-disk format: JSONL records + vocab sidecar
// ---------------------------------------------------------------------------

inline std::string vocab_sidecar_path(const std::string& dataset_path) {
  return dataset_path + ".vocab.json";
}

namespace detail {

inline json vocab_to_json(const Vocab& v) {
  return json{{"labels", v.labels()}, {"counts", v.counts()}};
}

inline Vocab vocab_from_json(const json& j, const std::string& where) {
  const json& labels = require_field(j, "labels", where);
  const json& counts = require_field(j, "counts", where);
  if (!labels.is_array() || !counts.is_array() || labels.size() != counts.size()) {
    throw SchemaError(where + ": labels/counts must be arrays of equal length");
  }
  Vocab v;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    v.push_back(labels[i].get<std::string>(), counts[i].get<std::int64_t>());
  }
  return v;
}

}  // namespace detail

inline void save_dataset(const Dataset& ds, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  out << json{{"format", "sgds"}, {"version", 1}}.dump() << "\n";
  for (const auto& im : ds.images) {
    json instances = json::array();
    for (const auto& inst : im.instances) {
      instances.push_back(json{{"id", inst.instance_id},
                               {"label", inst.object_label},
                               {"box", {inst.bbox.x, inst.bbox.y, inst.bbox.w, inst.bbox.h}},
                               {"attrs", inst.attribute_labels}});
    }
    json triplets = json::array();
    for (const auto& t : im.triplets) {
      triplets.push_back(json::array({t.subject_id, t.predicate, t.object_id}));
    }
    out << json{{"image_id", im.image_id},
                {"width", im.width},
                {"height", im.height},
                {"instances", std::move(instances)},
                {"triplets", std::move(triplets)}}
               .dump()
        << "\n";
  }
  if (!out) throw DataError("write failed for '" + path + "'");

  json split = json::object();
  for (const auto& [id, s] : ds.split_tags) {
    split[std::to_string(id)] = (s == Split::train ? "train" : "test");
  }
  json sidecar{{"format", "sgds-vocab"},
               {"version", 1},
               {"objects", detail::vocab_to_json(ds.object_vocab)},
               {"predicates", detail::vocab_to_json(ds.predicate_vocab)},
               {"attributes", detail::vocab_to_json(ds.attribute_vocab)},
               {"split_tags", std::move(split)}};
  std::ofstream vout(vocab_sidecar_path(path));
  if (!vout) throw DataError("cannot open '" + vocab_sidecar_path(path) + "' for writing");
  vout << sidecar.dump(2) << "\n";
  if (!vout) throw DataError("write failed for '" + vocab_sidecar_path(path) + "'");
}

inline Dataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ": truncated file at line 1 (missing header)");
  json header;
  try {
    header = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(path + ": line 1: " + e.what());
  }
  if (detail::require_field(header, "format", path).get<std::string>() != "sgds") {
    throw DataError(path + ": not an sgds file");
  }
  const std::int64_t version = detail::require_int(header, "version", path);
  if (version != 1) {
    throw DataError(path + ": unsupported sgds version " + std::to_string(version) +
                    " (expected 1)");
  }

  Dataset ds;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(path + ": line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string where = path + ": line " + std::to_string(line_no);
    ImageRecord rec;
    rec.image_id = detail::require_int(j, "image_id", where);
    rec.width = detail::require_number(j, "width", where);
    rec.height = detail::require_number(j, "height", where);
    for (const auto& i : detail::require_field(j, "instances", where)) {
      Instance inst;
      inst.instance_id = detail::require_int(i, "id", where);
      inst.image_id = rec.image_id;
      inst.object_label = static_cast<int>(detail::require_int(i, "label", where));
      const json& box = detail::require_field(i, "box", where);
      if (!box.is_array() || box.size() != 4) {
        throw SchemaError(where + ": field 'box' must be an array of 4 numbers");
      }
      inst.bbox = BBox{box[0].get<double>(), box[1].get<double>(), box[2].get<double>(),
                       box[3].get<double>()};
      const json& attrs = detail::require_field(i, "attrs", where);
      for (const auto& a : attrs) inst.attribute_labels.push_back(a.get<int>());
      rec.instances.push_back(std::move(inst));
    }
    for (const auto& t : detail::require_field(j, "triplets", where)) {
      if (!t.is_array() || t.size() != 3) {
        throw SchemaError(where + ": triplet entries must be [subject, predicate, object]");
      }
      rec.triplets.push_back(
          Triplet{t[0].get<std::int64_t>(), t[1].get<int>(), t[2].get<std::int64_t>()});
    }
    ds.images.push_back(std::move(rec));
  }

  const std::string vpath = vocab_sidecar_path(path);
  const json sidecar = detail::parse_json_file(vpath);
  if (detail::require_field(sidecar, "format", vpath).get<std::string>() != "sgds-vocab") {
    throw DataError(vpath + ": not an sgds vocab sidecar");
  }
  if (detail::require_int(sidecar, "version", vpath) != 1) {
    throw DataError(vpath + ": unsupported sidecar version");
  }
  ds.object_vocab = detail::vocab_from_json(detail::require_field(sidecar, "objects", vpath), vpath);
  ds.predicate_vocab =
      detail::vocab_from_json(detail::require_field(sidecar, "predicates", vpath), vpath);
  ds.attribute_vocab =
      detail::vocab_from_json(detail::require_field(sidecar, "attributes", vpath), vpath);
  if (auto it = sidecar.find("split_tags"); it != sidecar.end()) {
    for (const auto& [key, val] : it->items()) {
      ds.split_tags[std::stoll(key)] = (val.get<std::string>() == "train" ? Split::train : Split::test);
    }
  }
  validate_dataset(ds);
  return ds;
}

// ---------------------------------------------------------------------------
// Splits
// ---------------------------------------------------------------------------

/// Deterministic per-image split. Both halves keep the full vocabularies
/// (same label ids) with counts recomputed over their own records, so models
/// trained on one half can be evaluated on the other without id remapping.
inline std::pair<Dataset, Dataset> split_dataset(const Dataset& ds, double train_fraction,
                                                 std::uint64_t seed) {
  if (train_fraction < 0.0 || train_fraction > 1.0) {
    throw DataError("split_dataset: train_fraction must lie in [0, 1]");
  }
  const std::size_t n = ds.images.size();
  const auto n_train = static_cast<std::size_t>(
      std::llround(train_fraction * static_cast<double>(n)));
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  Rng rng(seed);
  rng.shuffle(order);
  std::vector<bool> in_train(n, false);
  for (std::size_t i = 0; i < n_train; ++i) in_train[order[i]] = true;

  Dataset train, test;
  train.object_vocab = test.object_vocab = ds.object_vocab;
  train.predicate_vocab = test.predicate_vocab = ds.predicate_vocab;
  train.attribute_vocab = test.attribute_vocab = ds.attribute_vocab;
  for (std::size_t i = 0; i < n; ++i) {
    Dataset& dst = in_train[i] ? train : test;
    dst.images.push_back(ds.images[i]);
    dst.split_tags[ds.images[i].image_id] = in_train[i] ? Split::train : Split::test;
  }
  rebuild_counts(train);
  rebuild_counts(test);
  return {std::move(train), std::move(test)};
}

// ---------------------------------------------------------------------------
// Statistics
// ---------------------------------------------------------------------------

struct StatsReport {
  std::int64_t object_categories = 0;   // distinct object labels in use
  std::int64_t instance_annotations = 0;
  std::int64_t predicate_categories = 0;
  std::int64_t unique_triplet_types = 0;  // distinct <s-class, r, o-class>
  std::int64_t images = 0;
  std::int64_t duplicate_boxes = 0;  // same image, label, and box as an earlier instance

  bool operator==(const StatsReport&) const = default;
};

inline StatsReport dataset_stats(const Dataset& ds) {
  StatsReport s;
  s.images = static_cast<std::int64_t>(ds.images.size());
  std::set<int> used_objects, used_predicates;
  std::set<std::tuple<int, int, int>> triplet_types;
  for (const auto& im : ds.images) {
    std::set<std::tuple<int, double, double, double, double>> local_boxes;
    std::unordered_map<std::int64_t, int> label_of;
    for (const auto& inst : im.instances) {
      s.instance_annotations++;
      used_objects.insert(inst.object_label);
      label_of[inst.instance_id] = inst.object_label;
      auto key = std::make_tuple(inst.object_label, inst.bbox.x, inst.bbox.y, inst.bbox.w,
                                 inst.bbox.h);
      if (!local_boxes.insert(key).second) s.duplicate_boxes++;
    }
    for (const auto& t : im.triplets) {
      used_predicates.insert(t.predicate);
      triplet_types.emplace(label_of.at(t.subject_id), t.predicate, label_of.at(t.object_id));
    }
  }
  s.object_categories = static_cast<std::int64_t>(used_objects.size());
  s.predicate_categories = static_cast<std::int64_t>(used_predicates.size());
  s.unique_triplet_types = static_cast<std::int64_t>(triplet_types.size());
  return s;
}

}  // namespace relcull
