#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <map>
#include <string>
#include <vector>

#include "relcull/sgdata.hpp"

namespace relcull::testing {

namespace fs = std::filesystem;

/// Self-deleting scratch directory for fixture files.
struct TempDir {
  fs::path path;

  TempDir() {
    static std::atomic<unsigned> counter{0};
    path = fs::temp_directory_path() /
           ("relcull_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string file(const std::string& name) const { return (path / name).string(); }
};

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

/// Builds a valid in-memory Dataset without going through ingestion. Vocab
/// ids are assigned in lexicographic label order, matching the library's
/// convention.
class DatasetBuilder {
 public:
  DatasetBuilder& image(std::int64_t id, double w = 100, double h = 100) {
    images_[id] = ImageRecord{id, w, h, {}, {}};
    return *this;
  }

  DatasetBuilder& instance(std::int64_t image_id, std::int64_t instance_id,
                           const std::string& label, BBox box,
                           std::vector<std::string> attrs = {}) {
    pending_instances_.push_back({image_id, instance_id, label, box, std::move(attrs)});
    return *this;
  }

  DatasetBuilder& triplet(std::int64_t image_id, std::int64_t subject_id,
                          const std::string& predicate, std::int64_t object_id) {
    pending_triplets_.push_back({image_id, subject_id, predicate, object_id});
    return *this;
  }

  Dataset build() {
    std::map<std::string, std::int64_t> obj_counts, pred_counts, attr_counts;
    for (const auto& pi : pending_instances_) {
      obj_counts[pi.label]++;
      for (const auto& a : pi.attrs) attr_counts[a]++;
    }
    for (const auto& pt : pending_triplets_) pred_counts[pt.predicate]++;
    Dataset ds;
    ds.object_vocab = Vocab::from_counts(obj_counts);
    ds.predicate_vocab = Vocab::from_counts(pred_counts);
    ds.attribute_vocab = Vocab::from_counts(attr_counts);
    for (const auto& pi : pending_instances_) {
      Instance inst;
      inst.instance_id = pi.instance_id;
      inst.image_id = pi.image_id;
      inst.bbox = pi.box;
      inst.object_label = *ds.object_vocab.id_of(pi.label);
      for (const auto& a : pi.attrs) inst.attribute_labels.push_back(*ds.attribute_vocab.id_of(a));
      std::sort(inst.attribute_labels.begin(), inst.attribute_labels.end());
      images_.at(pi.image_id).instances.push_back(std::move(inst));
    }
    for (const auto& pt : pending_triplets_) {
      images_.at(pt.image_id)
          .triplets.push_back(
              Triplet{pt.subject_id, *ds.predicate_vocab.id_of(pt.predicate), pt.object_id});
    }
    for (auto& [id, rec] : images_) ds.images.push_back(rec);
    return ds;
  }

 private:
  struct PendingInstance {
    std::int64_t image_id, instance_id;
    std::string label;
    BBox box;
    std::vector<std::string> attrs;
  };
  struct PendingTriplet {
    std::int64_t image_id, subject_id;
    std::string predicate;
    std::int64_t object_id;
  };
  std::map<std::int64_t, ImageRecord> images_;
  std::vector<PendingInstance> pending_instances_;
  std::vector<PendingTriplet> pending_triplets_;
};

}  // namespace relcull::testing
