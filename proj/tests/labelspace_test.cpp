#include "relcull/labelspace.hpp"

#include <gtest/gtest.h>

#include "test_util.hpp"

using namespace relcull;
using relcull::testing::DatasetBuilder;

namespace {

// One image, predicates with counts {holds:3, lifts:2, pets:1}.
Dataset predicate_count_fixture() {
  DatasetBuilder b;
  b.image(1, 100, 100);
  for (int i = 1; i <= 5; ++i) b.instance(1, i, "thing" + std::to_string(i), BBox{0, 0, 10, 10});
  b.triplet(1, 1, "holds", 2);
  b.triplet(1, 1, "holds", 3);
  b.triplet(1, 2, "holds", 3);
  b.triplet(1, 1, "lifts", 4);
  b.triplet(1, 2, "lifts", 4);
  b.triplet(1, 3, "pets", 5);
  return b.build();
}

ClusterMapping identity_mapping(const Vocab& v) {
  ClusterMapping cm;
  cm.mapping.resize(static_cast<std::size_t>(v.size()));
  for (int i = 0; i < v.size(); ++i) {
    cm.mapping[static_cast<std::size_t>(i)] = i;
    cm.clusters[i] = {i};
  }
  return cm;
}

}  // namespace

TEST(SelectTopLabels, KeepsMostFrequentPredicates) {
  Dataset d = predicate_count_fixture();
  Dataset out = select_top_labels(d, 100, 2);
  validate_dataset(out);
  ASSERT_EQ(out.predicate_vocab.size(), 2);
  EXPECT_TRUE(out.predicate_vocab.id_of("holds").has_value());
  EXPECT_TRUE(out.predicate_vocab.id_of("lifts").has_value());
  EXPECT_FALSE(out.predicate_vocab.id_of("pets").has_value());
  EXPECT_EQ(out.n_triplets(), 5);
  // thing5 only appeared through the cut "pets" triplet but keeps its
  // instance; only labels were selected, not connectivity.
  EXPECT_EQ(out.n_instances(), 5);
}

TEST(SelectTopLabels, LargerNLeavesDatasetUnchanged) {
  Dataset d = predicate_count_fixture();
  EXPECT_EQ(select_top_labels(d, 1000, 1000), d);
}

TEST(SelectTopLabels, CutObjectsDropInstancesAndTriplets) {
  DatasetBuilder b;
  b.image(1, 100, 100);
  b.instance(1, 1, "common", BBox{0, 0, 10, 10});
  b.instance(1, 2, "common", BBox{5, 5, 10, 10});
  b.instance(1, 3, "rare", BBox{20, 20, 10, 10});
  b.triplet(1, 1, "near", 2);
  b.triplet(1, 1, "near", 3);
  Dataset out = select_top_labels(b.build(), 1, 10);
  validate_dataset(out);
  EXPECT_EQ(out.object_vocab.size(), 1);
  EXPECT_EQ(out.n_instances(), 2);
  EXPECT_EQ(out.n_triplets(), 1);  // the triplet into "rare" lost its endpoint
}

TEST(SelectTopLabels, Idempotent) {
  Dataset d = predicate_count_fixture();
  Dataset once = select_top_labels(d, 3, 2);
  Dataset twice = select_top_labels(once, 3, 2);
  EXPECT_EQ(once, twice);
}

TEST(SelectTopLabels, TiesBreakLexicographically) {
  DatasetBuilder b;
  b.image(1, 100, 100);
  b.instance(1, 1, "x", BBox{0, 0, 10, 10});
  b.instance(1, 2, "x", BBox{5, 5, 10, 10});
  b.triplet(1, 1, "zeta", 2);
  b.triplet(1, 2, "alpha", 1);
  Dataset out = select_top_labels(b.build(), 10, 1);
  ASSERT_EQ(out.predicate_vocab.size(), 1);
  EXPECT_EQ(out.predicate_vocab.label(0), "alpha");
}

namespace {

EmbeddingTable wears_table() {
  EmbeddingTable t;
  t.dim = 3;
  t.vectors["wears"] = {1.0, 0.0, 0.0};
  t.vectors["wearing"] = {0.98, 0.19899748742132397, 0.0};  // cos to "wears" = 0.98
  t.vectors["eats"] = {0.0, 1.0, 0.0};
  return t;
}

}  // namespace

TEST(ClusterPredicates, MergesDuplicatePhrasings) {
  // "is" and "a" are out of vocabulary, so the phrase vector of
  // "is wearing a" is just "wearing", at cosine distance 0.02 from "wears".
  Vocab v = Vocab::from_counts({{"eats", 4}, {"is wearing a", 2}, {"wears", 5}});
  ClusterMapping cm = cluster_predicates(v, wears_table(), Linkage::average, 0.35);
  ASSERT_EQ(cm.clusters.size(), 2u);
  const int wears = *v.id_of("wears");
  const int wearing = *v.id_of("is wearing a");
  const int eats = *v.id_of("eats");
  EXPECT_EQ(cm.mapping[static_cast<std::size_t>(wearing)], wears);  // most frequent member wins
  EXPECT_EQ(cm.mapping[static_cast<std::size_t>(wears)], wears);
  EXPECT_EQ(cm.mapping[static_cast<std::size_t>(eats)], eats);
}

TEST(ClusterPredicates, SinglePredicateIdentity) {
  Vocab v = Vocab::from_counts({{"wears", 3}});
  ClusterMapping cm = cluster_predicates(v, wears_table(), Linkage::average, 0.35);
  ASSERT_EQ(cm.clusters.size(), 1u);
  EXPECT_EQ(cm.mapping[0], 0);
}

TEST(ClusterPredicates, EmptyVocabRejected) {
  Vocab v;
  EXPECT_THROW(cluster_predicates(v, wears_table(), Linkage::average, 0.35), DataError);
}

TEST(ClusterPredicates, TwoCloseOneFarGivesTwoClusters) {
  // Pairwise cosine distances: d(p0,p1) = 0.01, d(p2, p0) = 0.9,
  // d(p2, p1) ~ 0.901. At threshold 0.3, {p0,p1} merge and p2 stays: the
  // average-linkage distance from {p0,p1} to p2 is ~0.9 > 0.3.
  EmbeddingTable t;
  t.dim = 3;
  t.vectors["p0"] = {1.0, 0.0, 0.0};
  t.vectors["p1"] = {0.99, 0.14106735979665885, 0.0};
  t.vectors["p2"] = {0.1, 0.0, 0.99498743710662};
  Vocab v = Vocab::from_counts({{"p0", 1}, {"p1", 1}, {"p2", 1}});
  ClusterMapping cm = cluster_predicates(v, t, Linkage::average, 0.3);
  EXPECT_EQ(cm.clusters.size(), 2u);
}

TEST(ClusterPredicates, DeterministicAcrossRuns) {
  Vocab v = Vocab::from_counts({{"eats", 4}, {"is wearing a", 2}, {"wears", 5}});
  ClusterMapping a = cluster_predicates(v, wears_table(), Linkage::average, 0.35);
  ClusterMapping b = cluster_predicates(v, wears_table(), Linkage::average, 0.35);
  EXPECT_EQ(a.mapping, b.mapping);
  EXPECT_EQ(a.clusters, b.clusters);
}

TEST(ClusterPredicates, ClusterCountMonotoneInThreshold) {
  EmbeddingTable t;
  t.dim = 4;
  t.vectors["a"] = {1, 0, 0, 0};
  t.vectors["b"] = {0.9, 0.43588989435406736, 0, 0};
  t.vectors["c"] = {0, 1, 0, 0};
  t.vectors["d"] = {0, 0, 1, 0};
  t.vectors["e"] = {0, 0, 0.5, 0.8660254037844386};
  Vocab v = Vocab::from_counts({{"a", 1}, {"b", 1}, {"c", 1}, {"d", 1}, {"e", 1}});
  std::size_t prev = SIZE_MAX;
  for (double thr : {0.0, 0.1, 0.3, 0.6, 1.0, 1.5, 2.0}) {
    ClusterMapping cm = cluster_predicates(v, t, Linkage::average, thr);
    EXPECT_LE(cm.clusters.size(), prev) << "threshold " << thr;
    prev = cm.clusters.size();
  }
}

TEST(ClusterPredicates, OovPredicatesNeverMerge) {
  EmbeddingTable t;
  t.dim = 2;
  t.vectors["known"] = {1, 0};
  Vocab v = Vocab::from_counts({{"known", 3}, {"mystery1", 2}, {"mystery2", 1}});
  // Even at the maximum threshold the zero-vector labels stay singletons.
  ClusterMapping cm = cluster_predicates(v, t, Linkage::average, 2.0);
  EXPECT_EQ(cm.clusters.size(), 3u);
}

TEST(ClusterPredicates, LinkageRulesDiffer) {
  // Chain a - b - c with d(a,b) = d(b,c) = 0.3, d(a,c) ~ 1.02: single linkage
  // chains all three at threshold 0.35, complete linkage stops at two
  // clusters because max-distance to the merged pair exceeds it.
  EmbeddingTable t;
  t.dim = 2;
  const double a1 = 0.0, a2 = 0.795398830184144, a3 = 2 * 0.795398830184144;
  t.vectors["a"] = {std::cos(a1), std::sin(a1)};
  t.vectors["b"] = {std::cos(a2), std::sin(a2)};
  t.vectors["c"] = {std::cos(a3), std::sin(a3)};
  Vocab v = Vocab::from_counts({{"a", 1}, {"b", 1}, {"c", 1}});
  EXPECT_EQ(cluster_predicates(v, t, Linkage::single, 0.35).clusters.size(), 1u);
  EXPECT_EQ(cluster_predicates(v, t, Linkage::complete, 0.35).clusters.size(), 2u);
}

TEST(ApplyMapping, IdentityLeavesDatasetUnchanged) {
  Dataset d = predicate_count_fixture();
  Dataset out = apply_mapping(d, identity_mapping(d.predicate_vocab));
  EXPECT_EQ(out, d);
}

TEST(ApplyMapping, MergedCountsAggregate) {
  // Distinct pairs so no duplicates arise: holds x3 + lifts x2 -> holds x5.
  Dataset d = predicate_count_fixture();
  const int holds = *d.predicate_vocab.id_of("holds");
  const int lifts = *d.predicate_vocab.id_of("lifts");
  const int pets = *d.predicate_vocab.id_of("pets");
  ClusterMapping cm = identity_mapping(d.predicate_vocab);
  cm.mapping[static_cast<std::size_t>(lifts)] = holds;
  cm.clusters.erase(lifts);
  cm.clusters[holds] = {holds, lifts};
  Dataset out = apply_mapping(d, cm);
  validate_dataset(out);
  ASSERT_EQ(out.predicate_vocab.size(), 2);
  EXPECT_EQ(out.predicate_vocab.count(*out.predicate_vocab.id_of("holds")), 5);
  EXPECT_EQ(out.predicate_vocab.count(*out.predicate_vocab.id_of("pets")), 1);
  (void)pets;
}

TEST(ApplyMapping, MergeCreatedDuplicatesAreRemoved) {
  DatasetBuilder b;
  b.image(1, 100, 100);
  b.instance(1, 1, "x", BBox{0, 0, 10, 10});
  b.instance(1, 2, "y", BBox{5, 5, 10, 10});
  b.triplet(1, 1, "holds", 2);
  b.triplet(1, 1, "lifts", 2);
  Dataset d = b.build();
  ClusterMapping cm = identity_mapping(d.predicate_vocab);
  const int holds = *d.predicate_vocab.id_of("holds");
  const int lifts = *d.predicate_vocab.id_of("lifts");
  cm.mapping[static_cast<std::size_t>(lifts)] = holds;
  Dataset out = apply_mapping(d, cm);
  EXPECT_EQ(out.n_triplets(), 1);
  EXPECT_EQ(out.predicate_vocab.size(), 1);
}

TEST(ApplyMapping, MissingPredicateNamesLabel) {
  Dataset d = predicate_count_fixture();
  ClusterMapping cm;  // empty mapping: nothing is covered
  try {
    apply_mapping(d, cm);
    FAIL() << "expected DataError";
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("holds"), std::string::npos) << e.what();
  }
}

TEST(ApplyMapping, PreservesTripletCountMinusDuplicates) {
  Dataset d = predicate_count_fixture();
  ClusterMapping cm = identity_mapping(d.predicate_vocab);
  const int holds = *d.predicate_vocab.id_of("holds");
  const int lifts = *d.predicate_vocab.id_of("lifts");
  const int pets = *d.predicate_vocab.id_of("pets");
  cm.mapping[static_cast<std::size_t>(lifts)] = holds;
  cm.mapping[static_cast<std::size_t>(pets)] = holds;
  Dataset out = apply_mapping(d, cm);
  // All pairs in the fixture are distinct, so nothing deduplicates.
  EXPECT_EQ(out.n_triplets(), d.n_triplets());
}
