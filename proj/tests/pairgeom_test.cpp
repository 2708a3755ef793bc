#include "relcull/pairgeom.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "relcull/rng.hpp"

using namespace relcull;

TEST(NormalizeBox, FullImageBox) {
  NormBox n = normalize_box(BBox{0, 0, 640, 480}, 640, 480);
  EXPECT_DOUBLE_EQ(n.x, 0.0);
  EXPECT_DOUBLE_EQ(n.y, 0.0);
  EXPECT_DOUBLE_EQ(n.w, 1.0);
  EXPECT_DOUBLE_EQ(n.h, 1.0);
}

TEST(NormalizeBox, HandDivision) {
  // (10, 20, 50, 40) on a 100x200 image: x,w over width, y,h over height.
  NormBox n = normalize_box(BBox{10, 20, 50, 40}, 100, 200);
  EXPECT_DOUBLE_EQ(n.x, 0.1);
  EXPECT_DOUBLE_EQ(n.y, 0.1);
  EXPECT_DOUBLE_EQ(n.w, 0.5);
  EXPECT_DOUBLE_EQ(n.h, 0.2);
}

TEST(NormalizeBox, ZeroImageWidthFails) {
  EXPECT_THROW(normalize_box(BBox{0, 0, 10, 10}, 0, 100), DataError);
  EXPECT_THROW(normalize_box(BBox{0, 0, 10, 10}, 100, -5), DataError);
}

TEST(PairEmbedding, IdenticalBoxes) {
  NormBox b{0.3, 0.4, 0.2, 0.2};
  PairGeometry v = pair_embedding(b, b);
  const double expected[12] = {0, 0, 0.2, 0.2, 0.2, 0.2, 0, 0, 0, 0, 0, 0};
  for (int i = 0; i < 12; ++i) EXPECT_DOUBLE_EQ(v[i], expected[i]) << "component " << i;
}

TEST(PairEmbedding, WorkedExample) {
  // s=(0.2,0.2,0.2,0.2), o=(0.5,0.5,0.4,0.4): centers (0.3,0.3) and (0.7,0.7),
  // dx = dy = -0.4, so dx/w_s = -2, squared 4, and log(0.4/0.2) = ln 2.
  NormBox s{0.2, 0.2, 0.2, 0.2};
  NormBox o{0.5, 0.5, 0.4, 0.4};
  PairGeometry v = pair_embedding(s, o);
  const double expected[12] = {-0.3, -0.3,          0.4, 0.2, 0.4, 0.2, -2.0, -2.0, 4.0, 4.0,
                               std::log(2.0), std::log(2.0)};
  for (int i = 0; i < 12; ++i) EXPECT_NEAR(v[i], expected[i], 1e-12) << "component " << i;
}

TEST(PairEmbedding, SwappedPair) {
  NormBox s{0.2, 0.2, 0.2, 0.2};
  NormBox o{0.5, 0.5, 0.4, 0.4};
  PairGeometry fwd = pair_embedding(s, o);
  PairGeometry rev = pair_embedding(o, s);
  // Corner offsets and log ratios change sign; the scaled center offsets use
  // the swapped subject's extent (0.4), so dx/w_s = 0.4/0.4 = 1.
  EXPECT_NEAR(rev[0], -fwd[0], 1e-12);
  EXPECT_NEAR(rev[1], -fwd[1], 1e-12);
  EXPECT_NEAR(rev[6], 1.0, 1e-12);
  EXPECT_NEAR(rev[7], 1.0, 1e-12);
  EXPECT_NEAR(rev[8], 1.0, 1e-12);
  EXPECT_NEAR(rev[9], 1.0, 1e-12);
  EXPECT_NEAR(rev[10], -fwd[10], 1e-12);
  EXPECT_NEAR(rev[11], -fwd[11], 1e-12);
}

TEST(PairEmbedding, DegenerateBoxFails) {
  NormBox ok{0.1, 0.1, 0.2, 0.2};
  NormBox flat{0.1, 0.1, 0.0, 0.2};
  EXPECT_THROW(pair_embedding(flat, ok), DataError);
  EXPECT_THROW(pair_embedding(ok, flat), DataError);
}

namespace {

NormBox random_box(Rng& rng) {
  NormBox b;
  b.w = rng.uniform(0.01, 0.5);
  b.h = rng.uniform(0.01, 0.5);
  b.x = rng.uniform(0.0, 1.0 - b.w);
  b.y = rng.uniform(0.0, 1.0 - b.h);
  return b;
}

}  // namespace

TEST(PairEmbeddingProperties, SquaresAntisymmetryTranslation) {
  Rng rng(20240811);
  for (int trial = 0; trial < 10000; ++trial) {
    NormBox s = random_box(rng);
    NormBox o = random_box(rng);
    PairGeometry v = pair_embedding(s, o);

    // Components 8 and 9 are exactly the squares of 6 and 7.
    EXPECT_DOUBLE_EQ(v[8], v[6] * v[6]);
    EXPECT_DOUBLE_EQ(v[9], v[7] * v[7]);

    // Log-ratio components negate under swapping subject and object
    // (log(a/b) vs -log(b/a): equal up to rounding of the quotient and log).
    PairGeometry r = pair_embedding(o, s);
    EXPECT_NEAR(v[10], -r[10], 1e-13);
    EXPECT_NEAR(v[11], -r[11], 1e-13);

    // Translating both boxes by a common offset changes nothing.
    const double ddx = rng.uniform(-0.2, 0.2);
    const double ddy = rng.uniform(-0.2, 0.2);
    NormBox s2{s.x + ddx, s.y + ddy, s.w, s.h};
    NormBox o2{o.x + ddx, o.y + ddy, o.w, o.h};
    PairGeometry t = pair_embedding(s2, o2);
    for (int i = 0; i < 12; ++i) {
      EXPECT_NEAR(t[i], v[i], 1e-9 * std::max(1.0, std::abs(v[i]))) << "component " << i;
    }
  }
}
