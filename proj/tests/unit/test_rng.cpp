#include <gtest/gtest.h>

#include <set>

#include "mfc/rng.hpp"

namespace mfc {
namespace {

TEST(Rng, SameSeedSameStream) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a(), b());
}

TEST(Rng, SplitIgnoresParentPosition) {
  Rng a(7);
  Rng b(7);
  for (int i = 0; i < 10; ++i) b();
  Rng ca = a.split(3), cb = b.split(3);
  for (int i = 0; i < 20; ++i) EXPECT_EQ(ca(), cb());
}

TEST(Rng, DistinctTagsGiveDistinctSeeds) {
  std::set<std::uint64_t> seeds;
  for (std::uint64_t t = 0; t < 1000; ++t) seeds.insert(derive_seed(1, {t}));
  EXPECT_EQ(seeds.size(), 1000u);
  EXPECT_NE(derive_seed(1, {2, 3}), derive_seed(1, {3, 2}));
}

TEST(Rng, UniformInUnitInterval) {
  Rng r(0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  EXPECT_NEAR(sum / 100000.0, 0.5, 0.005);
}

}  // namespace
}  // namespace mfc
