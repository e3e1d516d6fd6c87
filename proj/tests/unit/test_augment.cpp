#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "censorlens/augment.hpp"
#include "censorlens/error.hpp"

using namespace censorlens;
using namespace censorlens::augment;

namespace {

Image random_image(int h, int w, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Image img(h, w);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng() & 0xFF);
  return img;
}

std::uint8_t px(double v) { return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0))); }

}  // namespace

TEST(Augment, KindNamesRoundTrip) {
  for (auto k : kAllKinds) EXPECT_EQ(parse_kind(to_string(k)), k);
  EXPECT_FALSE(parse_kind("mirror"));
}

TEST(Augment, IdentityParametersLeaveImageUnchanged) {
  const auto img = random_image(9, 11, 1);
  for (const Params& p : std::vector<Params>{ContrastParams{1.0}, AffineParams{}, PerspectiveParams{0.0},
                                             SharpenParams{0.0}, BlurParams{0.0}, PaddingParams{0}}) {
    const AugmentationSpec spec{p, 5};
    EXPECT_NO_THROW(validate(spec));
    EXPECT_EQ(apply_transform(img, spec), img) << to_string(spec.kind());
  }
}

TEST(Augment, ValidateRejectsOutOfRange) {
  EXPECT_THROW(validate({ContrastParams{2.0}, 0}), InvalidArgument);
  EXPECT_THROW(validate({AffineParams{30.0}, 0}), InvalidArgument);
  EXPECT_THROW(validate({AffineParams{0.0, 1.0, 0.5, 0.0}, 0}), InvalidArgument);
  EXPECT_THROW(validate({PerspectiveParams{0.2}, 0}), InvalidArgument);
  EXPECT_THROW(validate({SharpenParams{-0.1}, 0}), InvalidArgument);
  EXPECT_THROW(validate({BlurParams{NAN}, 0}), InvalidArgument);
  EXPECT_THROW(validate({PaddingParams{26}, 0}), InvalidArgument);
  EXPECT_THROW(apply_transform(Image(4, 4), {PaddingParams{-1}, 0}), InvalidArgument);
}

TEST(Augment, SampledSpecsAreValid) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    for (auto k : kAllKinds) {
      const auto spec = sample_spec(k, rng);
      EXPECT_EQ(spec.kind(), k);
      EXPECT_NO_THROW(validate(spec));
    }
  }
}

TEST(Augment, ContrastMatchesFormula) {
  const auto img = random_image(5, 6, 2);
  const auto out = apply_transform(img, {ContrastParams{1.3}, 0});
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    EXPECT_EQ(out.data()[i], px(128.0 + 1.3 * (img.data()[i] - 128.0)));
  }
}

TEST(Augment, SharpenMatchesLaplacianOracle) {
  const auto img = random_image(6, 7, 3);
  const double a = 0.7;
  const auto out = apply_transform(img, {SharpenParams{a}, 0});
  auto at = [&](int y, int x, int c) {
    return static_cast<double>(img.at(std::clamp(y, 0, img.height() - 1), std::clamp(x, 0, img.width() - 1), c));
  };
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      for (int c = 0; c < 3; ++c) {
        const double v = at(y, x, c);
        const double lap = 4 * v - at(y - 1, x, c) - at(y + 1, x, c) - at(y, x - 1, c) - at(y, x + 1, c);
        EXPECT_EQ(out.at(y, x, c), px(v + a * lap));
      }
}

TEST(Augment, PaddingReplicatesEdges) {
  const auto img = random_image(4, 5, 4);
  const auto out = apply_transform(img, {PaddingParams{3}, 0});
  ASSERT_EQ(out.height(), 10);
  ASSERT_EQ(out.width(), 11);
  EXPECT_EQ(out.at(0, 0, 0), img.at(0, 0, 0));
  EXPECT_EQ(out.at(9, 10, 2), img.at(3, 4, 2));
  EXPECT_EQ(out.at(5, 6, 1), img.at(2, 3, 1));
}

TEST(Augment, BlurAndWarpsPreserveConstantImages) {
  const Image flat(12, 12, 77);
  for (const Params& p : std::vector<Params>{BlurParams{1.5}, AffineParams{10.0, 1.05, 0.05, -0.05},
                                             PerspectiveParams{0.06}, SharpenParams{1.0}}) {
    EXPECT_EQ(apply_transform(flat, {p, 9}), flat);
  }
}

TEST(Augment, IntegerShiftTranslatesPixels) {
  const auto img = random_image(10, 10, 5);
  const auto out = apply_transform(img, {AffineParams{0.0, 1.0, 0.1, 0.0}, 0});
  for (int y = 0; y < 10; ++y) {
    EXPECT_EQ(out.at(y, 0, 0), img.at(y, 0, 0));  // replicated edge
    for (int x = 1; x < 10; ++x) EXPECT_EQ(out.at(y, x, 0), img.at(y, x - 1, 0));
  }
}

TEST(Augment, DatasetLayoutAndDeterminism) {
  std::vector<Item> items;
  for (int i = 0; i < 4; ++i) items.push_back({random_image(8, 8, 10 + i), category_at(static_cast<std::size_t>(i))});
  Rng rng(1);
  std::vector<AugmentationSpec> specs;
  for (auto k : kAllKinds) specs.push_back(sample_spec(k, rng));
  const auto a = augment_dataset(items, specs, 42);
  const auto b = augment_dataset(items, specs, 42);
  const auto c = augment_dataset(items, specs, 43);
  ASSERT_EQ(a.size(), 4u * 7u);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].image, b[i].image);
    EXPECT_EQ(a[i].label, items[a[i].source].label);
    any_diff = any_diff || !(a[i].image == c[i].image);
  }
  EXPECT_TRUE(any_diff);
  EXPECT_FALSE(a[0].kind);
  EXPECT_EQ(a[0].image, items[0].image);
}

TEST(Augment, TargetPlanSumsExactly) {
  for (std::size_t n : {1u, 7u, 100u}) {
    for (std::size_t target : {n, n + 1, 3 * n + 2, 7 * n}) {
      const auto counts = plan_target_counts(n, target, 6, 9);
      EXPECT_EQ(std::accumulate(counts.begin(), counts.end(), n), target);
      const auto [lo, hi] = std::minmax_element(counts.begin(), counts.end());
      EXPECT_LE(*hi - *lo, 1u);
      EXPECT_LE(*hi, 6u);
    }
  }
  EXPECT_THROW(plan_target_counts(10, 9, 6, 0), InvalidArgument);
  EXPECT_THROW(plan_target_counts(10, 71, 6, 0), InvalidArgument);
}

TEST(Augment, TargetModeUsesDistinctKindsPerItem) {
  std::vector<Item> items;
  for (int i = 0; i < 10; ++i) items.push_back({random_image(8, 8, 100 + i), Category::Fire});
  const auto out = augment_to_target_size(items, 45, 7);
  ASSERT_EQ(out.size(), 45u);
  std::vector<std::set<Kind>> kinds(10);
  std::vector<std::size_t> per(10, 0);
  for (const auto& o : out) {
    EXPECT_EQ(o.label, Category::Fire);
    if (o.kind) {
      EXPECT_TRUE(kinds[o.source].insert(*o.kind).second);
      ++per[o.source];
    }
  }
  for (auto n : per) EXPECT_TRUE(n == 3 || n == 4);
}
