#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "glance/binarize.hpp"
#include "glance/error.hpp"
#include "oracles.hpp"

using namespace glance;

namespace {

auto labels_of(const BinaryImage &b) -> std::vector<Label>
{
  return {b.labels().begin(), b.labels().end()};
}

constexpr Label B = Label::Background;
constexpr Label F = Label::Foreground;

} // namespace

TEST(Otsu, TwoLevelImagePicksLowerLevel)
{
  std::vector<std::uint8_t> px(100, 10);
  std::fill(px.begin() + 50, px.end(), 200);
  const GrayImage img(10, 10, px);
  const int t = otsu_threshold(img);
  EXPECT_GE(t, 10);
  EXPECT_LE(t, 199);
  EXPECT_EQ(t, oracle::otsu_exhaustive(histogram(img)));
  EXPECT_EQ(t, 10); // every cut in [10, 199] ties; smallest wins
}

TEST(Otsu, ConstantImageIsDegenerate)
{
  const GrayImage img(3, 3, std::vector<std::uint8_t>(9, 128));
  try {
    otsu_threshold(img);
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateHistogram);
  }
}

TEST(Otsu, TwoGaussianModes)
{
  // Box-Muller on the portable generator; clipped to [0, 255].
  Rng rng(2024);
  std::vector<std::uint8_t> px;
  for (int i = 0; i < 4000; ++i) {
    const double u1 = std::max(rng.uniform(), 1e-12);
    const double u2 = rng.uniform();
    const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.141592653589793 * u2);
    const double mode = i % 2 == 0 ? 60.0 : 180.0;
    px.push_back(static_cast<std::uint8_t>(std::clamp(std::lround(mode + 10.0 * z), 0L, 255L)));
  }
  const GrayImage img(40, 100, px);
  const int t = otsu_threshold(img);
  EXPECT_GT(t, 60);
  EXPECT_LT(t, 180);
  EXPECT_EQ(t, oracle::otsu_exhaustive(histogram(img)));
}

TEST(Otsu, MatchesExhaustiveSearchOnRandomHistograms)
{
  Rng rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    Histogram h{};
    const int populated = 2 + static_cast<int>(rng.below(40));
    for (int k = 0; k < populated; ++k) {
      h[rng.below(256)] += 1 + rng.below(500);
    }
    if (std::count_if(h.begin(), h.end(), [](auto v) { return v > 0; }) < 2) {
      continue;
    }
    EXPECT_EQ(otsu_threshold(h), oracle::otsu_exhaustive(h)) << "trial " << trial;
  }
}

TEST(Binarize, ManualDarkBackground)
{
  const GrayImage img(2, 2, {0, 0, 255, 255});
  const auto bin = binarize(img, ThresholdConfig::manual(128));
  EXPECT_EQ(labels_of(bin), (std::vector<Label>{B, B, F, F}));
  EXPECT_EQ(bin.foreground_count(), 2U);
  EXPECT_EQ(bin.threshold(), 128);
  EXPECT_EQ(bin.polarity(), Polarity::DarkBackground);
}

TEST(Binarize, LightBackgroundFlipsLabels)
{
  const GrayImage img(2, 2, {0, 0, 255, 255});
  const auto bin = binarize(img, ThresholdConfig::manual(128, Polarity::LightBackground));
  EXPECT_EQ(labels_of(bin), (std::vector<Label>{F, F, B, B}));
  EXPECT_EQ(bin.polarity(), Polarity::LightBackground);
}

TEST(Binarize, ThresholdIsInclusiveForLowClass)
{
  const GrayImage img(1, 3, {127, 128, 129});
  EXPECT_EQ(labels_of(binarize(img, ThresholdConfig::manual(128))), (std::vector<Label>{B, B, F}));
  EXPECT_EQ(labels_of(binarize(img, ThresholdConfig::manual(128, Polarity::LightBackground))),
            (std::vector<Label>{F, F, B}));
}

TEST(Binarize, EmptyForeground)
{
  const GrayImage img(2, 2, {0, 0, 0, 0});
  try {
    binarize(img, ThresholdConfig::manual(128));
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::EmptyForeground);
  }
}

TEST(Binarize, OtsuModePropagatesDegenerate)
{
  const GrayImage img(2, 2, {9, 9, 9, 9});
  try {
    binarize(img, ThresholdConfig::otsu());
    FAIL();
  } catch (const Error &e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateHistogram);
  }
}

TEST(Binarize, ManualOutOfRange)
{
  const GrayImage img(1, 2, {0, 255});
  EXPECT_THROW(binarize(img, ThresholdConfig::manual(256)), Error);
  EXPECT_THROW(binarize(img, ThresholdConfig::manual(-1)), Error);
}

TEST(Binarize, PartitionsPixels)
{
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const auto img = oracle::random_gray(rng, 1 + rng.below(20), 1 + rng.below(20));
    const auto top = *std::max_element(img.pixels().begin(), img.pixels().end());
    if (top == 0) {
      continue;
    }
    const auto bin = binarize(img, ThresholdConfig::manual(static_cast<int>(rng.below(top))));
    EXPECT_EQ(bin.foreground_count() + bin.background_count(), img.rows() * img.cols());
  }
}

TEST(Binarize, CommutesWithRotation)
{
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const auto img = oracle::random_gray(rng, 2 + rng.below(20), 2 + rng.below(20));
    if (std::all_of(img.pixels().begin(), img.pixels().end(), [&](auto v) { return v == img.pixels()[0]; })) {
      continue;
    }
    const auto cfg = ThresholdConfig::otsu(i % 2 == 0 ? Polarity::DarkBackground : Polarity::LightBackground);
    for (auto a : {Rotation::R90, Rotation::R180, Rotation::R270}) {
      EXPECT_EQ(binarize(rotate(img, a), cfg), rotate(binarize(img, cfg), a));
    }
  }
}
