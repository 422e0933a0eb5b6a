#include <gtest/gtest.h>

#include <cmath>
#include <nlohmann/json.hpp>

#include "glance/error.hpp"
#include "glance/features.hpp"
#include "oracles.hpp"

using namespace glance;

namespace {

auto code_of(auto &&fn) -> ErrorCode
{
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::IoError; // sentinel: nothing thrown
}

auto record_with_wavg(std::string id, std::optional<double> w_avg) -> FeatureRecord
{
  FeatureRecord r;
  r.source_id = std::move(id);
  r.w_avg = w_avg;
  return r;
}

} // namespace

TEST(Scalars, Ipf)
{
  EXPECT_NEAR(ipf(197719, 786432), 0.2514, 5e-5);
  EXPECT_EQ(ipf(15, 24), 0.625);
  EXPECT_EQ(ipf(24, 24), 1.0);
  EXPECT_EQ(code_of([] { ipf(0, 10); }), ErrorCode::EmptyForeground);
}

TEST(Scalars, Compactness)
{
  EXPECT_NEAR(compactness(197719, 27484), 0.8780, 5e-5);
  EXPECT_NEAR(compactness(36697, 17364), 0.6788, 5e-5);
  EXPECT_EQ(compactness(7, 0), 1.0);
  EXPECT_EQ(code_of([] { compactness(0, 3); }), ErrorCode::EmptyForeground);
}

TEST(Scalars, Scatterness)
{
  EXPECT_DOUBLE_EQ(scatterness(15, 4), 4.0 / 19.0);
  EXPECT_NEAR(scatterness(15, 4), 0.2105, 5e-5);
  EXPECT_EQ(scatterness(9, 0), 0.0);
  EXPECT_EQ(scatterness(100, 100), 0.5);
  EXPECT_EQ(code_of([] { scatterness(0, 3); }), ErrorCode::EmptyForeground);
}

TEST(Scalars, Porousness)
{
  EXPECT_NEAR(porousness(197719, 3038), 0.0151, 5e-5);
  EXPECT_NEAR(porousness(20041, 5463), 0.2142, 5e-5);
  EXPECT_EQ(porousness(12, 0), 0.0);
  EXPECT_EQ(code_of([] { porousness(0, 3); }), ErrorCode::EmptyForeground);
}

TEST(Scalars, AveragePoreArea)
{
  EXPECT_NEAR(*average_pore_area(3038, 29), 104.76, 0.01);
  EXPECT_EQ(*average_pore_area(17, 1), 17.0);
  EXPECT_FALSE(average_pore_area(0, 0).has_value());
  EXPECT_EQ(code_of([] { average_pore_area(5, 0); }), ErrorCode::InconsistentCounts);
}

TEST(Scalars, AlternateFormsAgree)
{
  Rng rng(2);
  for (int i = 0; i < 1000; ++i) {
    const std::size_t u = 1 + rng.below(1000000);
    const std::size_t z = rng.below(1000000);
    const std::size_t y = rng.below(z + 1);
    const double a = ipf(u, u + z);
    const double b = 1.0 / (1.0 + static_cast<double>(z) / static_cast<double>(u));
    EXPECT_LE(std::abs(a - b), 1e-12 * a);
    EXPECT_NEAR(compactness(u, y) + scatterness(u, y), 1.0, 1e-15);
  }
}

TEST(Scalars, CompactnessFallsAsScatterGrows)
{
  for (std::size_t y = 0; y < 200; ++y) {
    EXPECT_GT(compactness(50, y), compactness(50, y + 1));
  }
}

TEST(MakeRecord, RejectsOrderingViolations)
{
  EXPECT_EQ(code_of([] { make_record("x", {2, 2, 0, 2, 1, 2, 1}); }), ErrorCode::InconsistentCounts); // w > y
  EXPECT_EQ(code_of([] { make_record("x", {2, 2, 0, 3, 2, 0, 0}); }), ErrorCode::InconsistentCounts); // y > z
  EXPECT_EQ(code_of([] { make_record("x", {2, 2, 0, 5, 0, 0, 0}); }), ErrorCode::InconsistentCounts); // u > n*m
}

TEST(Extract, FixA)
{
  const auto rec = extract(oracle::fix_a_gray(), ThresholdConfig::manual(128), "fixA");
  EXPECT_EQ(rec.u, 15U);
  EXPECT_EQ(rec.z, 9U);
  EXPECT_EQ(rec.y, 4U);
  EXPECT_EQ(rec.w, 1U);
  EXPECT_EQ(rec.n_p, 1U);
  EXPECT_EQ(rec.ipf, 0.625);
  EXPECT_DOUBLE_EQ(rec.c, 15.0 / 19.0);
  EXPECT_DOUBLE_EQ(rec.s, 4.0 / 19.0);
  EXPECT_EQ(rec.p, 0.0625);
  EXPECT_EQ(rec.w_avg, 1.0);
  EXPECT_EQ(rec.threshold, 128);
  EXPECT_EQ(rec.rows, 6U);
  EXPECT_EQ(rec.cols, 4U);
}

TEST(Extract, UniformForeground)
{
  const GrayImage img(3, 5, std::vector<std::uint8_t>(15, 255));
  const auto rec = extract(img, ThresholdConfig::manual(128), "flat");
  EXPECT_EQ(rec.ipf, 1.0);
  EXPECT_EQ(rec.c, 1.0);
  EXPECT_EQ(rec.s, 0.0);
  EXPECT_EQ(rec.p, 0.0);
  EXPECT_FALSE(rec.w_avg.has_value());
}

TEST(Extract, PropagatesErrors)
{
  const GrayImage flat(2, 2, {0, 0, 0, 0});
  EXPECT_EQ(code_of([&] { extract(flat, ThresholdConfig::manual(10), "x"); }), ErrorCode::EmptyForeground);
  EXPECT_EQ(code_of([&] { extract(flat, ThresholdConfig::otsu(), "x"); }), ErrorCode::DegenerateHistogram);
}

TEST(Extract, RotationInvariance)
{
  Rng rng(101);
  for (int i = 0; i < 200; ++i) {
    const auto bin = oracle::random_binary(rng, 40);
    const auto base = extract(bin, "x");
    for (auto a : {Rotation::R90, Rotation::R180, Rotation::R270}) {
      const auto r = extract(rotate(bin, a), "x");
      EXPECT_EQ(r.ipf, base.ipf);
      EXPECT_EQ(r.p, base.p);
      if (a == Rotation::R180) {
        EXPECT_EQ(r.c, base.c);
      }
    }
    EXPECT_EQ(extract(flip(bin, FlipAxis::Horizontal), "x").c, base.c);
    EXPECT_EQ(extract(flip(bin, FlipAxis::Vertical), "x").c, base.c);
  }
  const auto fix = oracle::fix_a();
  EXPECT_NE(extract(fix, "x").c, extract(rotate(fix, Rotation::R90), "x").c);
}

TEST(Extract, RecordRangesHold)
{
  Rng rng(103);
  for (int i = 0; i < 300; ++i) {
    const auto r = extract(oracle::random_binary(rng, 40), "x");
    EXPECT_LE(r.w, r.y);
    EXPECT_LE(r.y, r.z);
    EXPECT_GT(r.ipf, 0.0);
    EXPECT_LE(r.ipf, 1.0);
    EXPECT_GT(r.c, 0.0);
    EXPECT_LE(r.c, 1.0);
    EXPECT_GE(r.s, 0.0);
    EXPECT_LT(r.s, 1.0);
    EXPECT_GE(r.p, 0.0);
    EXPECT_LT(r.p, 1.0);
    EXPECT_NEAR(r.s + r.c, 1.0, 1e-15);
  }
}

TEST(Combo, Layouts)
{
  const auto rec = extract(oracle::fix_a_gray(), ThresholdConfig::manual(128), "fixA");
  const auto c1 = combo(rec, Combo::C1);
  const auto c2 = combo(rec, Combo::C2);
  const auto c3 = combo(rec, Combo::C3);
  const auto c4 = combo(rec, Combo::C4);
  EXPECT_EQ(c1, (std::vector<double>{rec.ipf, rec.c, 1.0}));
  EXPECT_EQ(c2, (std::vector<double>{rec.ipf, rec.c, 1.0, 1.0}));
  EXPECT_EQ(c3, (std::vector<double>{rec.ipf, rec.c, 1.0, rec.p}));
  ASSERT_EQ(c4.size(), 5U);
  EXPECT_EQ(c4.back(), rec.p);
  auto c3_with_np = c3;
  c3_with_np.insert(c3_with_np.begin() + 3, static_cast<double>(rec.n_p));
  EXPECT_EQ(c3_with_np, c4);
}

TEST(Combo, ParseFieldLists)
{
  EXPECT_EQ(parse_fields("C2"), combo_fields(Combo::C2));
  EXPECT_EQ(parse_fields("ipf,s,w_avg"), (std::vector<Field>{Field::Ipf, Field::Scatterness, Field::AveragePoreArea}));
  EXPECT_THROW(parse_fields("ipf,bogus"), Error);
  EXPECT_THROW(parse_combo("C5"), Error);
}

TEST(Series, FlagsSpike)
{
  std::vector<FeatureRecord> s;
  const double values[] = {10, 11, 9, 12, 500};
  for (int i = 0; i < 5; ++i) {
    s.push_back(record_with_wavg("s" + std::to_string(i), values[i]));
  }
  const auto report = flag_anomalies(s, 5.0);
  EXPECT_EQ(report.flags, (std::vector<bool>{false, false, false, false, true}));
  EXPECT_EQ(report.anomaly_factor, 5.0);
}

TEST(Series, ConstantHasNoFlags)
{
  std::vector<FeatureRecord> s;
  for (int i = 0; i < 6; ++i) {
    s.push_back(record_with_wavg("s" + std::to_string(i), 7.0));
  }
  const auto report = flag_anomalies(s);
  EXPECT_EQ(report.flags, std::vector<bool>(6, false));
}

TEST(Series, AbsentNeverFlagsAndOrderIsLexicographic)
{
  std::vector<FeatureRecord> s = {record_with_wavg("c", std::nullopt), record_with_wavg("a", 1.0),
                                  record_with_wavg("b", 100.0), record_with_wavg("d", 1.0)};
  const auto report = flag_anomalies(s);
  ASSERT_EQ(report.records.size(), 4U);
  EXPECT_EQ(report.records[0].source_id, "a");
  EXPECT_EQ(report.records[2].source_id, "c");
  EXPECT_EQ(report.flags, (std::vector<bool>{false, true, false, false}));
}

TEST(Series, TooShort)
{
  std::vector<FeatureRecord> s = {record_with_wavg("a", 1.0), record_with_wavg("b", 1.0)};
  EXPECT_EQ(code_of([&] { flag_anomalies(s); }), ErrorCode::SeriesTooShort);
}

TEST(Output, CsvRow)
{
  const auto rec = extract(oracle::fix_a_gray(), ThresholdConfig::manual(128), "fixA.csv");
  EXPECT_EQ(features_csv_row(rec), "fixA.csv,6,4,128,15,9,4,1,1,0.625000,0.789474,0.210526,0.062500,1.000000\n");
  auto solid = extract(GrayImage(1, 2, {255, 255}), ThresholdConfig::manual(0), "solid");
  EXPECT_EQ(features_csv_row(solid), "solid,1,2,0,2,0,0,0,0,1.000000,1.000000,0.000000,0.000000,\n");
}

TEST(Output, JsonMirrorsCsvFields)
{
  const std::vector<FeatureRecord> recs = {
      extract(oracle::fix_a_gray(), ThresholdConfig::manual(128), "fixA"),
      extract(GrayImage(1, 2, {255, 255}), ThresholdConfig::manual(0), "solid"),
  };
  const auto doc = nlohmann::json::parse(features_json(recs));
  ASSERT_EQ(doc.size(), 2U);
  std::vector<std::string> keys;
  for (auto it = doc[0].begin(); it != doc[0].end(); ++it) {
    keys.push_back(it.key());
  }
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> expected = {"source_id", "rows", "cols", "threshold", "u", "z", "y",
                                       "w",         "n_p",  "ipf",  "c",         "s", "p", "w_avg"};
  std::sort(expected.begin(), expected.end());
  EXPECT_EQ(keys, expected);
  EXPECT_EQ(doc[0]["u"], 15);
  EXPECT_EQ(doc[0]["ipf"], 0.625);
  EXPECT_TRUE(doc[1]["w_avg"].is_null());
}
