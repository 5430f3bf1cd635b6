#include <gtest/gtest.h>

#include "coordrank/config.h"
#include "coordrank/errors.h"
#include "test_util.h"

namespace coordrank {
namespace {

TEST(Config, DefaultsAndFingerprint) {
  RerankConfig cfg;
  EXPECT_EQ(config_fingerprint(cfg),
            "w_g=1 w_coor=1 K=1 bypass_threshold=0.99 top_n=10 common_cutoff=200");
  // Frozen from an independent FNV-1a implementation.
  EXPECT_EQ(config_hash(cfg), "2bf0855c5ca6aaf7");
}

TEST(Config, Fnv1a64Vectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Config, FormatReal) {
  EXPECT_EQ(format_real(0.1), "0.1");
  EXPECT_EQ(format_real(-0.0), "0");
  EXPECT_EQ(format_real(1.0), "1");
  EXPECT_EQ(format_real(0.6923076923076923), "0.6923076923076923");
  EXPECT_EQ(std::stod(format_real(1.0 / 3.0)), 1.0 / 3.0);
}

TEST(Config, ParseOverridesBase) {
  RerankConfig base;
  base.top_n = 7;
  auto cfg = parse_config(R"({"w_coor": 0.35, "K": 2, "common_cutoff": 0})", base);
  EXPECT_EQ(cfg.w_coor, 0.35);
  EXPECT_EQ(cfg.k, 2.0);
  EXPECT_EQ(cfg.common_cutoff, 0);
  EXPECT_EQ(cfg.top_n, 7);
  EXPECT_EQ(cfg.w_g, 1.0);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_THROW(parse_config(R"({"k": 1})"), DataError);
  EXPECT_THROW(parse_config(R"({"w_g": "1"})"), DataError);
  EXPECT_THROW(parse_config(R"({"top_n": 2.5})"), DataError);
  EXPECT_THROW(parse_config(R"({"top_n": 1e20})"), DataError);
  EXPECT_THROW(parse_config("[]"), DataError);
  EXPECT_THROW(parse_config("{"), DataError);
  EXPECT_THROW(load_config("/nonexistent/config.json"), DataError);
}

TEST(Config, RoundTrip) {
  RerankConfig cfg{0.3, 0.7, 0.123456789, 0.999, 4, 17};
  EXPECT_EQ(parse_config(config_to_json(cfg)), cfg);
  testing::TempDir dir("config");
  save_config(cfg, dir / "c.json");
  EXPECT_EQ(load_config(dir / "c.json"), cfg);
  EXPECT_NE(config_hash(cfg), config_hash(RerankConfig{}));
}

}  // namespace
}  // namespace coordrank
