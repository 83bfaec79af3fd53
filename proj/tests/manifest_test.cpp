#include <gtest/gtest.h>

#include <string>

#include "conspec/manifest.hpp"

using namespace conspec;

TEST(Config, EmptyFileGivesDefaults) {
  const auto m = parse_config("test2", parse_config_text(""), {});
  EXPECT_EQ(m.dt, 0.01);
  EXPECT_EQ(m.angles, 8);
  EXPECT_TRUE(m.pad);
  EXPECT_EQ(m.half_width, 12.0);
  EXPECT_EQ(m.n, 32);
}

TEST(Config, Test1DefaultWidthDependsOnTheFunction) {
  EXPECT_EQ(parse_config("test1", {}, {}).half_width, 6.0);
  EXPECT_EQ(parse_config("test1", {}, {{"function", "bumps1d"}}).half_width, 12.0);
}

TEST(Config, RejectsBadValues) {
  EXPECT_THROW(parse_config("test2", parse_config_text("dt=-1"), {}), ConfigError);
  EXPECT_THROW(parse_config("test2", {}, {{"dt", "0"}}), ConfigError);
  EXPECT_THROW(parse_config("test2", {}, {{"angles", "8.5"}}), ConfigError);
  EXPECT_THROW(parse_config("test2", {}, {{"scheme", "rk4"}}), ConfigError);
  EXPECT_THROW(parse_config("test2", {}, {{"pad", "maybe"}}), ConfigError);
  EXPECT_THROW(parse_config("test1", {}, {{"n_list", "8,,16"}}), ConfigError);
  EXPECT_THROW(parse_config("test2", {}, {{"n", "8"}, {"points_per_axis", "12"}}), ConfigError);
}

TEST(Config, UnknownKeyIsNamed) {
  try {
    parse_config_text("dt = 0.01\nangels = 8\n");
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("angels"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
  EXPECT_THROW(parse_config_text("just words"), ConfigError);
}

TEST(Config, CommentsAndBlankLinesAreSkipped) {
  const auto kv = parse_config_text("# a comment\n\n  dt = 0.02  \nscheme=mpfs\n");
  ASSERT_EQ(kv.size(), 2u);
  EXPECT_EQ(kv.at("dt"), "0.02");
  EXPECT_EQ(kv.at("scheme"), "mpfs");
}

TEST(Config, FlagsWinOverFile) {
  const auto m = parse_config("test2", parse_config_text("dt=0.02\nangles=4\n"), {{"dt", "0.005"}});
  EXPECT_EQ(m.dt, 0.005);
  EXPECT_EQ(m.angles, 4);
  bool found = false;
  for (const auto& line : m.header_lines()) found |= line == "# dt=0.0050000000000000001";
  EXPECT_TRUE(found);
}

TEST(Config, ExperimentMustMatch) {
  EXPECT_THROW(parse_config("test2", parse_config_text("experiment=test3"), {}), ConfigError);
}

TEST(Config, HeaderRoundTrips) {
  auto m = parse_config("test3", {}, {{"scheme", "mepfs"}, {"b0", "0.2"}, {"pad", "off"}, {"tfinal", "3.5"}});
  std::string text;
  for (const auto& line : m.header_lines()) text += line.substr(2) + "\n";
  const auto again = parse_config("test3", parse_config_text(text), {});
  EXPECT_EQ(again.header_lines(), m.header_lines());
  const auto c = again.solver(SchemeVariant::mepfs);
  EXPECT_EQ(c.b0, 0.2);
  EXPECT_FALSE(c.pad);
  EXPECT_EQ(c.t_final, 3.5);
}

TEST(Config, AllExpandsToFourSchemes) {
  EXPECT_EQ(parse_config("test2", {}, {{"scheme", "all"}}).schemes().size(), 4u);
  EXPECT_EQ(parse_config("test2", {}, {{"scheme", "epfs"}}).schemes().front(), SchemeVariant::epfs);
}
