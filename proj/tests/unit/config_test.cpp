#include "lira/config.hpp"
#include "lira/experiments.hpp"

#include <doctest.h>

#include <sstream>

using namespace lira;

namespace {

ExperimentConfig
parse(const std::string& text)
{
  std::istringstream is(text);
  return parseConfig(is, "test.conf");
}

std::string
errorOf(const std::string& text)
{
  try {
    parse(text);
  }
  catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

} // namespace

TEST_SUITE("config") {

TEST_CASE("key value documents")
{
  auto c = parse("# comment\nstudy = ratio\n  alpha = 0.6  # trailing\nseeds = 1-3,7\n"
                 "strategies = CH_FA, CA_FH\npolicies = choice\n");
  CHECK(c.study == "ratio");
  CHECK(c.alpha == 0.6);
  CHECK(c.seeds == std::vector<std::uint64_t>{1, 2, 3, 7});
  REQUIRE(c.strategies.size() == 2);
  CHECK(c.strategies[1].token() == "CA_FH");
  CHECK(c.policies == std::vector<AdmissionKind>{AdmissionKind::Choice});
}

TEST_CASE("errors name the source, line and key")
{
  auto e = errorOf("alpha = 0.8\ncache_sise = 4\n");
  CHECK(e.find("test.conf:2:") != std::string::npos);
  CHECK(e.find("cache_sise") != std::string::npos);
  CHECK(errorOf("alpha = lots\n").find("alpha") != std::string::npos);
  CHECK(errorOf("just words\n").find("test.conf:1:") != std::string::npos);
  CHECK(errorOf("seeds = \n").find("seeds") != std::string::npos);
  CHECK_THROWS_AS(parseSeedList("5-2"), ConfigError);
}

TEST_CASE("presets")
{
  for (const auto& name : presetNames()) {
    ExperimentConfig c;
    CHECK_NOTHROW(applyPreset(c, name));
    CHECK_FALSE(c.seeds.empty());
  }
  ExperimentConfig c;
  applyPreset(c, "fig5");
  CHECK(c.study == "ratio");
  CHECK(c.ratios == std::vector<double>{0.25, 0.5, 1, 2, 4, 8, 16, 32});
  CHECK_THROWS_AS(applyPreset(c, "fig9"), ConfigError);
}

TEST_CASE("formatted config reparses to the same document")
{
  ExperimentConfig c;
  applyPreset(c, "fig6");
  auto text = formatConfig(c);
  CHECK(formatConfig(parse(text)) == text);
}

TEST_CASE("study expansion")
{
  ExperimentConfig c;
  c.seeds = {1, 2};
  CHECK(expandStudy(c).size() == 4 * 2 * 2);
  c.scheme = Scheme::LiraWith;
  CHECK((expandStudy(c).front().scheme == Scheme::LiraWith));
  c.study = "purging";
  CHECK(expandStudy(c).size() == (2 + 5) * 2 * 2);
  c.study = "ratio";
  CHECK(expandStudy(c).size() == 8 * 2 * 2);
  c.study = "incremental";
  CHECK(expandStudy(c).size() == 4 * 11 * 2 * 2);
  c.study = "nonsense";
  CHECK_THROWS(expandStudy(c));
  c.study = "deployment";
  c.seeds.clear();
  CHECK_THROWS(expandStudy(c));
}

}
