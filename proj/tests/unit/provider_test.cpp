#include "lira/provider.hpp"

#include <doctest.h>

#include <sstream>

using namespace lira;

namespace {

ProviderConfig
catalog(std::uint32_t objects, std::uint32_t chunks, std::uint32_t bundle)
{
  ProviderConfig c;
  c.objects = objects;
  c.chunksPerObject = chunks;
  c.bundleSize = bundle;
  return c;
}

} // namespace

TEST_SUITE("provider") {

TEST_CASE("bundles cover the next chunks and truncate at the end")
{
  Provider p(catalog(2, 10, 4), {0});
  auto r = p.resolve(1, 0, 0.0, 5);
  REQUIRE(r.bundle.size() == 4);
  for (std::uint32_t c = 0; c < 4; ++c)
    CHECK(r.bundle[c] == p.current(1, c));
  auto tail = p.resolve(1, 8, 0.0, 5);
  REQUIRE(tail.bundle.size() == 2);
  CHECK(p.info(tail.bundle[0]).chunk == 8);
  CHECK(p.info(tail.bundle[1]).chunk == 9);
  CHECK(p.accessCount(1) == 2);
  CHECK(p.accessCount(0) == 0);
  CHECK(p.totalResolves() == 2);
  CHECK_THROWS_AS(p.resolve(2, 0, 0.0, 5), Provider::Error);
  CHECK_THROWS_AS(p.resolve(0, 10, 0.0, 5), Provider::Error);
}

TEST_CASE("access log export")
{
  Provider p(catalog(3, 1, 8), {0});
  p.resolve(2, 0, 1.5, 7);
  std::ostringstream os;
  p.writeAccessLog(os);
  CHECK(os.str() == "time,object_id,client_id\n1.5,2,7\n");
}

TEST_CASE("rotation re-mints every chunk of an object")
{
  auto c = catalog(1, 2, 8);
  c.rotation = true;
  c.tBase = 1000;
  Provider p(c, {0});
  auto old0 = p.current(0, 0);
  auto old1 = p.current(0, 1);
  auto first = 1000.0;
  auto pairs = p.rotateDue(first);
  REQUIRE(pairs.size() == 2);
  CHECK(pairs[0].first == old0);
  CHECK(pairs[1].first == old1);
  CHECK(p.currentVersion(0, 0) == 1);
  CHECK(p.currentVersion(0, 1) == 1);
  CHECK_FALSE(p.info(pairs[0].second).padding == p.info(old0).padding);

  auto at = p.rotationTimes(0).front();
  CHECK(at > 0.0);
  CHECK(at <= 1000.0);
  // no requests in the window: next rotation a full T_base later
  CHECK(p.rotateDue(at + 999.0).empty());
  CHECK(p.rotateDue(at + 1000.0).size() == 2);

  auto r = p.resolve(0, 0, at + 1000.0, 1);
  CHECK(r.bundle[0] == p.current(0, 0));
  CHECK(r.versions[0] == 2);
  CHECK_FALSE(p.isCurrent(old0, at + 1000.0));
  CHECK(p.isCurrent(r.bundle[0], at + 1000.0));
}

TEST_CASE("purge lists name the retired versions")
{
  auto c = catalog(1, 1, 8);
  c.rotation = true;
  c.purgeDepth = 2;
  Provider p(c, {0});
  auto v0 = p.current(0, 0);
  CHECK(p.purgeList(v0).empty());
  p.rotateDue(1000.0);
  auto v1 = p.current(0, 0);
  CHECK(p.purgeList(v1) == std::vector<CidHandle>{v0});
  auto at = p.rotationTimes(0).back();
  auto v2 = p.rotateDue(at + 1000.0).at(0).second;
  p.rotateDue(at + 2000.0);
  auto v3 = p.current(0, 0);
  CHECK(p.purgeList(v3) == std::vector<CidHandle>{v2, v1});
}

TEST_CASE("permanent naming keeps the cid and bumps the version")
{
  auto c = catalog(1, 1, 8);
  c.rotation = true;
  c.naming = NamingMode::Permanent;
  Provider p(c, {0});
  auto cid = p.current(0, 0);
  auto pairs = p.rotateDue(1000.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == pairs[0].second);
  CHECK(p.current(0, 0) == cid);
  CHECK(p.servedVersion(cid, 1000.0) == 1);
}

TEST_CASE("popular objects rotate faster")
{
  auto c = catalog(2, 1, 8);
  c.rotation = true;
  c.tBase = 100;
  c.tMin = 1;
  c.keepAccessLog = false;
  Provider p(c, {0});
  for (int step = 0; step < 20000; ++step) {
    double t = step * 0.1;
    p.resolve(0, 0, t, 1);
    if (step % 10 == 0)
      p.resolve(1, 0, t, 1);
  }
  auto gaps = [&](std::uint32_t o) {
    const auto& ts = p.rotationTimes(o);
    return (ts.back() - ts.front()) / static_cast<double>(ts.size() - 1);
  };
  REQUIRE(p.rotationTimes(0).size() > 2);
  REQUIRE(p.rotationTimes(1).size() > 2);
  CHECK(gaps(0) < gaps(1));
}

}
