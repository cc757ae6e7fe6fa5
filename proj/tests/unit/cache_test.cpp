#include "lira/cache.hpp"
#include "lira/workload.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <cmath>

using namespace lira;

TEST_SUITE("cache") {

TEST_CASE("lookups by mode")
{
  ContentStore lira(4);
  lira.admit(1, 0.0);
  CHECK(lira.lookup(1, 1e6) == LookupResult::Hit);
  CHECK(lira.lookup(2, 0.0) == LookupResult::Miss);

  ContentStore ttl(4, CacheMode::Ttl);
  ttl.admit(1, 0.0);
  CHECK(ttl.lookup(1, 5.0, TtlMode::AllHits, 10.0) == LookupResult::Hit);
  CHECK(ttl.lookup(1, 15.0, TtlMode::AllHits, 10.0) == LookupResult::StaleHit);
  CHECK(ttl.contains(1));
  CHECK(ttl.lookup(1, 15.0, TtlMode::FreshOnly, 10.0) == LookupResult::Miss);
  CHECK_FALSE(ttl.contains(1));
}

TEST_CASE("stale hits refresh recency")
{
  ContentStore s(2, CacheMode::Ttl);
  s.admit(1, 0.0);
  s.admit(2, 0.0);
  CHECK(s.lookup(1, 20.0, TtlMode::AllHits, 10.0) == LookupResult::StaleHit);
  CHECK(s.admit(3, 20.0) == std::optional<CidHandle>(2));
}

TEST_CASE("admission and replacement")
{
  ContentStore s(2);
  s.admit(1, 0.0);
  s.admit(2, 0.0);
  s.lookup(1, 0.0);
  CHECK(s.admit(3, 0.0) == std::optional<CidHandle>(2));
  CHECK(s.admit(3, 1.0) == std::nullopt);
  CHECK(s.size() == 2);

  ContentStore fifo(2, CacheMode::Lira, CacheReplacement::Fifo);
  fifo.admit(1, 0.0);
  fifo.admit(2, 0.0);
  fifo.lookup(1, 0.0);
  CHECK(fifo.admit(3, 0.0) == std::optional<CidHandle>(1));

  ContentStore none(0);
  CHECK(none.admit(1, 0.0) == std::nullopt);
  CHECK(none.size() == 0);
  CHECK(none.lookup(1, 0.0) == LookupResult::Miss);
}

TEST_CASE("purging")
{
  ContentStore s(4);
  s.admit(1, 0.0);
  s.admit(2, 0.0);
  std::vector<CidHandle> some{1, 3};
  CHECK(s.purge(some) == 1);
  CHECK(s.purge({}) == 0);
  std::vector<CidHandle> all = s.contents();
  CHECK(s.purge(all) == 1);
  CHECK(s.size() == 0);
}

TEST_CASE("lru matches the brute-force oracle")
{
  ZipfDistribution zipf(0.8, 500);
  auto rng = rngStream(3, "cache-test");
  std::vector<std::uint32_t> trace;
  for (int i = 0; i < 10000; ++i)
    trace.push_back(zipf.sample(rng));
  for (std::size_t cap : {1u, 2u, 17u, 64u, 256u}) {
    ContentStore s(cap);
    auto want = oracle::lruReplay(trace, cap);
    std::size_t mismatches = 0;
    for (std::size_t i = 0; i < trace.size(); ++i) {
      bool hit = s.lookup(trace[i], 0.0) == LookupResult::Hit;
      if (!hit)
        s.admit(trace[i], 0.0);
      mismatches += hit != want[i];
    }
    CHECK(mismatches == 0);
  }
}

TEST_CASE("cache node selection")
{
  Rng rng = rngStream(1, "choice");
  std::vector<NodeId> path{10, 30};
  CHECK(selectCacheNodes(path, AdmissionKind::Lce, rng) == path);
  CHECK(selectCacheNodes({}, AdmissionKind::Lce, rng).empty());
  CHECK(selectCacheNodes({}, AdmissionKind::Choice, rng).empty());

  const int trials = 10000;
  int first = 0;
  for (int i = 0; i < trials; ++i) {
    auto pick = selectCacheNodes(path, AdmissionKind::Choice, rng);
    REQUIRE(pick.size() == 1);
    first += pick[0] == 10;
  }
  double sigma = std::sqrt(trials * 0.25);
  CHECK(std::abs(first - trials / 2) <= 3 * sigma);
}

}
