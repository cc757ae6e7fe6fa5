#include "lira/metrics.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lira;

TEST_SUITE("metrics") {

TEST_CASE("hit classification")
{
  CHECK((classifyHit(false, false, false) == Outcome::OnPath));
  CHECK((classifyHit(false, false, true) == Outcome::OffPath));
  CHECK((classifyHit(true, false, false) == Outcome::Provider));
  CHECK((classifyHit(false, true, false) == Outcome::Stale));
  CHECK((classifyHit(false, true, true) == Outcome::Stale));
}

TEST_CASE("fractions sum to one")
{
  RunMetrics m;
  std::mt19937 gen(2);
  for (int i = 0; i < 1000; ++i) {
    HitRecord r;
    r.outcome = static_cast<Outcome>(gen() % 4);
    m.record(r, 0.001 * (gen() % 10), false);
  }
  double sum = 0;
  for (auto o : {Outcome::Provider, Outcome::OnPath, Outcome::OffPath, Outcome::Stale})
    sum += m.fraction(o);
  CHECK(sum == doctest::Approx(1.0));
  CHECK(m.requests() == 1000);
  CHECK(m.hitRatio() == doctest::Approx(m.fraction(Outcome::OnPath) + m.fraction(Outcome::OffPath)));
  CHECK(m.staleAtDeliveryRatio() == 0.0);
}

TEST_CASE("summaries and rank correlation")
{
  std::vector<double> v{1.0, 2.0, 3.0, 4.0};
  auto s = summarize(v);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.sem == doctest::Approx(std::sqrt(5.0 / 3.0 / 4.0)));
  CHECK(s.n == 4);

  std::mt19937 gen(4);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> x, y;
    for (int i = 0; i < 12; ++i) {
      x.push_back(u(gen));
      y.push_back(x.back() + 0.5 * u(gen));
    }
    CHECK(spearman(x, y) == doctest::Approx(oracle::spearmanNoTies(x, y)));
  }
  std::vector<double> a{1, 2, 3}, b{3, 2, 1};
  CHECK(spearman(a, b) == doctest::Approx(-1.0));
}

TEST_CASE("freshness mean over samples")
{
  RunMetrics m;
  FreshnessSample s1;
  s1.total = 10;
  s1.fresh = 5;
  FreshnessSample s2;
  s2.total = 4;
  s2.fresh = 1;
  m.addSample(s1);
  m.addSample(s2);
  CHECK(m.freshness().mean == doctest::Approx((0.5 + 0.25) / 2));
  CHECK(m.freshness().n == 2);
}

}
