#include "lira/cfib.hpp"

#include "../oracles.hpp"

#include <doctest.h>

#include <random>

using namespace lira;

namespace {

constexpr CidHandle x1 = 1;
constexpr CidHandle x2 = 2;
constexpr NodeId clientB = 42;

std::string
row(const CfibTable& t, CidHandle cid)
{
  const auto* e = t.peek(cid);
  REQUIRE(e != nullptr);
  return formatCfibRow(*e, "x" + std::to_string(cid), [](NodeId n) {
    return n == clientB ? std::string("B") : std::to_string(n);
  });
}

} // namespace

TEST_SUITE("cfib") {

TEST_CASE("request forwarding and end of chunk rows")
{
  CfibTable r1(8);
  r1.onRequestForwarded(x1, 3, 1);
  CHECK(row(r1, x1) == "x1,1,3,-,-");
  r1.onEoc(x1);
  CHECK(row(r1, x1) == "x1,1,-,3,-");

  CfibTable r3(8);
  r3.onRequestForwarded(x1, 2, 1);
  CHECK(row(r3, x1) == "x1,1,2,-,-");

  r1.onRequestForwarded(x2, 3, 1);
  r1.onRequestSuppressed(x2, 2, clientB);
  CHECK(row(r1, x2) == "x2,1,2;3,-,B");
  r1.onRequestSuppressed(x2, 2, clientB);
  CHECK(row(r1, x2) == "x2,1,2;3,-,B");
  r1.onEoc(x2);
  CHECK(row(r1, x2) == "x2,1,-,2;3,-");

  CfibTable t(8);
  t.onRequestForwarded(x1, 3, 1);
  t.onEoc(x1);
  t.onLocalHit(x1, 2, 1);
  CHECK(row(t, x1) == "x1,1,2,3,-");
  t.onEoc(x1);
  CHECK(row(t, x1) == "x1,1,-,2;3,-");
  t.onEoc(99);
  CHECK(t.size() == 1);
  CHECK_THROWS(t.onRequestSuppressed(99, 1, clientB));
}

TEST_CASE("forwarding decisions")
{
  CfibTable t(8);
  t.onRequestForwarded(x1, 3, 1);
  t.onEoc(x1);
  auto d = t.forwardingTargets(x1, 2);
  CHECK(d.kind == ForwardDecision::Forward);
  CHECK(d.targets == InterfaceSet{1, 3});
  CHECK(t.forwardingTargets(x1, 3).kind == ForwardDecision::Discard);
  CHECK(t.forwardingTargets(x2, 2).kind == ForwardDecision::NoEntry);

  auto back = t.forwardingTargets(x1, 1);
  CHECK(back.kind == ForwardDecision::Forward);
  CHECK(back.targets == InterfaceSet{3});

  t.onRequestForwarded(x2, 3, 1);
  CHECK(t.forwardingTargets(x2, 2).kind == ForwardDecision::Suppress);
}

TEST_CASE("pruning breadcrumbs")
{
  CfibTable t(8);
  t.onRequestForwarded(x1, 3, 1);
  t.onRequestSuppressed(x1, 2, clientB);
  t.onEoc(x1);
  t.prune(x1, 3);
  CHECK(row(t, x1) == "x1,1,-,2,-");
  t.prune(x1, 5);
  CHECK(row(t, x1) == "x1,1,-,2,-");
  t.prune(x1, 2);
  CHECK(row(t, x1) == "x1,1,-,-,-");
  t.prune(x2, 1);
  CHECK(t.size() == 1);
}

TEST_CASE("capacity one evicts the previous entry")
{
  CfibTable t(1);
  t.onRequestForwarded(x2, 2, 1);
  t.onRequestForwarded(x1, 2, 1);
  CHECK(t.peek(x2) == nullptr);
  CHECK(t.peek(x1) != nullptr);
  CHECK(t.evictions() == 1);
}

TEST_CASE("fifo eviction matches a queue")
{
  std::mt19937 gen(5);
  std::vector<std::uint32_t> trace;
  for (int i = 0; i < 5000; ++i)
    trace.push_back(static_cast<std::uint32_t>(gen() % 40));
  for (std::size_t cap : {1u, 3u, 16u, 39u}) {
    CfibTable t(cap);
    auto want = oracle::fifoReplay(trace, cap);
    for (std::size_t i = 0; i < trace.size(); ++i) {
      auto before = t.evictions();
      t.onRequestForwarded(trace[i], 2, 1);
      t.onEoc(trace[i]);
      CHECK((t.evictions() > before) == (want[i] >= 0));
      if (want[i] >= 0)
        CHECK(t.peek(static_cast<CidHandle>(want[i])) == nullptr);
      CHECK(t.size() <= cap);
    }
  }
}

TEST_CASE("interface sets stay disjoint")
{
  std::mt19937 gen(11);
  CfibTable t(6);
  for (int i = 0; i < 4000; ++i) {
    CidHandle cid = gen() % 10;
    Interface a = static_cast<Interface>(1 + gen() % 4);
    Interface b = static_cast<Interface>(1 + gen() % 4);
    switch (gen() % 5) {
    case 0:
      if (a != b)
        t.onRequestForwarded(cid, a, b);
      break;
    case 1:
      if (auto* e = t.peek(cid); e && !e->ifO.empty())
        t.onRequestSuppressed(cid, a, gen() % 3);
      break;
    case 2:
      t.onEoc(cid);
      break;
    case 3:
      t.prune(cid, a);
      break;
    default: {
      auto d = t.forwardingTargets(cid, a);
      if (d.kind == ForwardDecision::Forward)
        CHECK_FALSE(d.targets.contains(a));
    }
    }
    t.forEach([](const CfibEntry& e) {
      for (auto i : e.ifO)
        CHECK_FALSE(e.ifTI.contains(i));
    });
    CHECK(t.size() <= 6);
  }
}

}
