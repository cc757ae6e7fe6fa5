#include "lira/engine.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace lira {

namespace {

struct Later
{
  bool
  operator()(const Event& a, const Event& b) const
  {
    if (a.time != b.time)
      return a.time > b.time;
    return a.seq > b.seq;
  }
};

std::uint64_t
splitmix64(std::uint64_t x)
{
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t
fnv1a(std::string_view s)
{
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

} // namespace

void
EventQueue::schedule(SimTime time, EventKind kind, NodeId node, Interface iface, std::uint64_t index)
{
  if (time < m_now || std::isnan(time))
    throw Error("event scheduled in the past (t=" + std::to_string(time) +
                ", now=" + std::to_string(m_now) + ")");
  m_heap.push_back(Event{time, m_seq++, kind, iface, node, index});
  std::push_heap(m_heap.begin(), m_heap.end(), Later{});
}

Event
EventQueue::pop()
{
  if (m_heap.empty())
    throw Error("pop from an empty event queue");
  std::pop_heap(m_heap.begin(), m_heap.end(), Later{});
  Event e = m_heap.back();
  m_heap.pop_back();
  m_now = e.time;
  ++m_processed;
  return e;
}

void
EventQueue::clear()
{
  m_heap.clear();
  m_now = 0;
  m_seq = 0;
  m_processed = 0;
}

Rng
rngStream(std::uint64_t seed, std::string_view label)
{
  auto s = splitmix64(seed ^ fnv1a(label));
  std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                    static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
  return Rng(seq);
}

std::uint64_t
uniformIndex(Rng& rng, std::uint64_t n)
{
  if (n <= 1)
    return 0;
  // Lemire's bounded draw with rejection
  __uint128_t m = static_cast<__uint128_t>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    std::uint64_t threshold = -n % n;
    while (low < threshold) {
      m = static_cast<__uint128_t>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

double
exponential(Rng& rng, double mean)
{
  // 1 - u lies in (0, 1], so the log is finite
  return -mean * std::log(1.0 - uniform01(rng));
}

} // namespace lira
