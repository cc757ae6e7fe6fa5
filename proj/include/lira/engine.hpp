#ifndef LIRA_ENGINE_HPP
#define LIRA_ENGINE_HPP

#include "lira/types.hpp"

#include <cstdint>
#include <random>
#include <stdexcept>
#include <string_view>
#include <vector>

namespace lira {

enum class EventKind : std::uint8_t {
  Deliver,         ///< message `index` arrives at `node` through `iface`
  ChunkEoc,        ///< end of a chunk transfer at `node` for cid `index`
  RotationDue,     ///< name rotation check for object `index`
  FreshnessSample,
  RequestArrival,  ///< workload fetch `index` starts
  ResolveArrival,  ///< resolve `index` reaches the provider
  ResolveReply,    ///< resolve reply `index` reaches its client
};

struct Event
{
  SimTime time = 0;
  std::uint64_t seq = 0;
  EventKind kind = EventKind::Deliver;
  Interface iface = kNoInterface;
  NodeId node = kInvalidNode;
  std::uint64_t index = 0;
};

/// Time-ordered event queue; equal times pop in scheduling order.
class EventQueue
{
public:
  class Error : public std::logic_error
  {
  public:
    using std::logic_error::logic_error;
  };

  void
  schedule(SimTime time, EventKind kind, NodeId node = kInvalidNode, Interface iface = kNoInterface,
           std::uint64_t index = 0);

  bool empty() const { return m_heap.empty(); }
  std::size_t size() const { return m_heap.size(); }

  /// Removes and returns the earliest event, advancing now().
  Event
  pop();

  SimTime now() const { return m_now; }
  std::uint64_t processed() const { return m_processed; }

  void
  clear();

private:
  std::vector<Event> m_heap;
  SimTime m_now = 0;
  std::uint64_t m_seq = 0;
  std::uint64_t m_processed = 0;
};

using Rng = std::mt19937_64;

/// Independent deterministic generator for (seed, label).
Rng
rngStream(std::uint64_t seed, std::string_view label);

/// Uniform double in [0, 1) from the top 53 bits of one draw.
inline double
uniform01(Rng& rng)
{
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform integer in [0, n) without modulo bias.
std::uint64_t
uniformIndex(Rng& rng, std::uint64_t n);

/// Exponential variate with the given mean.
double
exponential(Rng& rng, double mean);

} // namespace lira

#endif // LIRA_ENGINE_HPP
