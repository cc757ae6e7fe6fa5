#ifndef LIRA_NODE_HPP
#define LIRA_NODE_HPP

#include "lira/cache.hpp"
#include "lira/cfib.hpp"
#include "lira/message.hpp"
#include "lira/topology.hpp"

#include <deque>
#include <optional>
#include <unordered_map>
#include <unordered_set>

namespace lira {

/// A request that is waiting at a C-FIB node for the chunk to come back.
struct Waiter
{
  Interface iface = kNoInterface;
  NodeId origin = kInvalidNode;
  std::uint64_t requestId = 0;
  bool viaDivert = false;
  bool late = false; ///< joined after the data started flowing
  Route route;
};

/// A request copy sent upstream whose answer is still outstanding.
struct Awaited
{
  Interface iface = kNoInterface;
  std::uint64_t requestId = 0;
  bool diverted = false;
};

/**
 * In-flight state for one cid at one C-FIB node: who is waiting downstream, which
 * interfaces a request copy went out of, and how the race between them was decided.
 */
struct Transfer
{
  boost::container::small_vector<Waiter, 2> waiters;
  boost::container::small_vector<Awaited, 3> awaited;
  NodeId target = kInvalidNode; ///< IP destination of the requests (the provider)
  Interface winner = kNoInterface;
  bool anchored = false;       ///< a copy went toward the provider along the IP path
  bool deferredAnchor = false; ///< anchor held back until the off-path copies fail
  bool reresolve = false;
  bool dataSeen = false;

  // the chunk as it arrived, replayed to late joiners at EoC
  NodeId servedBy = kInvalidNode;
  std::uint64_t version = 0;
  bool fromProvider = false;
  bool viaDivert = false;

  std::optional<Message> deferred; ///< anchor request held back under ti_first

  const Awaited*
  findAwaited(Interface iface, std::uint64_t requestId) const
  {
    for (const auto& a : awaited) {
      if (a.iface == iface && a.requestId == requestId)
        return &a;
    }
    return nullptr;
  }
};

/// Bounded memory of request ids handled at a node (oldest forgotten first).
class SeenRequests
{
public:
  explicit SeenRequests(std::size_t capacity = 8192)
    : m_capacity(capacity)
  {
  }

  bool contains(std::uint64_t id) const { return m_set.count(id) > 0; }

  void
  insert(std::uint64_t id)
  {
    if (m_capacity == 0 || !m_set.insert(id).second)
      return;
    m_order.push_back(id);
    if (m_order.size() > m_capacity) {
      m_set.erase(m_order.front());
      m_order.pop_front();
    }
  }

private:
  std::size_t m_capacity;
  std::unordered_set<std::uint64_t> m_set;
  std::deque<std::uint64_t> m_order;
};

struct NodeState
{
  NodeKind kind = NodeKind::Router;
  NodeRole role;
  std::optional<ContentStore> cache;
  std::optional<CfibTable> cfib;
  std::unordered_map<CidHandle, Transfer> transfers;
  SeenRequests seen;

  bool hasCache() const { return cache.has_value() && cache->capacity() > 0; }
  bool hasCfib() const { return cfib.has_value() && cfib->capacity() > 0; }
};

} // namespace lira

#endif // LIRA_NODE_HPP
