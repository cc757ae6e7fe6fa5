#ifndef LIRA_MESSAGE_HPP
#define LIRA_MESSAGE_HPP

#include "lira/provider.hpp"
#include "lira/types.hpp"

#include <boost/container/small_vector.hpp>

#include <cstdint>
#include <deque>
#include <vector>

namespace lira {

enum class MessageKind : std::uint8_t {
  Request,
  Data,
  Nack,
  Resolve,
  ResolveReply,
};

const char*
toString(MessageKind k);

enum class NackReason : std::uint8_t {
  Failure,   ///< the copy found nothing (dead breadcrumb, duplicate, loop)
  Reresolve, ///< the provider no longer serves this cid
  Cancel,    ///< the downstream side no longer wants the data
};

/// Interfaces to retrace toward the requester; the top is popped at each stateless hop.
using Route = boost::container::small_vector<Interface, 10>;

struct Message
{
  MessageKind kind = MessageKind::Request;
  NackReason reason = NackReason::Failure;
  bool diverted = false;  ///< Request: this copy left the IP path at its last C-FIB hop
  bool viaDivert = false; ///< Request: a divert happened upstream; Data: served through one
  bool admitAll = false;  ///< Data: leave a copy in every cache traversed
  bool fromProvider = false;
  bool purge = false;     ///< Data: carries the purge list of its chunk

  CidHandle cid = kNoCid;
  NodeId ipSrc = kInvalidNode;
  NodeId ipDst = kInvalidNode;
  NodeId origin = kInvalidNode; ///< requesting client
  std::uint64_t requestId = 0;
  std::uint32_t hops = 0;

  // Choice admission: reservoir over the cache-capable nodes the request passed
  std::uint32_t cachesSeen = 0;
  NodeId cacheAt = kInvalidNode;

  NodeId servedBy = kInvalidNode;
  std::uint64_t version = 0;

  Route route;
};

/// Recycling slab of messages addressed by index; references stay valid across allocations.
class MessagePool
{
public:
  std::uint32_t
  allocate()
  {
    if (!m_free.empty()) {
      auto i = m_free.back();
      m_free.pop_back();
      m_slots[i] = Message{};
      return i;
    }
    m_slots.emplace_back();
    return static_cast<std::uint32_t>(m_slots.size() - 1);
  }

  std::uint32_t
  clone(std::uint32_t from)
  {
    auto i = allocate();
    m_slots[i] = m_slots[from];
    return i;
  }

  void
  release(std::uint32_t i)
  {
    m_free.push_back(i);
  }

  Message& operator[](std::uint32_t i) { return m_slots[i]; }
  const Message& operator[](std::uint32_t i) const { return m_slots[i]; }

  std::size_t live() const { return m_slots.size() - m_free.size(); }

private:
  std::deque<Message> m_slots;
  std::vector<std::uint32_t> m_free;
};

} // namespace lira

#endif // LIRA_MESSAGE_HPP
