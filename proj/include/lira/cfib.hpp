#ifndef LIRA_CFIB_HPP
#define LIRA_CFIB_HPP

#include "lira/provider.hpp"
#include "lira/types.hpp"

#include <boost/container/small_vector.hpp>

#include <functional>
#include <iosfwd>
#include <list>
#include <optional>
#include <span>
#include <unordered_map>

namespace lira {

struct CfibEntry
{
  CidHandle cid = kNoCid;
  Interface ifI = kNoInterface; ///< kNoInterface when unset
  InterfaceSet ifO;
  InterfaceSet ifTI;
  boost::container::small_vector<NodeId, 2> mip; ///< sorted client addresses

  bool
  hasIfI() const
  {
    return ifI != kNoInterface;
  }
};

struct ForwardDecision
{
  enum Kind : std::uint8_t {
    NoEntry,
    Discard,
    Suppress,
    Forward,
  };

  Kind kind = NoEntry;
  InterfaceSet targets; ///< for Forward
};

enum class CfibReplacement : std::uint8_t {
  Fifo,
  Lru,
};

/**
 * Content Forwarding Information Base: bounded per-chunk forwarding state.
 *
 * Replacement is a circular queue (oldest insertion evicted first) unless LRU is
 * selected, in which case lookups through find() refresh recency.
 */
class CfibTable
{
public:
  explicit CfibTable(std::size_t capacity, CfibReplacement replacement = CfibReplacement::Fifo);

  std::size_t capacity() const { return m_capacity; }
  std::size_t size() const { return m_index.size(); }

  const CfibEntry*
  peek(CidHandle cid) const;

  /// Like peek() but counts as a use under LRU.
  CfibEntry*
  find(CidHandle cid);

  /// if_I := out, in -> if_O, in removed from if_TI. Creates the entry if needed.
  void
  onRequestForwarded(CidHandle cid, Interface in, Interface out);

  /// in -> if_O, client -> mIP. The entry must exist.
  void
  onRequestSuppressed(CidHandle cid, Interface in, NodeId client);

  /// A locally cached copy is sent out `in`: creates the entry (if_I = `ipNextHop`) if
  /// absent and adds `in` to if_O.
  void
  onLocalHit(CidHandle cid, Interface in, Interface ipNextHop);

  /// if_O moves into if_TI; if_O and mIP are cleared. Missing entry: no-op.
  void
  onEoc(CidHandle cid);

  ForwardDecision
  forwardingTargets(CidHandle cid, Interface in) const;

  /// Removes `iface` from if_TI. Missing entry: no-op.
  void
  prune(CidHandle cid, Interface iface);

  /// Data first arrived through `iface`: it becomes if_I and leaves if_TI.
  void
  setIncoming(CidHandle cid, Interface iface);

  /// Drops `iface` from if_O and the given clients from mIP (downstream cancellation).
  void
  cancelOutgoing(CidHandle cid, Interface iface, std::span<const NodeId> clients);

  /// Clears if_O and mIP without creating breadcrumbs (failed transfer).
  void
  abortTransfer(CidHandle cid);

  /// Entries oldest first (replacement order).
  void
  forEach(const std::function<void(const CfibEntry&)>& fn) const;

  std::uint64_t evictions() const { return m_evictions; }

private:
  CfibEntry&
  obtain(CidHandle cid);

private:
  std::size_t m_capacity;
  CfibReplacement m_replacement;
  std::list<CfibEntry> m_order;
  std::unordered_map<CidHandle, std::list<CfibEntry>::iterator> m_index;
  std::uint64_t m_evictions = 0;
};

/// One CSV row `cid,if_I,if_O,if_TI,mIP`; `cidText` renders the cid column.
std::string
formatCfibRow(const CfibEntry& e, const std::string& cidText,
              const std::function<std::string(NodeId)>& clientName);

} // namespace lira

#endif // LIRA_CFIB_HPP
