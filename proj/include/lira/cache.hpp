#ifndef LIRA_CACHE_HPP
#define LIRA_CACHE_HPP

#include "lira/engine.hpp"
#include "lira/provider.hpp"

#include <list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace lira {

enum class CacheMode : std::uint8_t {
  Lira, ///< no freshness attribute; currency is carried by the name
  Ttl,
};

enum class CacheReplacement : std::uint8_t {
  Lru,
  Fifo,
};

enum class LookupResult : std::uint8_t {
  Hit,
  StaleHit,
  Miss,
};

/// How TTL-mode hits on expired entries are treated.
enum class TtlMode : std::uint8_t {
  AllHits,   ///< expired entries are still served
  FreshOnly, ///< expired entries are evicted and the lookup misses
};

struct StoredChunk
{
  CidHandle cid = kNoCid;
  std::uint64_t version = 0;
  SimTime insertTime = 0;
};

/// Per-node content store.
class ContentStore
{
public:
  ContentStore(std::size_t capacity, CacheMode mode = CacheMode::Lira,
               CacheReplacement replacement = CacheReplacement::Lru);

  std::size_t capacity() const { return m_capacity; }
  std::size_t size() const { return m_index.size(); }
  CacheMode mode() const { return m_mode; }

  /// Lira mode: Hit iff present. Ttl mode: Hit when age <= ttl; otherwise StaleHit under
  /// AllHits, or Miss with eviction under FreshOnly. Any hit refreshes recency.
  LookupResult
  lookup(CidHandle cid, SimTime now, TtlMode ttlMode = TtlMode::FreshOnly, double ttl = 0.0);

  /// The stored record for `cid`, without touching recency.
  const StoredChunk*
  peek(CidHandle cid) const;

  bool contains(CidHandle cid) const { return m_index.count(cid) > 0; }

  /// Inserts with freshest recency; returns the evicted cid, if any. A duplicate insert
  /// only refreshes recency (and the stored version/time).
  std::optional<CidHandle>
  admit(CidHandle cid, SimTime now, std::uint64_t version = 0);

  /// Removes the listed cids; returns how many were present.
  std::size_t
  purge(std::span<const CidHandle> cids);

  /// Cids from least to most recently used (or oldest to newest under FIFO).
  std::vector<CidHandle>
  contents() const;

private:
  void
  erase(CidHandle cid);

private:
  std::size_t m_capacity;
  CacheMode m_mode;
  CacheReplacement m_replacement;
  std::list<StoredChunk> m_order;
  std::unordered_map<CidHandle, std::list<StoredChunk>::iterator> m_index;
};

enum class AdmissionKind : std::uint8_t {
  Lce,
  Choice,
};

/// LCE: every node of the path; Choice: one uniformly drawn node; empty path: none.
std::vector<NodeId>
selectCacheNodes(std::span<const NodeId> path, AdmissionKind kind, Rng& rng);

} // namespace lira

#endif // LIRA_CACHE_HPP
