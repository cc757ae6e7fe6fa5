#include "lira/cache.hpp"

namespace lira {

ContentStore::ContentStore(std::size_t capacity, CacheMode mode, CacheReplacement replacement)
  : m_capacity(capacity)
  , m_mode(mode)
  , m_replacement(replacement)
{
  m_index.reserve(capacity + 1);
}

LookupResult
ContentStore::lookup(CidHandle cid, SimTime now, TtlMode ttlMode, double ttl)
{
  auto it = m_index.find(cid);
  if (it == m_index.end())
    return LookupResult::Miss;

  auto result = LookupResult::Hit;
  if (m_mode == CacheMode::Ttl && now - it->second->insertTime > ttl) {
    if (ttlMode == TtlMode::FreshOnly) {
      erase(cid);
      return LookupResult::Miss;
    }
    result = LookupResult::StaleHit;
  }
  if (m_replacement == CacheReplacement::Lru)
    m_order.splice(m_order.end(), m_order, it->second);
  return result;
}

const StoredChunk*
ContentStore::peek(CidHandle cid) const
{
  auto it = m_index.find(cid);
  return it == m_index.end() ? nullptr : &*it->second;
}

std::optional<CidHandle>
ContentStore::admit(CidHandle cid, SimTime now, std::uint64_t version)
{
  if (m_capacity == 0)
    return std::nullopt;
  auto it = m_index.find(cid);
  if (it != m_index.end()) {
    it->second->version = version;
    it->second->insertTime = now;
    m_order.splice(m_order.end(), m_order, it->second);
    return std::nullopt;
  }

  std::optional<CidHandle> victim;
  if (m_index.size() >= m_capacity) {
    victim = m_order.front().cid;
    m_index.erase(m_order.front().cid);
    m_order.pop_front();
  }
  m_order.push_back(StoredChunk{cid, version, now});
  m_index.emplace(cid, std::prev(m_order.end()));
  return victim;
}

std::size_t
ContentStore::purge(std::span<const CidHandle> cids)
{
  std::size_t n = 0;
  for (auto c : cids) {
    if (m_index.count(c) > 0) {
      erase(c);
      ++n;
    }
  }
  return n;
}

std::vector<CidHandle>
ContentStore::contents() const
{
  std::vector<CidHandle> out;
  out.reserve(m_order.size());
  for (const auto& s : m_order)
    out.push_back(s.cid);
  return out;
}

void
ContentStore::erase(CidHandle cid)
{
  auto it = m_index.find(cid);
  if (it == m_index.end())
    return;
  m_order.erase(it->second);
  m_index.erase(it);
}

std::vector<NodeId>
selectCacheNodes(std::span<const NodeId> path, AdmissionKind kind, Rng& rng)
{
  if (path.empty())
    return {};
  if (kind == AdmissionKind::Lce)
    return {path.begin(), path.end()};
  return {path[uniformIndex(rng, path.size())]};
}

} // namespace lira
