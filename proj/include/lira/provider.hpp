#ifndef LIRA_PROVIDER_HPP
#define LIRA_PROVIDER_HPP

#include "lira/engine.hpp"
#include "lira/naming.hpp"
#include "lira/types.hpp"

#include <cstdint>
#include <iosfwd>
#include <queue>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace lira {

/// Dense simulator-local handle for an interned ContentId.
using CidHandle = std::uint32_t;
inline constexpr CidHandle kNoCid = 0xffffffffu;

enum class NamingMode : std::uint8_t {
  Ephemeral, ///< every rotation mints a new cid
  Permanent, ///< the cid never changes; rotations only bump the content version
};

struct ProviderConfig
{
  std::uint32_t objects = 10000;
  std::uint32_t chunksPerObject = 1;
  std::uint32_t bundleSize = 8;
  bool rotation = false;
  double tBase = 1000.0;
  double tMin = 1.0;
  NamingMode naming = NamingMode::Ephemeral;
  std::size_t purgeDepth = 4;
  DigestAlgorithm digest = DigestAlgorithm::Sha256;
  std::string serviceOptions;
  bool keepAccessLog = true;
  std::uint64_t seed = 1;
};

struct CidInfo
{
  ContentId id;
  std::uint32_t object = 0;
  std::uint32_t chunk = 0;
  std::uint64_t version = 0;
  Padding padding{};
};

struct ResolutionReply
{
  std::uint32_t object = 0;
  std::uint32_t startChunk = 0;
  std::vector<CidHandle> bundle;
  std::vector<std::uint64_t> versions; ///< content version behind each bundle entry
  NodeId provider = kInvalidNode;
};

struct AccessRecord
{
  SimTime time = 0;
  std::uint32_t object = 0;
  NodeId client = kInvalidNode;
};

/**
 * Content provider(s): catalog, resolution into bundles of current cids, access log,
 * popularity-driven name rotation and purge lists.
 *
 * Objects are spread over the provider nodes by object id modulo the provider count.
 * Rotations are applied lazily, in due-time order, whenever the provider is consulted,
 * which is observationally the same as firing them at their due times.
 */
class Provider
{
public:
  class Error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  Provider(const ProviderConfig& config, std::vector<NodeId> providerNodes);

  const ProviderConfig& config() const { return m_config; }

  NodeId
  homeNode(std::uint32_t object) const
  {
    return m_nodes[object % m_nodes.size()];
  }

  /// Logs the access, counts popularity and returns up to B current cids.
  ResolutionReply
  resolve(std::uint32_t object, std::uint32_t startChunk, SimTime now, NodeId client);

  /// True when `cid` is the current name of its chunk (applies due rotations first).
  bool
  isCurrent(CidHandle cid, SimTime now);

  /// Content version served for `cid` right now.
  std::uint64_t
  servedVersion(CidHandle cid, SimTime now);

  /// Rotates every object due at or before `now`; returns (old, new) cid pairs.
  std::vector<std::pair<CidHandle, CidHandle>>
  rotateDue(SimTime now);

  void
  advanceTo(SimTime now)
  {
    if (m_config.rotation && !m_due.empty() && m_due.top().first <= now)
      rotateDue(now);
  }

  const CidInfo& info(CidHandle cid) const { return m_cids.at(cid); }
  std::size_t cidCount() const { return m_cids.size(); }

  CidHandle
  current(std::uint32_t object, std::uint32_t chunk) const
  {
    return m_chunks[index(object, chunk)].history.back();
  }

  std::uint64_t
  currentVersion(std::uint32_t object, std::uint32_t chunk) const
  {
    return m_chunks[index(object, chunk)].version;
  }

  /// Retired cids of the same chunk older than `cid`, newest first, at most purgeDepth.
  std::vector<CidHandle>
  purgeList(CidHandle cid) const;

  std::uint64_t accessCount(std::uint32_t object) const { return m_accessCount.at(object); }
  std::uint64_t totalResolves() const { return m_totalResolves; }
  std::uint64_t rotations() const { return m_rotations; }
  const std::vector<AccessRecord>& accessLog() const { return m_log; }

  /// Times at which `object` was rotated, in order.
  const std::vector<SimTime>& rotationTimes(std::uint32_t object) const
  {
    return m_objects.at(object).rotatedAt;
  }

  void
  writeAccessLog(std::ostream& os) const;

private:
  std::size_t
  index(std::uint32_t object, std::uint32_t chunk) const
  {
    if (object >= m_config.objects || chunk >= m_config.chunksPerObject)
      throw Error("no chunk " + std::to_string(chunk) + " of object " + std::to_string(object));
    return static_cast<std::size_t>(object) * m_config.chunksPerObject + chunk;
  }

  CidHandle
  mint(std::uint32_t object, std::uint32_t chunk, std::uint64_t version);

  void
  rotate(std::uint32_t object, SimTime at, std::vector<std::pair<CidHandle, CidHandle>>& out);

private:
  struct ChunkState
  {
    std::uint64_t version = 0;
    std::vector<CidHandle> history; ///< cids by version; back() is current
  };

  struct ObjectState
  {
    std::uint64_t windowCount = 0;
    SimTime nextRotation = 0;
    std::vector<SimTime> rotatedAt;
  };

  using Due = std::pair<SimTime, std::uint32_t>;

  ProviderConfig m_config;
  std::vector<NodeId> m_nodes;
  std::vector<CidInfo> m_cids;
  std::vector<ChunkState> m_chunks;
  std::vector<ObjectState> m_objects;
  std::vector<std::uint64_t> m_accessCount;
  std::priority_queue<Due, std::vector<Due>, std::greater<>> m_due;
  std::vector<AccessRecord> m_log;
  std::uint64_t m_totalResolves = 0;
  std::uint64_t m_rotations = 0;
  Rng m_paddingRng;
};

} // namespace lira

#endif // LIRA_PROVIDER_HPP
