#include "lira/provider.hpp"

#include <algorithm>
#include <ostream>

namespace lira {

Provider::Provider(const ProviderConfig& config, std::vector<NodeId> providerNodes)
  : m_config(config)
  , m_nodes(std::move(providerNodes))
  , m_chunks(static_cast<std::size_t>(config.objects) * config.chunksPerObject)
  , m_objects(config.objects)
  , m_accessCount(config.objects, 0)
  , m_paddingRng(rngStream(config.seed, "padding"))
{
  if (m_nodes.empty())
    throw Error("provider needs at least one node");
  if (config.objects == 0 || config.chunksPerObject == 0)
    throw Error("catalog must be nonempty");
  if (config.bundleSize == 0)
    throw Error("bundle size must be positive");

  m_cids.reserve(m_chunks.size() * 2);
  for (std::uint32_t o = 0; o < config.objects; ++o) {
    for (std::uint32_t c = 0; c < config.chunksPerObject; ++c)
      m_chunks[index(o, c)].history.push_back(mint(o, c, 0));
  }

  if (config.rotation) {
    // first rotation phase uniform in (0, T_base]
    auto phase = rngStream(config.seed, "rotation");
    for (std::uint32_t o = 0; o < config.objects; ++o) {
      double first = config.tBase * (1.0 - uniform01(phase));
      m_objects[o].nextRotation = first;
      m_due.emplace(first, o);
    }
  }
}

CidHandle
Provider::mint(std::uint32_t object, std::uint32_t chunk, std::uint64_t version)
{
  CidInfo info;
  info.object = object;
  info.chunk = chunk;
  info.version = version;
  auto bits = m_paddingRng();
  for (std::size_t i = 0; i < kPaddingSize; ++i)
    info.padding[i] = static_cast<std::uint8_t>(bits >> (8 * i));
  auto payload = syntheticPayload(object, chunk, version);
  ChunkDescriptor d{object, chunk, version, info.padding};
  info.id = mintCid(d, payload, m_config.digest, m_config.serviceOptions);
  m_cids.push_back(std::move(info));
  return static_cast<CidHandle>(m_cids.size() - 1);
}

ResolutionReply
Provider::resolve(std::uint32_t object, std::uint32_t startChunk, SimTime now, NodeId client)
{
  if (object >= m_config.objects)
    throw Error("unknown object " + std::to_string(object));
  if (startChunk >= m_config.chunksPerObject)
    throw Error("object " + std::to_string(object) + " has no chunk " + std::to_string(startChunk));
  advanceTo(now);

  ++m_accessCount[object];
  ++m_objects[object].windowCount;
  ++m_totalResolves;
  if (m_config.keepAccessLog)
    m_log.push_back(AccessRecord{now, object, client});

  ResolutionReply reply;
  reply.object = object;
  reply.startChunk = startChunk;
  reply.provider = homeNode(object);
  auto end = std::min<std::uint64_t>(m_config.chunksPerObject,
                                     static_cast<std::uint64_t>(startChunk) + m_config.bundleSize);
  for (auto c = startChunk; c < end; ++c) {
    const auto& st = m_chunks[index(object, c)];
    reply.bundle.push_back(st.history.back());
    reply.versions.push_back(st.version);
  }
  return reply;
}

bool
Provider::isCurrent(CidHandle cid, SimTime now)
{
  advanceTo(now);
  const auto& info = m_cids.at(cid);
  return current(info.object, info.chunk) == cid;
}

std::uint64_t
Provider::servedVersion(CidHandle cid, SimTime now)
{
  advanceTo(now);
  const auto& info = m_cids.at(cid);
  return currentVersion(info.object, info.chunk);
}

std::vector<std::pair<CidHandle, CidHandle>>
Provider::rotateDue(SimTime now)
{
  std::vector<std::pair<CidHandle, CidHandle>> out;
  if (!m_config.rotation)
    return out;
  while (!m_due.empty() && m_due.top().first <= now) {
    auto [at, object] = m_due.top();
    m_due.pop();
    rotate(object, at, out);
  }
  return out;
}

void
Provider::rotate(std::uint32_t object, SimTime at, std::vector<std::pair<CidHandle, CidHandle>>& out)
{
  auto& obj = m_objects[object];
  for (std::uint32_t c = 0; c < m_config.chunksPerObject; ++c) {
    auto& st = m_chunks[index(object, c)];
    auto old = st.history.back();
    ++st.version;
    if (m_config.naming == NamingMode::Ephemeral) {
      st.history.push_back(mint(object, c, st.version));
      out.emplace_back(old, st.history.back());
    }
    else {
      out.emplace_back(old, old);
    }
  }
  ++m_rotations;
  obj.rotatedAt.push_back(at);
  obj.nextRotation = at + transitionInterval(obj.windowCount, m_config.tBase, m_config.tMin);
  obj.windowCount = 0;
  m_due.emplace(obj.nextRotation, object);
}

std::vector<CidHandle>
Provider::purgeList(CidHandle cid) const
{
  std::vector<CidHandle> out;
  const auto& info = m_cids.at(cid);
  const auto& hist = m_chunks[index(info.object, info.chunk)].history;
  auto it = std::find(hist.begin(), hist.end(), cid);
  while (it != hist.begin() && out.size() < m_config.purgeDepth) {
    --it;
    out.push_back(*it);
  }
  return out;
}

void
Provider::writeAccessLog(std::ostream& os) const
{
  os << "time,object_id,client_id\n";
  for (const auto& r : m_log)
    os << r.time << ',' << r.object << ',' << r.client << '\n';
}

} // namespace lira
