#include "lira/simulation.hpp"

#include <sstream>

namespace lira {

namespace {

ProviderConfig
providerConfig(const SimulationConfig& c, std::uint32_t objects)
{
  ProviderConfig p;
  p.objects = objects;
  p.chunksPerObject = c.chunksPerObject;
  p.bundleSize = c.bundleSize;
  p.rotation = c.rotation != RotationMode::Off;
  p.tBase = c.tBase;
  p.tMin = c.tMin;
  p.naming = c.cacheMode == CacheMode::Ttl ? NamingMode::Permanent : NamingMode::Ephemeral;
  p.purgeDepth = c.purgeDepth;
  p.digest = c.digest;
  p.keepAccessLog = false;
  p.seed = c.seed;
  return p;
}

} // namespace

Simulation::Simulation(const Graph& graph, const RoleMap& roles, const SimulationConfig& config,
                       std::uint32_t catalogObjects)
  : m_graph(graph)
  , m_config(config)
  , m_fib(graph)
  , m_provider(providerConfig(config, catalogObjects), graph.providers())
  , m_metrics(config.freshnessHops)
  , m_choiceRng(rngStream(config.seed, "choice"))
  , m_hopBudget(4 * graph.size())
{
  m_nodes.resize(graph.size());
  m_linkBase.resize(graph.size());
  std::size_t links = 0;
  for (NodeId n = 0; n < graph.size(); ++n) {
    auto& ns = m_nodes[n];
    ns.kind = graph.kind(n);
    ns.seen = SeenRequests(config.seenCapacity);
    if (n < roles.size() && graph.isRouter(n)) {
      ns.role = roles[n];
      if (ns.role.hasCache && ns.role.cacheCapacity > 0)
        ns.cache.emplace(ns.role.cacheCapacity, config.cacheMode, config.cacheReplacement);
      if (ns.role.hasCfib && ns.role.cfibCapacity > 0) {
        ns.cfib.emplace(ns.role.cfibCapacity, config.cfibReplacement);
        m_metrics.cfibCapacity += ns.role.cfibCapacity;
      }
    }
    m_linkBase[n] = links;
    links += graph.links(n).size();
  }
  m_dataPerLink.assign(links, 0);
}

std::uint64_t
Simulation::newFetch(NodeId client, std::uint32_t object, bool measured, std::int64_t workload)
{
  if (m_graph.kind(client) != NodeKind::Client)
    throw std::invalid_argument(m_graph.name(client) + " is not a client");
  FetchState fs;
  fs.client = client;
  fs.object = object;
  fs.measured = measured;
  fs.workload = workload;
  m_fetches.push_back(std::move(fs));
  return m_fetches.size() - 1;
}

std::uint64_t
Simulation::fetch(NodeId client, std::uint32_t object, bool measured)
{
  auto f = newFetch(client, object, measured, -1);
  startFetch(f);
  return f;
}

void
Simulation::scheduleFetch(SimTime time, NodeId client, std::uint32_t object, bool measured)
{
  auto f = newFetch(client, object, measured, -1);
  m_queue.schedule(time, EventKind::RequestArrival, client, kNoInterface, f);
}

void
Simulation::launchWorkload(std::uint64_t i)
{
  if (i >= m_workload.size())
    return;
  m_nextWorkload = i + 1;
  const auto& w = m_workload[i];
  auto f = newFetch(w.client, w.object, i >= m_warmup, static_cast<std::int64_t>(i));
  if (m_arrivals == ArrivalMode::Sequential)
    startFetch(f);
  else
    m_queue.schedule(std::max(now(), w.time), EventKind::RequestArrival, w.client, kNoInterface, f);
}

void
Simulation::run(std::span<const Fetch> fetches, std::uint64_t warmup, ArrivalMode arrivals)
{
  m_workload = fetches;
  m_warmup = warmup;
  m_arrivals = arrivals;
  launchWorkload(0);
  drain();
}

void
Simulation::drain()
{
  while (!m_queue.empty())
    dispatch(m_queue.pop());

  m_metrics.events = m_queue.processed();
  m_metrics.cfibEntries = 0;
  m_metrics.cfibEvictions = 0;
  for (const auto& ns : m_nodes) {
    if (ns.hasCfib()) {
      m_metrics.cfibEntries += ns.cfib->size();
      m_metrics.cfibEvictions += ns.cfib->evictions();
    }
  }
}

void
Simulation::dispatch(const Event& e)
{
  switch (e.kind) {
    case EventKind::Deliver:
      onDeliver(e.node, e.iface, static_cast<std::uint32_t>(e.index));
      break;
    case EventKind::ChunkEoc:
      if (m_graph.kind(e.node) == NodeKind::Client)
        completeChunk(e.index);
      else
        onEoc(e.node, static_cast<CidHandle>(e.index), e.iface == 1);
      break;
    case EventKind::RequestArrival:
      startFetch(e.index);
      break;
    case EventKind::ResolveArrival:
      onResolveArrival(e.index);
      break;
    case EventKind::ResolveReply:
      onResolveReply(e.index);
      break;
    case EventKind::RotationDue:
    case EventKind::FreshnessSample:
      break;
  }
}

void
Simulation::startFetch(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  ++m_active;
  fs.chunk = 0;
  fs.haveBundle = false;
  if (fs.workload >= 0 && m_arrivals == ArrivalMode::Poisson)
    launchWorkload(static_cast<std::uint64_t>(fs.workload) + 1);
  startChunk(f);
}

void
Simulation::startChunk(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  fs.chunkStart = now();
  fs.forcedProvider = false;
  if (fs.haveBundle && fs.chunk >= fs.bundleStart && fs.chunk < fs.bundleStart + fs.bundle.bundle.size())
    issueRequest(f);
  else
    resolve(f);
}

void
Simulation::resolve(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  fs.haveBundle = false;
  auto home = m_provider.homeNode(fs.object);
  auto d = static_cast<double>(m_fib.distanceUs(fs.client, home)) * 1e-6;
  m_queue.schedule(now() + d, EventKind::ResolveArrival, home, kNoInterface, f);
}

void
Simulation::onResolveArrival(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  fs.bundle = m_provider.resolve(fs.object, fs.chunk, now(), fs.client);
  fs.bundleStart = fs.chunk;
  auto d = static_cast<double>(m_fib.distanceUs(fs.bundle.provider, fs.client)) * 1e-6;
  m_queue.schedule(now() + d, EventKind::ResolveReply, fs.client, kNoInterface, f);
}

void
Simulation::onResolveReply(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  fs.haveBundle = true;
  if (m_config.piggybackFirstChunk && fs.chunk == 0 && !fs.forcedProvider) {
    fs.refVersion = fs.bundle.versions[0];
    recordDelivery(f, fs.bundle.provider, fs.refVersion, true, false, fs.bundle.bundle[0]);
    m_queue.schedule(now() + m_config.chunkDuration, EventKind::ChunkEoc, fs.client, kNoInterface, f);
    return;
  }
  issueRequest(f);
}

void
Simulation::issueRequest(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  auto slot = fs.chunk - fs.bundleStart;
  auto id = m_nextRequestId++;
  fs.requestId = id;
  fs.refVersion = fs.bundle.versions[slot];
  m_requestToFetch[id] = f;

  auto idx = m_pool.allocate();
  auto& m = m_pool[idx];
  m.kind = MessageKind::Request;
  m.cid = fs.bundle.bundle[slot];
  m.ipSrc = fs.client;
  m.ipDst = fs.bundle.provider;
  m.origin = fs.client;
  m.requestId = id;
  send(fs.client, 1, idx);
}

void
Simulation::clientMessage(NodeId client, Interface in, std::uint32_t msg)
{
  const auto& m = m_pool[msg];
  if (m.kind == MessageKind::Request) {
    replyNack(client, in, m, NackReason::Failure);
    m_pool.release(msg);
    return;
  }

  auto it = m_requestToFetch.find(m.requestId);
  if (it == m_requestToFetch.end() || m_fetches[it->second].client != client ||
      (m.kind != MessageKind::Data && m.kind != MessageKind::Nack)) {
    ++m_metrics.strayDrops;
    m_pool.release(msg);
    return;
  }
  auto f = it->second;
  m_requestToFetch.erase(it);
  auto& fs = m_fetches[f];

  if (m.kind == MessageKind::Nack) {
    fs.requestId = 0;
    ++m_metrics.reresolves;
    fs.forcedProvider = true;
    m_pool.release(msg);
    resolve(f);
    return;
  }

  if (m_config.verifyDelivery && m_provider.config().naming == NamingMode::Ephemeral) {
    const auto& info = m_provider.info(m.cid);
    auto payload = syntheticPayload(info.object, info.chunk, m.version);
    if (!verifyCid(payload, info.padding, m.version, info.id))
      ++m_metrics.verifyFailures;
  }
  recordDelivery(f, m.servedBy, m.version, m.fromProvider, m.viaDivert, m.cid);
  fs.requestId = 0;
  m_pool.release(msg);
  m_queue.schedule(now() + m_config.chunkDuration, EventKind::ChunkEoc, client, kNoInterface, f);
}

void
Simulation::recordDelivery(std::uint64_t f, NodeId servedBy, std::uint64_t version,
                           bool fromProvider, bool viaDivert, CidHandle cid)
{
  auto& fs = m_fetches[f];
  bool stale = version != fs.refVersion;
  m_provider.advanceTo(now());
  bool staleNow = version != m_provider.currentVersion(fs.object, fs.chunk);
  auto outcome = fs.forcedProvider ? Outcome::Provider : classifyHit(fromProvider, stale, viaDivert);
  double latency = now() + m_config.chunkDuration - fs.chunkStart;
  if (fs.measured) {
    HitRecord r;
    r.requestId = fs.requestId;
    r.outcome = outcome;
    r.servedBy = servedBy;
    r.divert = viaDivert;
    m_metrics.record(r, latency, staleNow);
  }
  if (m_keepDeliveries) {
    m_deliveries.push_back(Delivery{now(), fs.client, f, fs.chunk, cid, outcome, servedBy, latency,
                                    fs.measured});
  }
}

void
Simulation::completeChunk(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  ++fs.chunk;
  if (fs.chunk < m_provider.config().chunksPerObject)
    startChunk(f);
  else
    finishFetch(f);
}

void
Simulation::finishFetch(std::uint64_t f)
{
  auto& fs = m_fetches[f];
  --m_active;
  if (fs.measured) {
    ++m_measuredDone;
    if (m_config.freshnessEvery > 0 && m_measuredDone % m_config.freshnessEvery == 0)
      m_metrics.addSample(sampleFreshness());
  }
  if (fs.workload >= 0 && m_arrivals == ArrivalMode::Sequential)
    launchWorkload(static_cast<std::uint64_t>(fs.workload) + 1);
}

std::string
Simulation::dumpCfib(NodeId n) const
{
  std::ostringstream os;
  const auto& ns = m_nodes.at(n);
  if (!ns.hasCfib())
    return {};
  ns.cfib->forEach([&](const CfibEntry& e) {
    os << formatCfibRow(e, cidLabel(e.cid), [this](NodeId c) { return m_graph.name(c); }) << '\n';
  });
  return os.str();
}

std::string
Simulation::cidLabel(CidHandle cid) const
{
  return m_provider.info(cid).id.shortHex(8);
}

} // namespace lira
