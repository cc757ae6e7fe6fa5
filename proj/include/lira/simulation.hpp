#ifndef LIRA_SIMULATION_HPP
#define LIRA_SIMULATION_HPP

#include "lira/cache.hpp"
#include "lira/engine.hpp"
#include "lira/message.hpp"
#include "lira/metrics.hpp"
#include "lira/node.hpp"
#include "lira/provider.hpp"
#include "lira/topology.hpp"
#include "lira/workload.hpp"

#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace lira {

enum class RotationMode : std::uint8_t {
  Off,
  WithoutReplacement,
  WithReplacement,
};

enum class ForwardPolicy : std::uint8_t {
  Both,    ///< anchor toward the provider and off-path copies at once
  TiFirst, ///< off-path copies first; the anchor only if they all fail
};

struct SimulationConfig
{
  AdmissionKind admission = AdmissionKind::Lce;
  CacheReplacement cacheReplacement = CacheReplacement::Lru;
  CfibReplacement cfibReplacement = CfibReplacement::Fifo;
  CacheMode cacheMode = CacheMode::Lira; ///< Ttl selects the permanent-name TTL baseline
  double ttl = 10.0;
  RotationMode rotation = RotationMode::Off;
  ForwardPolicy forwardPolicy = ForwardPolicy::Both;
  double chunkDuration = 0.0; ///< D: first byte to EoC, seconds
  std::uint32_t chunksPerObject = 1;
  std::uint32_t bundleSize = 8;
  bool piggybackFirstChunk = false;
  double tBase = 1000.0;
  double tMin = 1.0;
  std::size_t purgeDepth = 4;
  DigestAlgorithm digest = DigestAlgorithm::Sha256;
  std::uint64_t freshnessEvery = 1000; ///< measured fetches between freshness samples
  unsigned freshnessHops = 3;
  std::uint64_t seed = 1;
  bool verifyDelivery = true;
  std::size_t seenCapacity = 8192;

  // diagnostics
  bool recordCfibTrace = false;
  bool checkLoops = false;
  std::ostream* messageLog = nullptr;
};

/// One C-FIB row change, as recorded for golden traces.
struct CfibTraceStep
{
  SimTime time = 0;
  NodeId node = kInvalidNode;
  CidHandle cid = kNoCid;
  CfibEntry entry;
};

/// Completed chunk delivery as seen by the client.
struct Delivery
{
  SimTime time = 0;
  NodeId client = kInvalidNode;
  std::uint64_t fetch = 0;
  std::uint32_t chunk = 0;
  CidHandle cid = kNoCid;
  Outcome outcome = Outcome::Provider;
  NodeId servedBy = kInvalidNode;
  double latency = 0;
  bool measured = false;
};

/**
 * One simulation run: nodes with their roles, the provider, clients replaying a fetch
 * list, all driven by a single event queue.
 */
class Simulation
{
public:
  Simulation(const Graph& graph, const RoleMap& roles, const SimulationConfig& config,
             std::uint32_t catalogObjects);

  /// Replays `fetches`; the first `warmup` are not measured.
  void
  run(std::span<const Fetch> fetches, std::uint64_t warmup, ArrivalMode arrivals);

  /// Starts one fetch right now (for hand-built scenarios); returns its index.
  std::uint64_t
  fetch(NodeId client, std::uint32_t object, bool measured = true);

  /// Schedules a fetch at `time` for scenario scripts; run with drain().
  void
  scheduleFetch(SimTime time, NodeId client, std::uint32_t object, bool measured = true);

  /// Processes events until the queue is empty.
  void
  drain();

  const Graph& graph() const { return m_graph; }
  const IpFib& ipFib() const { return m_fib; }
  const NodeState& node(NodeId n) const { return m_nodes.at(n); }
  NodeState& node(NodeId n) { return m_nodes.at(n); }
  Provider& provider() { return m_provider; }
  const Provider& provider() const { return m_provider; }
  const RunMetrics& metrics() const { return m_metrics; }
  RunMetrics& metrics() { return m_metrics; }
  const SimulationConfig& config() const { return m_config; }
  SimTime now() const { return m_queue.now(); }

  const std::vector<CfibTraceStep>& cfibTrace() const { return m_trace; }
  const std::vector<Delivery>& deliveries() const { return m_deliveries; }

  /// Data transmissions per directed link, indexed by linkIndex().
  std::uint64_t
  dataCount(NodeId from, Interface iface) const
  {
    return m_dataPerLink[linkIndex(from, iface)];
  }

  /// Current freshness snapshot over every C-FIB entry that holds breadcrumbs.
  FreshnessSample
  sampleFreshness() const;

  /// C-FIB of `n` as CSV rows `cid,if_I,if_O,if_TI,mIP` (oldest first).
  std::string
  dumpCfib(NodeId n) const;

  /// Short cid label used in dumps.
  std::string
  cidLabel(CidHandle cid) const;

private:
  struct FetchState
  {
    NodeId client = kInvalidNode;
    std::uint32_t object = 0;
    bool measured = false;
    std::uint32_t chunk = 0;
    std::uint32_t bundleStart = 0;
    ResolutionReply bundle;
    bool haveBundle = false;
    SimTime chunkStart = 0;
    std::uint64_t requestId = 0;
    bool forcedProvider = false;
    std::uint64_t refVersion = 0;
    std::int64_t workload = -1; ///< index into the replayed fetch list, or -1
  };

  // node protocol (node.cpp)
  void onDeliver(NodeId n, Interface in, std::uint32_t msg);
  void routerRequest(NodeId n, Interface in, std::uint32_t msg);
  void cfibRequest(NodeId n, Interface in, std::uint32_t msg);
  void providerRequest(NodeId n, Interface in, std::uint32_t msg);
  void routerData(NodeId n, Interface in, std::uint32_t msg);
  void cfibData(NodeId n, Interface in, std::uint32_t msg);
  void routerNack(NodeId n, Interface in, std::uint32_t msg);
  void onEoc(NodeId n, CidHandle cid, bool transfer);
  void serveData(NodeId n, Interface in, const Message& req, std::uint64_t version,
                 bool fromProvider);
  void sendCopy(NodeId n, Transfer& t, const Message& req, Interface out, bool diverted);
  void sendAnchor(NodeId n, Transfer& t, const Message& req);
  void sendToWaiter(NodeId n, const Waiter& w, const Message& data);
  void sendCancel(NodeId n, CidHandle cid, NodeId target, const Awaited& a);
  void replyNack(NodeId n, Interface in, const Message& req, NackReason reason);
  void failTransfer(NodeId n, CidHandle cid);
  void cacheOnData(NodeId n, const Message& data);
  void send(NodeId from, Interface out, std::uint32_t msg);
  void observeCfib(NodeId n, CidHandle cid);
  unsigned nearestCopy(NodeId n, const CfibEntry& e) const;

  // clients (simulation.cpp)
  std::uint64_t newFetch(NodeId client, std::uint32_t object, bool measured, std::int64_t workload);
  void startFetch(std::uint64_t f);
  void startChunk(std::uint64_t f);
  void resolve(std::uint64_t f);
  void issueRequest(std::uint64_t f);
  void onResolveArrival(std::uint64_t f);
  void onResolveReply(std::uint64_t f);
  void clientMessage(NodeId client, Interface in, std::uint32_t msg);
  void recordDelivery(std::uint64_t f, NodeId servedBy, std::uint64_t version, bool fromProvider,
                      bool viaDivert, CidHandle cid);
  void completeChunk(std::uint64_t f);
  void finishFetch(std::uint64_t f);
  void launchWorkload(std::uint64_t i);
  void dispatch(const Event& e);

  std::size_t
  linkIndex(NodeId from, Interface iface) const
  {
    return m_linkBase[from] + iface - 1;
  }

private:
  const Graph& m_graph;
  SimulationConfig m_config;
  IpFib m_fib;
  Provider m_provider;
  std::vector<NodeState> m_nodes;
  EventQueue m_queue;
  MessagePool m_pool;
  RunMetrics m_metrics;
  Rng m_choiceRng;

  std::vector<FetchState> m_fetches;
  std::unordered_map<std::uint64_t, std::uint64_t> m_requestToFetch;
  std::uint64_t m_nextRequestId = 1;
  std::uint64_t m_hopBudget;

  // replay bookkeeping
  std::span<const Fetch> m_workload;
  std::uint64_t m_warmup = 0;
  ArrivalMode m_arrivals = ArrivalMode::Sequential;
  std::uint64_t m_nextWorkload = 0;
  std::uint64_t m_measuredDone = 0;
  std::uint64_t m_active = 0;
  InterfaceSet m_outs; ///< interfaces used by the handler being logged

  std::vector<std::size_t> m_linkBase;
  std::vector<std::uint64_t> m_dataPerLink;

  std::vector<CfibTraceStep> m_trace;
  std::unordered_map<std::uint64_t, std::string> m_lastRow;
  std::vector<Delivery> m_deliveries;
  bool m_keepDeliveries = false;

  std::unordered_map<std::uint64_t, std::unordered_set<std::uint64_t>> m_linksByRequest;

public:
  /// Keep a per-chunk delivery list (tests and traces).
  void keepDeliveries(bool on) { m_keepDeliveries = on; }
};

} // namespace lira

#endif // LIRA_SIMULATION_HPP
