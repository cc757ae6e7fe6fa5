#ifndef LIRA_TOPOLOGY_HPP
#define LIRA_TOPOLOGY_HPP

#include "lira/types.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace lira {

enum class NodeKind : std::uint8_t {
  Router,
  Client,
  Provider,
};

struct Link
{
  NodeId peer = kInvalidNode;
  Interface peerInterface = kNoInterface;
  std::int64_t latencyUs = 1000;
};

/**
 * Router-level topology with client and provider attachments.
 *
 * Every endpoint (client or provider) hangs off exactly one router through a dedicated
 * access link. Interface indices are assigned per node in link declaration order,
 * starting at 1, so the document order fixes the labels used by C-FIB dumps.
 */
class Graph
{
public:
  class Error : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  NodeId
  addRouter(const std::string& name);

  void
  addEdge(NodeId a, NodeId b, double latencyMs = 1.0);

  NodeId
  attachClient(const std::string& name, NodeId router, double latencyMs = 1.0);

  NodeId
  attachProvider(const std::string& name, NodeId router, double latencyMs = 1.0);

  /// Throws Error unless the graph is connected and has at least one provider.
  void
  validate() const;

  std::size_t size() const { return m_names.size(); }
  const std::string& name(NodeId n) const { return m_names.at(n); }
  NodeKind kind(NodeId n) const { return m_kinds.at(n); }
  bool isRouter(NodeId n) const { return m_kinds.at(n) == NodeKind::Router; }

  std::optional<NodeId>
  find(std::string_view name) const;

  /// Links of node n; element i is interface i + 1.
  std::span<const Link>
  links(NodeId n) const
  {
    return m_links.at(n);
  }

  const Link&
  link(NodeId n, Interface iface) const
  {
    return m_links.at(n).at(iface - 1);
  }

  /// Interface of `from` whose link ends at `to`, or kNoInterface if not adjacent.
  Interface
  interfaceTowards(NodeId from, NodeId to) const;

  const std::vector<NodeId>& routers() const { return m_routers; }
  const std::vector<NodeId>& clients() const { return m_clients; }
  const std::vector<NodeId>& providers() const { return m_providers; }

  /// The router an endpoint is attached to; a router maps to itself.
  NodeId
  attachmentRouter(NodeId endpoint) const;

  /// Number of router-router links at a router (access links excluded).
  std::size_t
  routerDegree(NodeId router) const;

  struct Declaration
  {
    NodeId a;
    NodeId b;
    double latencyMs;
  };

  /// Links in declaration order (router-router edges and attachments alike).
  const std::vector<Declaration>& declarations() const { return m_declarations; }

private:
  NodeId
  addNode(const std::string& name, NodeKind kind);

  void
  connect(NodeId a, NodeId b, double latencyMs);

private:
  std::vector<std::string> m_names;
  std::vector<NodeKind> m_kinds;
  std::vector<std::vector<Link>> m_links;
  std::unordered_map<std::string, NodeId> m_index;
  std::vector<NodeId> m_routers;
  std::vector<NodeId> m_clients;
  std::vector<NodeId> m_providers;
  std::vector<Declaration> m_declarations;
};

/**
 * Parses the line-oriented topology document:
 *
 *     node <id>
 *     edge <id> <id> <latency_ms>
 *     client <id> @ <router-id> [latency_ms]
 *     provider <id> @ <router-id> [latency_ms]
 *
 * with '#' comments. The result is validated.
 */
Graph
loadTopology(std::istream& is, std::string_view sourceName = "<input>");

Graph
loadTopologyFile(const std::filesystem::path& path);

void
writeTopology(std::ostream& os, const Graph& g);

/// All-pairs shortest-path next hops; ties go to the lowest-id neighbor.
class IpFib
{
public:
  explicit IpFib(const Graph& g);

  Interface
  nextHop(NodeId from, NodeId to) const
  {
    return m_next[from * m_size + to];
  }

  std::int64_t
  distanceUs(NodeId from, NodeId to) const
  {
    return m_dist[from * m_size + to];
  }

  std::size_t size() const { return m_size; }

private:
  std::size_t m_size;
  std::vector<Interface> m_next;
  std::vector<std::int64_t> m_dist;
};

inline IpFib
buildIpFib(const Graph& g)
{
  return IpFib(g);
}

/// Shortest-path betweenness of every router over the router-only subgraph
/// (unordered pairs). Non-router entries are zero.
std::vector<double>
betweenness(const Graph& g);

/// Routers by descending betweenness; near-equal scores tie-break by ascending id.
std::vector<NodeId>
betweennessRanking(const Graph& g);

enum class Placement : std::uint8_t {
  High, ///< top fraction of the centrality ranking
  All,
};

struct DeploymentStrategy
{
  Placement cache = Placement::High;
  Placement cfib = Placement::All;

  /// "(C_H,F_A)" style label.
  std::string
  label() const;

  /// Short token "CH_FA", used in configs and CSV.
  std::string
  token() const;

  static DeploymentStrategy
  parse(std::string_view text);

  static std::vector<DeploymentStrategy>
  all();

  friend bool operator==(const DeploymentStrategy&, const DeploymentStrategy&) = default;
};

struct NodeRole
{
  bool hasCache = false;
  bool hasCfib = false;
  std::size_t cacheCapacity = 0;
  std::size_t cfibCapacity = 0;

  bool
  isLira() const
  {
    return hasCache || hasCfib;
  }
};

/// Indexed by NodeId; endpoints always have the default (plain) role.
using RoleMap = std::vector<NodeRole>;

struct DeploymentParams
{
  DeploymentStrategy strategy;
  double cacheFraction = 0.5; ///< used when strategy.cache == High
  double cfibFraction = 0.5;  ///< used when strategy.cfib == High
  std::size_t totalCacheBudget = 0;
  double cfibRatio = 1.0; ///< C-FIB entries per cache slot, network-wide
};

/**
 * Places caches and C-FIBs on the top of the ranking and splits the budgets uniformly;
 * remainders go to the highest-ranked nodes so totals are conserved exactly.
 */
RoleMap
applyDeployment(const Graph& g, std::span<const NodeId> ranking, const DeploymentParams& params);

/// Splits `total` over `count` slots, the first `total % count` slots getting one extra.
std::vector<std::size_t>
splitBudget(std::size_t total, std::size_t count);

/// Options for the deterministic ISP-like generator used for the bundled topologies.
struct SyntheticTopologyOptions
{
  std::size_t routers = 108;
  std::uint64_t seed = 1;
  double secondLinkProbability = 0.45;
  std::size_t providers = 1;
  double providerLatencyMs = 1.0;
  std::size_t minClients = 8;
};

Graph
synthesizeIspTopology(const SyntheticTopologyOptions& options);

/// Options for turning a measured RocketFuel router map into a topology document.
struct RocketfuelOptions
{
  std::size_t providers = 1;
  std::uint64_t seed = 1;
  double providerLatencyMs = 1.0;
};

/**
 * Converts a RocketFuel ".cch" adjacency file (or a plain "a b" edge list) into the
 * topology document format. Only the largest connected component is kept; every link
 * gets unit latency, clients attach to degree-1 routers and providers to randomly
 * chosen routers.
 */
Graph
convertRocketfuel(std::istream& is, const RocketfuelOptions& options);

/// Resolves a topology reference: a path, or one of "builtin:fig2",
/// "builtin:telstra108", "builtin:abovenet141".
Graph
loadTopologyReference(std::string_view reference);

} // namespace lira

#endif // LIRA_TOPOLOGY_HPP
