#include "lira/topology.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <sstream>

namespace lira {

std::string
formatInterfaces(const InterfaceSet& set)
{
  if (set.empty())
    return "-";
  std::string out;
  for (auto i : set) {
    if (!out.empty())
      out += ';';
    out += std::to_string(i);
  }
  return out;
}

NodeId
Graph::addNode(const std::string& name, NodeKind kind)
{
  if (name.empty())
    throw Error("empty node name");
  if (m_index.count(name) > 0)
    throw Error("node '" + name + "' declared twice");
  auto id = static_cast<NodeId>(m_names.size());
  m_names.push_back(name);
  m_kinds.push_back(kind);
  m_links.emplace_back();
  m_index.emplace(name, id);
  return id;
}

void
Graph::connect(NodeId a, NodeId b, double latencyMs)
{
  if (!(latencyMs > 0.0) || !std::isfinite(latencyMs))
    throw Error("link " + name(a) + " - " + name(b) + ": latency must be positive");
  if (m_links[a].size() >= 0xfffe || m_links[b].size() >= 0xfffe)
    throw Error("too many interfaces at " + name(a) + " or " + name(b));

  auto us = static_cast<std::int64_t>(std::llround(latencyMs * 1000.0));
  if (us <= 0)
    us = 1;
  auto ifA = static_cast<Interface>(m_links[a].size() + 1);
  auto ifB = static_cast<Interface>(m_links[b].size() + 1);
  m_links[a].push_back(Link{b, ifB, us});
  m_links[b].push_back(Link{a, ifA, us});
  m_declarations.push_back(Declaration{a, b, latencyMs});
}

NodeId
Graph::addRouter(const std::string& name)
{
  auto id = addNode(name, NodeKind::Router);
  m_routers.push_back(id);
  return id;
}

void
Graph::addEdge(NodeId a, NodeId b, double latencyMs)
{
  if (a >= size() || b >= size())
    throw Error("edge references an unknown node");
  if (!isRouter(a) || !isRouter(b))
    throw Error("edge " + name(a) + " - " + name(b) + " must join two routers");
  if (a == b)
    throw Error("self-loop at " + name(a));
  if (interfaceTowards(a, b) != kNoInterface)
    throw Error("duplicate edge " + name(a) + " - " + name(b));
  connect(a, b, latencyMs);
}

NodeId
Graph::attachClient(const std::string& name, NodeId router, double latencyMs)
{
  if (router >= size() || !isRouter(router))
    throw Error("client '" + name + "' must attach to a router");
  auto id = addNode(name, NodeKind::Client);
  m_clients.push_back(id);
  connect(router, id, latencyMs);
  return id;
}

NodeId
Graph::attachProvider(const std::string& name, NodeId router, double latencyMs)
{
  if (router >= size() || !isRouter(router))
    throw Error("provider '" + name + "' must attach to a router");
  auto id = addNode(name, NodeKind::Provider);
  m_providers.push_back(id);
  connect(router, id, latencyMs);
  return id;
}

void
Graph::validate() const
{
  if (m_routers.empty())
    throw Error("topology has no routers");
  if (m_providers.empty())
    throw Error("topology has no provider");

  std::vector<bool> seen(size(), false);
  std::vector<NodeId> stack{0};
  seen[0] = true;
  std::size_t reached = 1;
  while (!stack.empty()) {
    auto n = stack.back();
    stack.pop_back();
    for (const auto& l : m_links[n]) {
      if (!seen[l.peer]) {
        seen[l.peer] = true;
        ++reached;
        stack.push_back(l.peer);
      }
    }
  }
  if (reached != size()) {
    auto it = std::find(seen.begin(), seen.end(), false);
    throw Error("topology is disconnected: '" + name(static_cast<NodeId>(it - seen.begin())) +
                "' is unreachable from '" + name(0) + "'");
  }
}

std::optional<NodeId>
Graph::find(std::string_view name) const
{
  auto it = m_index.find(std::string(name));
  if (it == m_index.end())
    return std::nullopt;
  return it->second;
}

Interface
Graph::interfaceTowards(NodeId from, NodeId to) const
{
  const auto& ls = m_links.at(from);
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (ls[i].peer == to)
      return static_cast<Interface>(i + 1);
  }
  return kNoInterface;
}

NodeId
Graph::attachmentRouter(NodeId endpoint) const
{
  if (isRouter(endpoint))
    return endpoint;
  return m_links.at(endpoint).at(0).peer;
}

std::size_t
Graph::routerDegree(NodeId router) const
{
  std::size_t d = 0;
  for (const auto& l : m_links.at(router)) {
    if (isRouter(l.peer))
      ++d;
  }
  return d;
}

namespace {

constexpr std::int64_t kUnreachable = std::numeric_limits<std::int64_t>::max() / 4;

using QueueItem = std::pair<std::int64_t, NodeId>;
using MinQueue = std::priority_queue<QueueItem, std::vector<QueueItem>, std::greater<>>;

std::vector<std::int64_t>
dijkstra(const Graph& g, NodeId source)
{
  std::vector<std::int64_t> dist(g.size(), kUnreachable);
  MinQueue q;
  dist[source] = 0;
  q.emplace(0, source);
  while (!q.empty()) {
    auto [d, u] = q.top();
    q.pop();
    if (d != dist[u])
      continue;
    for (const auto& l : g.links(u)) {
      auto nd = d + l.latencyUs;
      if (nd < dist[l.peer]) {
        dist[l.peer] = nd;
        q.emplace(nd, l.peer);
      }
    }
  }
  return dist;
}

} // namespace

IpFib::IpFib(const Graph& g)
  : m_size(g.size())
  , m_next(m_size * m_size, kNoInterface)
  , m_dist(m_size * m_size, kUnreachable)
{
  for (NodeId d = 0; d < m_size; ++d) {
    auto dist = dijkstra(g, d);
    for (NodeId u = 0; u < m_size; ++u) {
      m_dist[u * m_size + d] = dist[u];
      if (u == d || dist[u] >= kUnreachable)
        continue;
      NodeId best = kInvalidNode;
      Interface bestIf = kNoInterface;
      auto ls = g.links(u);
      for (std::size_t i = 0; i < ls.size(); ++i) {
        const auto& l = ls[i];
        if (dist[l.peer] + l.latencyUs == dist[u] && l.peer < best) {
          best = l.peer;
          bestIf = static_cast<Interface>(i + 1);
        }
      }
      m_next[u * m_size + d] = bestIf;
    }
  }
}

std::vector<double>
betweenness(const Graph& g)
{
  // Brandes' accumulation over the router subgraph with integer path lengths.
  const auto n = g.size();
  std::vector<double> cb(n, 0.0);
  std::vector<std::int64_t> dist(n);
  std::vector<double> sigma(n), delta(n);
  std::vector<std::vector<NodeId>> preds(n);
  std::vector<NodeId> order;

  for (auto s : g.routers()) {
    std::fill(dist.begin(), dist.end(), kUnreachable);
    std::fill(sigma.begin(), sigma.end(), 0.0);
    std::fill(delta.begin(), delta.end(), 0.0);
    for (auto& p : preds)
      p.clear();
    order.clear();

    MinQueue q;
    dist[s] = 0;
    sigma[s] = 1.0;
    q.emplace(0, s);
    while (!q.empty()) {
      auto [d, u] = q.top();
      q.pop();
      if (d != dist[u])
        continue;
      order.push_back(u);
      for (const auto& l : g.links(u)) {
        if (!g.isRouter(l.peer))
          continue;
        auto nd = d + l.latencyUs;
        if (nd < dist[l.peer]) {
          dist[l.peer] = nd;
          sigma[l.peer] = sigma[u];
          preds[l.peer].assign(1, u);
          q.emplace(nd, l.peer);
        }
        else if (nd == dist[l.peer]) {
          sigma[l.peer] += sigma[u];
          preds[l.peer].push_back(u);
        }
      }
    }

    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      auto w = *it;
      for (auto v : preds[w])
        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
      if (w != s)
        cb[w] += delta[w];
    }
  }

  // every unordered pair was counted from both ends
  for (auto& v : cb)
    v /= 2.0;
  return cb;
}

std::vector<NodeId>
betweennessRanking(const Graph& g)
{
  auto cb = betweenness(g);
  std::vector<NodeId> order = g.routers();
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (cb[a] != cb[b])
      return cb[a] > cb[b];
    return a < b;
  });

  // Floating-point accumulation can split scores that are equal in exact arithmetic;
  // treat runs of near-equal scores as ties.
  auto close = [&](double a, double b) {
    return std::abs(a - b) <= 1e-9 * std::max(1.0, std::max(std::abs(a), std::abs(b)));
  };
  std::size_t begin = 0;
  while (begin < order.size()) {
    auto end = begin + 1;
    while (end < order.size() && close(cb[order[end - 1]], cb[order[end]]))
      ++end;
    std::sort(order.begin() + begin, order.begin() + end);
    begin = end;
  }
  return order;
}

std::string
DeploymentStrategy::label() const
{
  return std::string("(C_") + (cache == Placement::High ? "H" : "A") + ",F_" +
         (cfib == Placement::High ? "H" : "A") + ")";
}

std::string
DeploymentStrategy::token() const
{
  return std::string("C") + (cache == Placement::High ? "H" : "A") + "_F" +
         (cfib == Placement::High ? "H" : "A");
}

DeploymentStrategy
DeploymentStrategy::parse(std::string_view text)
{
  std::string s;
  for (char c : text) {
    if (c == '(' || c == ')' || c == ',' || c == '_' || c == ' ')
      continue;
    s += static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  }
  if (s.size() == 4 && s[0] == 'C' && s[2] == 'F' && (s[1] == 'H' || s[1] == 'A') &&
      (s[3] == 'H' || s[3] == 'A')) {
    DeploymentStrategy st;
    st.cache = s[1] == 'H' ? Placement::High : Placement::All;
    st.cfib = s[3] == 'H' ? Placement::High : Placement::All;
    return st;
  }
  throw std::invalid_argument("unknown deployment strategy '" + std::string(text) + "'");
}

std::vector<DeploymentStrategy>
DeploymentStrategy::all()
{
  return {
    {Placement::High, Placement::All},
    {Placement::High, Placement::High},
    {Placement::All, Placement::All},
    {Placement::All, Placement::High},
  };
}

std::vector<std::size_t>
splitBudget(std::size_t total, std::size_t count)
{
  std::vector<std::size_t> out(count, 0);
  if (count == 0)
    return out;
  for (std::size_t i = 0; i < count; ++i)
    out[i] = total / count + (i < total % count ? 1 : 0);
  return out;
}

namespace {

std::size_t
selectedCount(Placement p, double fraction, std::size_t routers, const char* what)
{
  if (p == Placement::All)
    return routers;
  if (!(fraction > 0.0) || fraction > 1.0)
    throw std::invalid_argument(std::string(what) + " fraction must be in (0,1]");
  auto k = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(routers) + 1e-9));
  if (k == 0)
    throw std::invalid_argument(std::string(what) + " fraction " + std::to_string(fraction) +
                                " selects no router");
  return k;
}

} // namespace

RoleMap
applyDeployment(const Graph& g, std::span<const NodeId> ranking, const DeploymentParams& params)
{
  if (params.totalCacheBudget == 0)
    throw std::invalid_argument("cache budget must be positive");
  if (params.cfibRatio < 0.0)
    throw std::invalid_argument("cfib ratio must be nonnegative");
  if (ranking.size() != g.routers().size())
    throw std::invalid_argument("ranking must list every router");

  RoleMap roles(g.size());
  auto kCache = selectedCount(params.strategy.cache, params.cacheFraction, ranking.size(), "cache");
  auto kCfib = selectedCount(params.strategy.cfib, params.cfibFraction, ranking.size(), "C-FIB");

  auto cacheShares = splitBudget(params.totalCacheBudget, kCache);
  for (std::size_t i = 0; i < kCache; ++i) {
    auto& r = roles[ranking[i]];
    r.hasCache = true;
    r.cacheCapacity = cacheShares[i];
  }

  auto cfibTotal = static_cast<std::size_t>(
    std::llround(static_cast<double>(params.totalCacheBudget) * params.cfibRatio));
  auto cfibShares = splitBudget(cfibTotal, kCfib);
  for (std::size_t i = 0; i < kCfib; ++i) {
    auto& r = roles[ranking[i]];
    r.hasCfib = true;
    r.cfibCapacity = cfibShares[i];
  }
  return roles;
}

} // namespace lira
