#include "lira/topology.hpp"
#include "lira/engine.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace lira {

namespace {

std::vector<std::string>
tokenize(const std::string& line)
{
  std::vector<std::string> tokens;
  std::istringstream is(line.substr(0, line.find('#')));
  std::string t;
  while (is >> t)
    tokens.push_back(t);
  return tokens;
}

double
parseLatency(const std::string& text)
{
  std::size_t used = 0;
  double v = std::stod(text, &used);
  if (used != text.size())
    throw std::invalid_argument("bad latency '" + text + "'");
  return v;
}

std::string
formatLatency(double ms)
{
  std::ostringstream os;
  os << std::setprecision(12) << ms;
  return os.str();
}

} // namespace

Graph
loadTopology(std::istream& is, std::string_view sourceName)
{
  Graph g;
  std::string line;
  std::size_t lineNo = 0;
  auto fail = [&](const std::string& msg) {
    throw Graph::Error(std::string(sourceName) + ":" + std::to_string(lineNo) + ": " + msg);
  };
  auto lookup = [&](const std::string& name) {
    auto id = g.find(name);
    if (!id)
      fail("undeclared node '" + name + "'");
    return *id;
  };

  while (std::getline(is, line)) {
    ++lineNo;
    auto tok = tokenize(line);
    if (tok.empty())
      continue;
    try {
      const auto& kw = tok[0];
      if (kw == "node") {
        if (tok.size() != 2)
          fail("expected 'node <id>'");
        g.addRouter(tok[1]);
      }
      else if (kw == "edge") {
        if (tok.size() != 3 && tok.size() != 4)
          fail("expected 'edge <id> <id> <latency_ms>'");
        double lat = tok.size() == 4 ? parseLatency(tok[3]) : 1.0;
        g.addEdge(lookup(tok[1]), lookup(tok[2]), lat);
      }
      else if (kw == "client" || kw == "provider") {
        if ((tok.size() != 4 && tok.size() != 5) || tok[2] != "@")
          fail("expected '" + kw + " <id> @ <router-id> [latency_ms]'");
        double lat = tok.size() == 5 ? parseLatency(tok[4]) : 1.0;
        auto router = lookup(tok[3]);
        if (kw == "client")
          g.attachClient(tok[1], router, lat);
        else
          g.attachProvider(tok[1], router, lat);
      }
      else {
        fail("unknown directive '" + kw + "'");
      }
    }
    catch (const Graph::Error& e) {
      std::string what = e.what();
      if (what.rfind(std::string(sourceName) + ":", 0) == 0)
        throw;
      fail(what);
    }
    catch (const std::invalid_argument& e) {
      fail(e.what());
    }
  }

  try {
    g.validate();
  }
  catch (const Graph::Error& e) {
    throw Graph::Error(std::string(sourceName) + ": " + e.what());
  }
  return g;
}

Graph
loadTopologyFile(const std::filesystem::path& path)
{
  std::ifstream is(path);
  if (!is)
    throw Graph::Error("cannot open topology file '" + path.string() + "'");
  return loadTopology(is, path.string());
}

void
writeTopology(std::ostream& os, const Graph& g)
{
  for (auto r : g.routers())
    os << "node " << g.name(r) << '\n';
  for (const auto& d : g.declarations()) {
    auto endpoint = g.isRouter(d.b) ? d.a : d.b;
    if (g.isRouter(d.a) && g.isRouter(d.b)) {
      os << "edge " << g.name(d.a) << ' ' << g.name(d.b) << ' ' << formatLatency(d.latencyMs)
         << '\n';
    }
    else {
      auto router = endpoint == d.a ? d.b : d.a;
      os << (g.kind(endpoint) == NodeKind::Client ? "client " : "provider ") << g.name(endpoint)
         << " @ " << g.name(router) << ' ' << formatLatency(d.latencyMs) << '\n';
    }
  }
}

namespace {

/// Adds clients on degree-1 routers (topping up with the least-connected routers) and
/// providers on randomly drawn routers that carry no client.
void
attachEndpoints(Graph& g, std::size_t minClients, std::size_t providers, double providerLatencyMs,
                std::mt19937_64& rng)
{
  std::vector<NodeId> routers = g.routers();
  std::vector<NodeId> clientSites;
  for (auto r : routers) {
    if (g.routerDegree(r) == 1)
      clientSites.push_back(r);
  }
  if (clientSites.size() < minClients) {
    std::vector<NodeId> rest;
    for (auto r : routers) {
      if (g.routerDegree(r) != 1)
        rest.push_back(r);
    }
    std::stable_sort(rest.begin(), rest.end(),
                     [&](NodeId a, NodeId b) { return g.routerDegree(a) < g.routerDegree(b); });
    for (std::size_t i = 0; i < rest.size() && clientSites.size() < minClients; ++i)
      clientSites.push_back(rest[i]);
    std::sort(clientSites.begin(), clientSites.end());
  }

  std::vector<NodeId> providerSites;
  std::vector<NodeId> candidates;
  for (auto r : routers) {
    if (!std::binary_search(clientSites.begin(), clientSites.end(), r))
      candidates.push_back(r);
  }
  if (candidates.empty())
    candidates = routers;
  if (providers > candidates.size())
    throw Graph::Error("more providers requested than candidate routers");
  for (std::size_t i = 0; i < providers; ++i) {
    auto j = i + static_cast<std::size_t>(uniformIndex(rng, candidates.size() - i));
    std::swap(candidates[i], candidates[j]);
    providerSites.push_back(candidates[i]);
  }

  for (std::size_t i = 0; i < clientSites.size(); ++i)
    g.attachClient("c" + std::to_string(i), clientSites[i], 1.0);
  for (std::size_t i = 0; i < providerSites.size(); ++i)
    g.attachProvider("p" + std::to_string(i), providerSites[i], providerLatencyMs);
}

} // namespace

Graph
synthesizeIspTopology(const SyntheticTopologyOptions& options)
{
  if (options.routers < 3)
    throw Graph::Error("synthetic topology needs at least 3 routers");
  auto rng = rngStream(options.seed, "topology");

  Graph g;
  for (std::size_t i = 0; i < options.routers; ++i)
    g.addRouter("r" + std::to_string(i));

  // Preferential attachment grown from a triangle; a newcomer links to one or two
  // existing routers chosen proportionally to degree.
  std::vector<NodeId> endpoints; // each router repeated once per incident edge
  auto link = [&](NodeId a, NodeId b) {
    g.addEdge(a, b, 1.0);
    endpoints.push_back(a);
    endpoints.push_back(b);
  };
  link(0, 1);
  link(1, 2);
  link(0, 2);
  for (NodeId v = 3; v < options.routers; ++v) {
    std::size_t m = uniform01(rng) < options.secondLinkProbability ? 2 : 1;
    std::set<NodeId> chosen;
    while (chosen.size() < m) {
      auto pick = endpoints[uniformIndex(rng, endpoints.size())];
      chosen.insert(pick);
    }
    for (auto u : chosen)
      link(u, v);
  }

  attachEndpoints(g, options.minClients, options.providers, options.providerLatencyMs, rng);
  g.validate();
  return g;
}

Graph
convertRocketfuel(std::istream& is, const RocketfuelOptions& options)
{
  std::map<long long, std::set<long long>> adj;
  std::string line;
  while (std::getline(is, line)) {
    auto tok = tokenize(line);
    if (tok.empty())
      continue;
    bool cch = line.find("->") != std::string::npos || line.find('<') != std::string::npos;
    if (cch) {
      long long uid = 0;
      try {
        uid = std::stoll(tok[0]);
      }
      catch (const std::exception&) {
        continue;
      }
      if (uid < 0)
        continue; // external (neighbor-AS) router
      adj[uid];
      for (const auto& t : tok) {
        if (t.size() > 2 && t.front() == '<' && t.back() == '>') {
          auto peer = std::stoll(t.substr(1, t.size() - 2));
          if (peer >= 0 && peer != uid) {
            adj[uid].insert(peer);
            adj[peer].insert(uid);
          }
        }
      }
    }
    else if (tok.size() >= 2) {
      long long a = 0, b = 0;
      try {
        a = std::stoll(tok[0]);
        b = std::stoll(tok[1]);
      }
      catch (const std::exception&) {
        throw Graph::Error("unrecognized RocketFuel line: " + line);
      }
      if (a == b)
        continue;
      adj[a].insert(b);
      adj[b].insert(a);
    }
  }
  if (adj.empty())
    throw Graph::Error("RocketFuel input holds no routers");

  // keep the largest connected component (ties: the one holding the smallest uid)
  std::map<long long, int> comp;
  std::vector<std::size_t> compSize;
  for (const auto& [uid, _] : adj) {
    if (comp.count(uid))
      continue;
    int c = static_cast<int>(compSize.size());
    compSize.push_back(0);
    std::vector<long long> stack{uid};
    comp[uid] = c;
    while (!stack.empty()) {
      auto u = stack.back();
      stack.pop_back();
      ++compSize[c];
      for (auto v : adj[u]) {
        if (!comp.count(v)) {
          comp[v] = c;
          stack.push_back(v);
        }
      }
    }
  }
  int best = static_cast<int>(std::max_element(compSize.begin(), compSize.end()) - compSize.begin());

  Graph g;
  std::map<long long, NodeId> ids;
  for (const auto& [uid, _] : adj) {
    if (comp[uid] == best)
      ids[uid] = g.addRouter("r" + std::to_string(uid));
  }
  for (const auto& [uid, peers] : adj) {
    if (comp[uid] != best)
      continue;
    for (auto p : peers) {
      if (uid < p)
        g.addEdge(ids[uid], ids[p], 1.0);
    }
  }

  auto rng = rngStream(options.seed, "topology");
  attachEndpoints(g, 1, options.providers, options.providerLatencyMs, rng);
  g.validate();
  return g;
}

namespace {

constexpr const char* kFig2 = R"(node R1
node R2
node R3
edge R1 R2 1
edge R1 R3 1
client A @ R1 1
client B @ R3 1
provider CP @ R2 1
)";

} // namespace

Graph
loadTopologyReference(std::string_view reference)
{
  constexpr std::string_view prefix = "builtin:";
  if (reference.substr(0, prefix.size()) == prefix) {
    auto name = reference.substr(prefix.size());
    if (name == "fig2") {
      std::istringstream is(kFig2);
      return loadTopology(is, "builtin:fig2");
    }
    if (name == "telstra108") {
      SyntheticTopologyOptions opt;
      opt.routers = 108;
      opt.seed = 1221;
      return synthesizeIspTopology(opt);
    }
    if (name == "abovenet141") {
      SyntheticTopologyOptions opt;
      opt.routers = 141;
      opt.seed = 1755;
      return synthesizeIspTopology(opt);
    }
    throw Graph::Error("unknown builtin topology '" + std::string(reference) + "'");
  }
  return loadTopologyFile(std::filesystem::path(std::string(reference)));
}

} // namespace lira
