#include "lira/simulation.hpp"

#include <algorithm>
#include <ostream>

namespace lira {

const char*
toString(MessageKind k)
{
  switch (k) {
    case MessageKind::Request:
      return "request";
    case MessageKind::Data:
      return "data";
    case MessageKind::Nack:
      return "nack";
    case MessageKind::Resolve:
      return "resolve";
    case MessageKind::ResolveReply:
      return "resolve_reply";
  }
  return "?";
}

void
Simulation::send(NodeId from, Interface out, std::uint32_t msg)
{
  auto& m = m_pool[msg];
  if (++m.hops > m_hopBudget) {
    ++m_metrics.hopBudgetDrops;
    m_pool.release(msg);
    return;
  }
  const auto& l = m_graph.link(from, out);
  auto li = linkIndex(from, out);
  ++m_metrics.messagesSent;
  if (m.kind == MessageKind::Data)
    ++m_dataPerLink[li];
  if (m_config.checkLoops && m.kind == MessageKind::Request) {
    if (!m_linksByRequest[m.requestId].insert(li).second)
      ++m_metrics.loopViolations;
  }
  if (m_config.messageLog != nullptr)
    m_outs.insert(out);
  m_queue.schedule(now() + static_cast<double>(l.latencyUs) * 1e-6, EventKind::Deliver, l.peer,
                   l.peerInterface, msg);
}

void
Simulation::onDeliver(NodeId n, Interface in, std::uint32_t msg)
{
  const auto& m = m_pool[msg];
  auto kind = m.kind;
  auto cid = m.cid;
  auto ipDst = m.ipDst;
  m_outs.clear();

  switch (m_graph.kind(n)) {
    case NodeKind::Client:
      clientMessage(n, in, msg);
      break;
    case NodeKind::Provider:
      if (kind == MessageKind::Request)
        providerRequest(n, in, msg);
      else
        m_pool.release(msg);
      break;
    case NodeKind::Router:
      switch (kind) {
        case MessageKind::Request:
          routerRequest(n, in, msg);
          break;
        case MessageKind::Data:
          routerData(n, in, msg);
          break;
        case MessageKind::Nack:
          routerNack(n, in, msg);
          break;
        default:
          m_pool.release(msg);
          break;
      }
      if (m_config.recordCfibTrace)
        observeCfib(n, cid);
      break;
  }

  if (m_config.messageLog != nullptr) {
    auto& os = *m_config.messageLog;
    os << now() << ',' << m_graph.name(n) << ',' << toString(kind) << ','
       << (cid == kNoCid ? std::string("-") : cidLabel(cid)) << ',' << in << ','
       << formatInterfaces(m_outs) << ','
       << (ipDst == kInvalidNode ? std::string("-") : m_graph.name(ipDst)) << '\n';
  }
}

void
Simulation::routerRequest(NodeId n, Interface in, std::uint32_t msg)
{
  auto& ns = m_nodes[n];
  auto& m = m_pool[msg];

  if (ns.hasCache()) {
    auto r = ns.cache->lookup(m.cid, now(), TtlMode::FreshOnly, m_config.ttl);
    if (r == LookupResult::Hit) {
      serveData(n, in, m, ns.cache->peek(m.cid)->version, false);
      if (ns.hasCfib()) {
        auto nh = m_fib.nextHop(n, m.ipDst);
        if (nh != in) {
          ns.cfib->onLocalHit(m.cid, in, nh);
          m_queue.schedule(now() + m_config.chunkDuration, EventKind::ChunkEoc, n, 0, m.cid);
        }
      }
      m_pool.release(msg);
      return;
    }
    if (m_config.admission == AdmissionKind::Choice) {
      ++m.cachesSeen;
      if (uniformIndex(m_choiceRng, m.cachesSeen) == 0)
        m.cacheAt = n;
    }
  }

  if (ns.hasCfib()) {
    cfibRequest(n, in, msg);
    return;
  }
  if (m.diverted) {
    replyNack(n, in, m, NackReason::Failure);
    m_pool.release(msg);
    return;
  }
  m.route.push_back(in);
  send(n, m_fib.nextHop(n, m.ipDst), msg);
}

void
Simulation::cfibRequest(NodeId n, Interface in, std::uint32_t msg)
{
  auto& ns = m_nodes[n];
  auto& cfib = *ns.cfib;
  auto& m = m_pool[msg];
  auto nh = m_fib.nextHop(n, m.ipDst);

  bool seen = ns.seen.contains(m.requestId);
  if (m.diverted && seen) {
    replyNack(n, in, m, NackReason::Failure);
    m_pool.release(msg);
    return;
  }
  ns.seen.insert(m.requestId);

  Waiter w{in, m.origin, m.requestId, m.viaDivert || m.diverted, false, m.route};

  auto it = ns.transfers.find(m.cid);
  if (it != ns.transfers.end()) {
    auto& t = it->second;
    if (m.diverted && !t.anchored) {
      replyNack(n, in, m, NackReason::Failure);
      m_pool.release(msg);
      return;
    }
    w.late = t.dataSeen;
    t.waiters.push_back(std::move(w));
    if (cfib.peek(m.cid) != nullptr)
      cfib.onRequestSuppressed(m.cid, in, m.origin);
    else if (nh != in) {
      cfib.onRequestForwarded(m.cid, in, nh);
      cfib.onRequestSuppressed(m.cid, in, m.origin);
    }
    ++m_metrics.suppressions;
    if (!m.diverted && !t.anchored && !t.deferred)
      sendAnchor(n, t, m);
    m_pool.release(msg);
    return;
  }

  InterfaceSet targets;
  Interface out = nh;
  if (const auto* e = cfib.peek(m.cid)) {
    if (e->hasIfI() && e->ifI != in)
      out = e->ifI;
    if (e->ifTI.contains(in)) {
      if (m.diverted) {
        replyNack(n, in, m, NackReason::Failure);
        m_pool.release(msg);
        return;
      }
      cfib.prune(m.cid, in);
    }
    if (!seen) {
      if (e->hasIfI() && e->ifI != in)
        targets.insert(e->ifI);
      for (auto i : e->ifTI) {
        if (i != in)
          targets.insert(i);
      }
    }
  }
  targets.erase(nh);
  if (m.diverted && targets.empty()) {
    replyNack(n, in, m, NackReason::Failure);
    m_pool.release(msg);
    return;
  }

  auto& t = ns.transfers[m.cid];
  t.target = m.ipDst;
  t.waiters.push_back(std::move(w));
  for (auto i : targets)
    sendCopy(n, t, m, i, true);
  if (!m.diverted) {
    if (m_config.forwardPolicy == ForwardPolicy::TiFirst && !targets.empty())
      t.deferred = m;
    else
      sendAnchor(n, t, m);
  }
  if (out != in)
    cfib.onRequestForwarded(m.cid, in, out);
  m_pool.release(msg);
}

void
Simulation::providerRequest(NodeId n, Interface in, std::uint32_t msg)
{
  const auto& m = m_pool[msg];
  if (m.ipDst != n)
    replyNack(n, in, m, NackReason::Failure);
  else if (m_provider.config().naming == NamingMode::Ephemeral && !m_provider.isCurrent(m.cid, now()))
    replyNack(n, in, m, NackReason::Reresolve);
  else
    serveData(n, in, m, m_provider.servedVersion(m.cid, now()), true);
  m_pool.release(msg);
}

void
Simulation::serveData(NodeId n, Interface in, const Message& req, std::uint64_t version,
                      bool fromProvider)
{
  auto idx = m_pool.allocate();
  auto& d = m_pool[idx];
  d.kind = MessageKind::Data;
  d.cid = req.cid;
  d.ipSrc = n;
  d.ipDst = req.origin;
  d.origin = req.origin;
  d.requestId = req.requestId;
  d.servedBy = n;
  d.version = version;
  d.fromProvider = fromProvider;
  d.viaDivert = req.viaDivert || req.diverted;
  d.admitAll = m_config.admission == AdmissionKind::Lce;
  d.cacheAt = req.cacheAt;
  d.purge = fromProvider && m_config.rotation == RotationMode::WithReplacement;
  d.route = req.route;
  send(n, in, idx);
}

void
Simulation::sendCopy(NodeId n, Transfer& t, const Message& req, Interface out, bool diverted)
{
  auto idx = m_pool.allocate();
  auto& c = m_pool[idx];
  c = req;
  c.viaDivert = req.viaDivert || req.diverted;
  c.diverted = diverted;
  c.route.clear();
  t.awaited.push_back(Awaited{out, c.requestId, diverted});
  if (diverted)
    ++m_metrics.divertedCopies;
  send(n, out, idx);
}

void
Simulation::sendAnchor(NodeId n, Transfer& t, const Message& req)
{
  t.anchored = true;
  sendCopy(n, t, req, m_fib.nextHop(n, t.target), false);
}

void
Simulation::sendToWaiter(NodeId n, const Waiter& w, const Message& data)
{
  auto idx = m_pool.allocate();
  auto& c = m_pool[idx];
  c = data;
  c.ipDst = w.origin;
  c.requestId = w.requestId;
  c.route = w.route;
  c.viaDivert = data.viaDivert || w.viaDivert;
  send(n, w.iface, idx);
}

void
Simulation::sendCancel(NodeId n, CidHandle cid, NodeId target, const Awaited& a)
{
  auto idx = m_pool.allocate();
  auto& k = m_pool[idx];
  k.kind = MessageKind::Nack;
  k.reason = NackReason::Cancel;
  k.cid = cid;
  k.ipSrc = n;
  k.ipDst = target;
  k.requestId = a.requestId;
  k.diverted = a.diverted;
  send(n, a.iface, idx);
}

void
Simulation::replyNack(NodeId n, Interface in, const Message& req, NackReason reason)
{
  auto idx = m_pool.allocate();
  auto& k = m_pool[idx];
  k.kind = MessageKind::Nack;
  k.reason = reason;
  k.cid = req.cid;
  k.ipSrc = n;
  k.ipDst = req.origin;
  k.origin = req.origin;
  k.requestId = req.requestId;
  k.diverted = req.diverted;
  k.route = req.route;
  send(n, in, idx);
}

void
Simulation::cacheOnData(NodeId n, const Message& data)
{
  auto& ns = m_nodes[n];
  if (!ns.hasCache())
    return;
  if (data.purge) {
    auto retired = m_provider.purgeList(data.cid);
    ns.cache->purge(retired);
  }
  if (data.admitAll || data.cacheAt == n)
    ns.cache->admit(data.cid, now(), data.version);
}

void
Simulation::routerData(NodeId n, Interface in, std::uint32_t msg)
{
  if (m_nodes[n].hasCfib()) {
    cfibData(n, in, msg);
    return;
  }
  auto& d = m_pool[msg];
  cacheOnData(n, d);
  if (d.route.empty()) {
    ++m_metrics.strayDrops;
    m_pool.release(msg);
    return;
  }
  auto out = d.route.back();
  d.route.pop_back();
  send(n, out, msg);
}

void
Simulation::cfibData(NodeId n, Interface in, std::uint32_t msg)
{
  auto& ns = m_nodes[n];
  const auto& d = m_pool[msg];
  auto it = ns.transfers.find(d.cid);
  if (it == ns.transfers.end() || it->second.dataSeen ||
      it->second.findAwaited(in, d.requestId) == nullptr) {
    m_pool.release(msg);
    return;
  }

  auto& t = it->second;
  t.dataSeen = true;
  t.winner = in;
  t.servedBy = d.servedBy;
  t.version = d.version;
  t.fromProvider = d.fromProvider;
  t.viaDivert = d.viaDivert;
  t.deferred.reset();

  Awaited won;
  for (const auto& a : t.awaited) {
    if (a.iface == in && a.requestId == d.requestId) {
      won = a;
      continue;
    }
    sendCancel(n, d.cid, t.target, a);
    ns.cfib->prune(d.cid, a.iface);
  }
  t.awaited.clear();
  t.awaited.push_back(won);

  ns.cfib->setIncoming(d.cid, in);
  cacheOnData(n, d);
  for (const auto& w : t.waiters)
    sendToWaiter(n, w, d);
  m_queue.schedule(now() + m_config.chunkDuration, EventKind::ChunkEoc, n, 1, d.cid);
  m_pool.release(msg);
}

void
Simulation::failTransfer(NodeId n, CidHandle cid)
{
  auto& ns = m_nodes[n];
  auto it = ns.transfers.find(cid);
  auto& t = it->second;
  auto reason = t.reresolve ? NackReason::Reresolve : NackReason::Failure;
  for (const auto& w : t.waiters) {
    auto idx = m_pool.allocate();
    auto& k = m_pool[idx];
    k.kind = MessageKind::Nack;
    k.reason = reason;
    k.cid = cid;
    k.ipSrc = n;
    k.ipDst = w.origin;
    k.origin = w.origin;
    k.requestId = w.requestId;
    k.diverted = w.viaDivert;
    k.route = w.route;
    send(n, w.iface, idx);
  }
  ns.cfib->abortTransfer(cid);
  ns.transfers.erase(it);
}

void
Simulation::routerNack(NodeId n, Interface in, std::uint32_t msg)
{
  auto& ns = m_nodes[n];
  auto& k = m_pool[msg];

  if (ns.hasCfib()) {
    auto it = ns.transfers.find(k.cid);
    if (it != ns.transfers.end()) {
      auto& t = it->second;
      if (k.reason == NackReason::Cancel) {
        boost::container::small_vector<NodeId, 2> gone;
        auto& ws = t.waiters;
        for (auto w = ws.begin(); w != ws.end();) {
          if (w->iface == in && w->requestId == k.requestId) {
            gone.push_back(w->origin);
            w = ws.erase(w);
          }
          else
            ++w;
        }
        if (!gone.empty()) {
          ns.cfib->cancelOutgoing(k.cid, in, std::span<const NodeId>(gone.data(), gone.size()));
          if (ws.empty() && !t.dataSeen) {
            for (const auto& a : t.awaited)
              sendCancel(n, k.cid, t.target, a);
            ns.cfib->abortTransfer(k.cid);
            ns.transfers.erase(it);
          }
        }
        m_pool.release(msg);
        return;
      }

      if (!t.dataSeen && t.findAwaited(in, k.requestId) != nullptr) {
        auto& aw = t.awaited;
        for (auto a = aw.begin(); a != aw.end(); ++a) {
          if (a->iface == in && a->requestId == k.requestId) {
            aw.erase(a);
            break;
          }
        }
        if (k.reason == NackReason::Reresolve)
          t.reresolve = true;
        else {
          ns.cfib->prune(k.cid, in);
          ++m_metrics.failures;
        }
        if (aw.empty()) {
          if (t.deferred && !t.reresolve) {
            Message req = std::move(*t.deferred);
            t.deferred.reset();
            sendAnchor(n, t, req);
          }
          else
            failTransfer(n, k.cid);
        }
        m_pool.release(msg);
        return;
      }
    }
    if (k.reason == NackReason::Cancel) {
      m_pool.release(msg);
      return;
    }
  }

  if (k.reason == NackReason::Cancel) {
    // stateless hop: the canceled anchor went toward the provider, follow it
    if (k.diverted) {
      m_pool.release(msg);
      return;
    }
    send(n, m_fib.nextHop(n, k.ipDst), msg);
    return;
  }
  if (k.route.empty()) {
    ++m_metrics.strayDrops;
    m_pool.release(msg);
    return;
  }
  auto out = k.route.back();
  k.route.pop_back();
  send(n, out, msg);
}

void
Simulation::onEoc(NodeId n, CidHandle cid, bool transfer)
{
  auto& ns = m_nodes[n];
  if (!ns.hasCfib())
    return;
  if (transfer) {
    auto it = ns.transfers.find(cid);
    if (it == ns.transfers.end() || !it->second.dataSeen)
      return;
    auto& t = it->second;
    bool anyLate = false;
    for (const auto& w : t.waiters)
      anyLate = anyLate || w.late;
    if (anyLate) {
      Message d;
      d.kind = MessageKind::Data;
      d.cid = cid;
      d.ipSrc = n;
      d.servedBy = t.servedBy;
      d.version = t.version;
      d.fromProvider = t.fromProvider;
      d.viaDivert = t.viaDivert;
      d.admitAll = m_config.admission == AdmissionKind::Lce;
      for (const auto& w : t.waiters) {
        if (w.late)
          sendToWaiter(n, w, d);
      }
    }
    ns.cfib->onEoc(cid);
    ns.transfers.erase(it);
  }
  else if (ns.transfers.count(cid) == 0)
    ns.cfib->onEoc(cid);
  if (m_config.recordCfibTrace)
    observeCfib(n, cid);
}

void
Simulation::observeCfib(NodeId n, CidHandle cid)
{
  const auto& ns = m_nodes[n];
  if (!ns.hasCfib() || cid == kNoCid)
    return;
  const auto* e = ns.cfib->peek(cid);
  if (e == nullptr)
    return;
  auto row = formatCfibRow(*e, "", [this](NodeId c) { return m_graph.name(c); });
  auto key = (static_cast<std::uint64_t>(n) << 32) | cid;
  auto& last = m_lastRow[key];
  if (last == row)
    return;
  last = row;
  m_trace.push_back(CfibTraceStep{now(), n, cid, *e});
}

unsigned
Simulation::nearestCopy(NodeId n, const CfibEntry& e) const
{
  struct Hop
  {
    NodeId node;
    Interface out;
  };
  std::vector<Hop> frontier;
  std::vector<Hop> next;
  std::vector<NodeId> visited{n};
  for (auto i : e.ifTI)
    frontier.push_back({n, i});

  for (unsigned depth = 1; depth <= m_config.freshnessHops && !frontier.empty(); ++depth) {
    next.clear();
    for (const auto& h : frontier) {
      const auto& l = m_graph.link(h.node, h.out);
      const auto& vs = m_nodes[l.peer];
      if (vs.hasCache() && vs.cache->contains(e.cid))
        return depth;
      if (depth == m_config.freshnessHops || !vs.hasCfib())
        continue;
      if (std::find(visited.begin(), visited.end(), l.peer) != visited.end())
        continue;
      visited.push_back(l.peer);
      if (const auto* ve = vs.cfib->peek(e.cid)) {
        for (auto i : ve->ifTI) {
          if (i != l.peerInterface)
            next.push_back({l.peer, i});
        }
      }
    }
    frontier.swap(next);
  }
  return 0;
}

FreshnessSample
Simulation::sampleFreshness() const
{
  FreshnessSample s;
  s.time = now();
  s.byDistance.assign(m_config.freshnessHops + 1, 0);
  for (auto r : m_graph.routers()) {
    const auto& ns = m_nodes[r];
    if (!ns.hasCfib())
      continue;
    ns.cfib->forEach([&](const CfibEntry& e) {
      if (e.ifTI.empty())
        return;
      ++s.total;
      if (auto d = nearestCopy(r, e); d > 0) {
        ++s.fresh;
        ++s.byDistance[d];
      }
    });
  }
  return s;
}

} // namespace lira
