#include "lira/cfib.hpp"

#include <algorithm>
#include <cassert>
#include <stdexcept>

namespace lira {

CfibTable::CfibTable(std::size_t capacity, CfibReplacement replacement)
  : m_capacity(capacity)
  , m_replacement(replacement)
{
  m_index.reserve(capacity + 1);
}

const CfibEntry*
CfibTable::peek(CidHandle cid) const
{
  auto it = m_index.find(cid);
  return it == m_index.end() ? nullptr : &*it->second;
}

CfibEntry*
CfibTable::find(CidHandle cid)
{
  auto it = m_index.find(cid);
  if (it == m_index.end())
    return nullptr;
  if (m_replacement == CfibReplacement::Lru)
    m_order.splice(m_order.end(), m_order, it->second);
  return &*it->second;
}

CfibEntry&
CfibTable::obtain(CidHandle cid)
{
  if (auto* e = find(cid))
    return *e;
  if (m_capacity == 0)
    throw std::logic_error("zero-capacity C-FIB cannot hold entries");
  if (m_index.size() >= m_capacity) {
    m_index.erase(m_order.front().cid);
    m_order.pop_front();
    ++m_evictions;
  }
  m_order.emplace_back();
  m_order.back().cid = cid;
  m_index.emplace(cid, std::prev(m_order.end()));
  return m_order.back();
}

void
CfibTable::onRequestForwarded(CidHandle cid, Interface in, Interface out)
{
  assert(in != out);
  if (m_capacity == 0)
    return;
  auto& e = obtain(cid);
  e.ifI = out;
  e.ifO.insert(in);
  e.ifTI.erase(in);
}

void
CfibTable::onRequestSuppressed(CidHandle cid, Interface in, NodeId client)
{
  auto* e = find(cid);
  if (e == nullptr)
    throw std::logic_error("suppressing a request without a C-FIB entry");
  e->ifO.insert(in);
  e->ifTI.erase(in);
  auto it = std::lower_bound(e->mip.begin(), e->mip.end(), client);
  if (it == e->mip.end() || *it != client)
    e->mip.insert(it, client);
}

void
CfibTable::onLocalHit(CidHandle cid, Interface in, Interface ipNextHop)
{
  if (m_capacity == 0)
    return;
  auto& e = obtain(cid);
  if (!e.hasIfI() || e.ifI == in)
    e.ifI = ipNextHop;
  e.ifO.insert(in);
  e.ifTI.erase(in);
}

void
CfibTable::onEoc(CidHandle cid)
{
  auto* e = find(cid);
  if (e == nullptr)
    return;
  for (auto i : e->ifO)
    e->ifTI.insert(i);
  e->ifO.clear();
  e->mip.clear();
}

ForwardDecision
CfibTable::forwardingTargets(CidHandle cid, Interface in) const
{
  ForwardDecision d;
  const auto* e = peek(cid);
  if (e == nullptr)
    return d;
  if (e->ifTI.contains(in)) {
    d.kind = ForwardDecision::Discard;
    return d;
  }
  if (!e->ifO.empty()) {
    d.kind = ForwardDecision::Suppress;
    return d;
  }
  d.kind = ForwardDecision::Forward;
  if (e->hasIfI() && e->ifI != in)
    d.targets.insert(e->ifI);
  for (auto i : e->ifTI) {
    if (i != in)
      d.targets.insert(i);
  }
  return d;
}

void
CfibTable::prune(CidHandle cid, Interface iface)
{
  if (auto* e = find(cid))
    e->ifTI.erase(iface);
}

void
CfibTable::setIncoming(CidHandle cid, Interface iface)
{
  if (auto* e = find(cid)) {
    if (e->ifO.contains(iface))
      return;
    e->ifI = iface;
    e->ifTI.erase(iface);
  }
}

void
CfibTable::cancelOutgoing(CidHandle cid, Interface iface, std::span<const NodeId> clients)
{
  auto* e = find(cid);
  if (e == nullptr)
    return;
  e->ifO.erase(iface);
  for (auto c : clients) {
    auto it = std::lower_bound(e->mip.begin(), e->mip.end(), c);
    if (it != e->mip.end() && *it == c)
      e->mip.erase(it);
  }
}

void
CfibTable::abortTransfer(CidHandle cid)
{
  if (auto* e = find(cid)) {
    e->ifO.clear();
    e->mip.clear();
  }
}

void
CfibTable::forEach(const std::function<void(const CfibEntry&)>& fn) const
{
  for (const auto& e : m_order)
    fn(e);
}

std::string
formatCfibRow(const CfibEntry& e, const std::string& cidText,
              const std::function<std::string(NodeId)>& clientName)
{
  std::string mip;
  for (auto c : e.mip) {
    if (!mip.empty())
      mip += ';';
    mip += clientName(c);
  }
  if (mip.empty())
    mip = "-";
  return cidText + "," + (e.hasIfI() ? std::to_string(e.ifI) : std::string("-")) + "," +
         formatInterfaces(e.ifO) + "," + formatInterfaces(e.ifTI) + "," + mip;
}

} // namespace lira
