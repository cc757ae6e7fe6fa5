#ifndef LIRA_TYPES_HPP
#define LIRA_TYPES_HPP

#include <boost/container/small_vector.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>

namespace lira {

/// Ordinal of a node in its topology document (routers, clients and providers alike).
using NodeId = std::uint32_t;

/// Per-node interface index, 1-based in link declaration order.
using Interface = std::uint16_t;

/// Simulated time in seconds.
using SimTime = double;

inline constexpr NodeId kInvalidNode = std::numeric_limits<NodeId>::max();
inline constexpr Interface kNoInterface = 0;

/// Small ordered set of interface indices; the C-FIB interface columns.
class InterfaceSet
{
public:
  InterfaceSet() = default;

  InterfaceSet(std::initializer_list<Interface> ifaces)
  {
    for (auto i : ifaces)
      insert(i);
  }

  bool
  insert(Interface i)
  {
    auto it = std::lower_bound(m_items.begin(), m_items.end(), i);
    if (it != m_items.end() && *it == i)
      return false;
    m_items.insert(it, i);
    return true;
  }

  bool
  erase(Interface i)
  {
    auto it = std::lower_bound(m_items.begin(), m_items.end(), i);
    if (it == m_items.end() || *it != i)
      return false;
    m_items.erase(it);
    return true;
  }

  bool
  contains(Interface i) const
  {
    return std::binary_search(m_items.begin(), m_items.end(), i);
  }

  bool empty() const { return m_items.empty(); }
  std::size_t size() const { return m_items.size(); }
  void clear() { m_items.clear(); }
  auto begin() const { return m_items.begin(); }
  auto end() const { return m_items.end(); }

  friend bool
  operator==(const InterfaceSet& a, const InterfaceSet& b)
  {
    return a.m_items == b.m_items;
  }

private:
  boost::container::small_vector<Interface, 4> m_items;
};

/// Joins interface indices with ';' ("-" when empty), as in trace and dump output.
std::string
formatInterfaces(const InterfaceSet& set);

} // namespace lira

#endif // LIRA_TYPES_HPP
