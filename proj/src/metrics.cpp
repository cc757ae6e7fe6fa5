#include "lira/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace lira {

const char*
toString(Outcome o)
{
  switch (o) {
    case Outcome::Provider:
      return "provider";
    case Outcome::OnPath:
      return "on_path_hit";
    case Outcome::OffPath:
      return "off_path_hit";
    case Outcome::Stale:
      return "stale_hit";
  }
  return "?";
}

Outcome
classifyHit(bool servedByProvider, bool staleVersion, bool viaDivert)
{
  if (staleVersion)
    return Outcome::Stale;
  if (servedByProvider)
    return Outcome::Provider;
  return viaDivert ? Outcome::OffPath : Outcome::OnPath;
}

MeanStderr
summarize(std::span<const double> values)
{
  MeanStderr r;
  r.n = values.size();
  if (r.n == 0)
    return r;
  r.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(r.n);
  if (r.n > 1) {
    double ss = 0.0;
    for (auto v : values)
      ss += (v - r.mean) * (v - r.mean);
    r.sem = std::sqrt(ss / static_cast<double>(r.n - 1) / static_cast<double>(r.n));
  }
  return r;
}

namespace {

std::vector<double>
ranks(std::span<const double> v)
{
  std::vector<std::size_t> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
  std::vector<double> r(v.size());
  std::size_t i = 0;
  while (i < idx.size()) {
    auto j = i;
    while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]])
      ++j;
    double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (auto k = i; k <= j; ++k)
      r[idx[k]] = avg;
    i = j + 1;
  }
  return r;
}

} // namespace

double
spearman(std::span<const double> x, std::span<const double> y)
{
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("spearman needs two equal-length samples of size >= 2");
  auto rx = ranks(x);
  auto ry = ranks(y);
  auto n = static_cast<double>(x.size());
  double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0)
    return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

RunMetrics::RunMetrics(unsigned freshnessHops)
  : m_hops(freshnessHops)
{
}

void
RunMetrics::record(const HitRecord& r, double latency, bool staleAtDelivery)
{
  ++m_requests;
  ++m_counts[static_cast<int>(r.outcome)];
  if (staleAtDelivery)
    ++m_staleAtDelivery;
  m_latencySum += latency;
}

void
RunMetrics::addSample(const FreshnessSample& s)
{
  m_samples.push_back(s);
}

double
RunMetrics::fraction(Outcome o) const
{
  if (m_requests == 0)
    return 0.0;
  return static_cast<double>(count(o)) / static_cast<double>(m_requests);
}

double
RunMetrics::staleAtDeliveryRatio() const
{
  if (m_requests == 0)
    return 0.0;
  return static_cast<double>(m_staleAtDelivery) / static_cast<double>(m_requests);
}

double
RunMetrics::meanLatency() const
{
  return m_requests == 0 ? 0.0 : m_latencySum / static_cast<double>(m_requests);
}

MeanStderr
RunMetrics::freshness() const
{
  std::vector<double> v;
  for (const auto& s : m_samples) {
    if (s.total > 0)
      v.push_back(s.ratio());
  }
  return summarize(v);
}

std::vector<std::uint64_t>
RunMetrics::distanceHistogram() const
{
  std::vector<std::uint64_t> h(m_hops + 1, 0);
  for (const auto& s : m_samples) {
    for (std::size_t d = 0; d < s.byDistance.size() && d < h.size(); ++d)
      h[d] += s.byDistance[d];
  }
  return h;
}

nlohmann::json
RunMetrics::toJson() const
{
  nlohmann::json j;
  j["requests"] = m_requests;
  j["outcomes"] = {
    {"provider", fraction(Outcome::Provider)},
    {"on_path_hit", fraction(Outcome::OnPath)},
    {"off_path_hit", fraction(Outcome::OffPath)},
    {"stale_hit", fraction(Outcome::Stale)},
  };
  j["hit_ratio"] = hitRatio();
  j["stale_at_delivery"] = staleAtDeliveryRatio();
  j["latency_ms"] = meanLatency() * 1000.0;
  auto f = freshness();
  auto hist = distanceHistogram();
  j["freshness"] = {
    {"mean", f.mean},
    {"stderr", f.sem},
    {"samples", f.n},
    {"hops", m_hops},
    {"distance_histogram", std::vector<std::uint64_t>(hist.begin() + 1, hist.end())},
  };
  j["cfib"] = {
    {"entries", cfibEntries},
    {"capacity", cfibCapacity},
    {"occupancy", cfibCapacity == 0 ? 0.0 : static_cast<double>(cfibEntries) / cfibCapacity},
    {"evictions", cfibEvictions},
  };
  j["protocol"] = {
    {"events", events},
    {"messages", messagesSent},
    {"suppressions", suppressions},
    {"diverted_copies", divertedCopies},
    {"reresolves", reresolves},
    {"failures", failures},
    {"hop_budget_drops", hopBudgetDrops},
    {"stray_drops", strayDrops},
    {"loop_violations", loopViolations},
    {"verify_failures", verifyFailures},
  };
  return j;
}

} // namespace lira
