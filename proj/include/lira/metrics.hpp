#ifndef LIRA_METRICS_HPP
#define LIRA_METRICS_HPP

#include "lira/types.hpp"

#include <json.hpp>

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace lira {

enum class Outcome : std::uint8_t {
  Provider,
  OnPath,
  OffPath,
  Stale,
};

const char*
toString(Outcome o);

/// Stale beats everything; then provider; then off-path when the request was diverted.
Outcome
classifyHit(bool servedByProvider, bool staleVersion, bool viaDivert);

struct HitRecord
{
  std::uint64_t requestId = 0;
  Outcome outcome = Outcome::Provider;
  NodeId servedBy = kInvalidNode;
  bool divert = false;
};

struct FreshnessSample
{
  SimTime time = 0;
  std::uint64_t total = 0;
  std::uint64_t fresh = 0;
  std::vector<std::uint64_t> byDistance; ///< index d = fresh entries whose nearest copy is d hops away

  double
  ratio() const
  {
    return total == 0 ? 0.0 : static_cast<double>(fresh) / static_cast<double>(total);
  }
};

struct MeanStderr
{
  double mean = 0.0;
  double sem = 0.0; ///< standard error of the mean
  std::size_t n = 0;
};

MeanStderr
summarize(std::span<const double> values);

/// Spearman rank correlation with average ranks for ties.
double
spearman(std::span<const double> x, std::span<const double> y);

/// Per-run accumulators.
class RunMetrics
{
public:
  explicit RunMetrics(unsigned freshnessHops = 3);

  void
  record(const HitRecord& r, double latency, bool staleAtDelivery);

  void
  addSample(const FreshnessSample& s);

  std::uint64_t requests() const { return m_requests; }
  std::uint64_t count(Outcome o) const { return m_counts[static_cast<int>(o)]; }
  double fraction(Outcome o) const;

  /// Fresh cache hits (on- plus off-path).
  double hitRatio() const { return fraction(Outcome::OnPath) + fraction(Outcome::OffPath); }

  double staleAtDeliveryRatio() const;
  double meanLatency() const;

  const std::vector<FreshnessSample>& samples() const { return m_samples; }
  MeanStderr freshness() const;
  std::vector<std::uint64_t> distanceHistogram() const;

  nlohmann::json
  toJson() const;

  // protocol counters
  std::uint64_t events = 0;
  std::uint64_t messagesSent = 0;
  std::uint64_t hopBudgetDrops = 0;
  std::uint64_t strayDrops = 0;
  std::uint64_t loopViolations = 0;
  std::uint64_t suppressions = 0;
  std::uint64_t divertedCopies = 0;
  std::uint64_t reresolves = 0;
  std::uint64_t failures = 0;
  std::uint64_t verifyFailures = 0;
  std::uint64_t cfibEntries = 0;
  std::uint64_t cfibCapacity = 0;
  std::uint64_t cfibEvictions = 0;

private:
  unsigned m_hops;
  std::uint64_t m_requests = 0;
  std::array<std::uint64_t, 4> m_counts{};
  std::uint64_t m_staleAtDelivery = 0;
  double m_latencySum = 0.0;
  std::vector<FreshnessSample> m_samples;
};

} // namespace lira

#endif // LIRA_METRICS_HPP
