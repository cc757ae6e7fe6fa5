#ifndef LIRA_WORKLOAD_HPP
#define LIRA_WORKLOAD_HPP

#include "lira/engine.hpp"
#include "lira/topology.hpp"

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace lira {

/// Zipf(alpha) over ranks 1..n, sampled by binary search on the cumulative distribution.
class ZipfDistribution
{
public:
  ZipfDistribution(double alpha, std::uint32_t n);

  /// Rank in [1, n].
  std::uint32_t
  sample(Rng& rng) const;

  double pmf(std::uint32_t rank) const;
  double cdf(std::uint32_t rank) const;

  std::uint32_t size() const { return static_cast<std::uint32_t>(m_cdf.size()); }
  double alpha() const { return m_alpha; }

private:
  double m_alpha;
  std::vector<double> m_cdf;
};

enum class ArrivalMode : std::uint8_t {
  Poisson,
  Sequential, ///< each fetch starts when the previous one completes
};

struct WorkloadConfig
{
  std::uint32_t objects = 10000;
  double alpha = 0.8;
  ArrivalMode arrivals = ArrivalMode::Sequential;
  double rate = 50.0; ///< fetches per second (Poisson)
  std::uint64_t warmup = 20000;
  std::uint64_t measure = 100000;
  std::uint64_t seed = 1;
};

struct Fetch
{
  SimTime time = 0; ///< arrival time; unused in sequential mode
  NodeId client = kInvalidNode;
  std::uint32_t object = 0; ///< rank - 1, so object 0 is the most popular
};

/// warmup + measure fetches; the first `warmup` are not measured.
std::vector<Fetch>
generateWorkload(const WorkloadConfig& config, std::span<const NodeId> clients);

/// CSV `time,client,object` with client names.
void
writeWorkloadCsv(std::ostream& os, std::span<const Fetch> fetches, const Graph& g);

std::vector<Fetch>
readWorkloadCsv(std::istream& is, const Graph& g);

} // namespace lira

#endif // LIRA_WORKLOAD_HPP
