#include "lira/workload.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace lira {

ZipfDistribution::ZipfDistribution(double alpha, std::uint32_t n)
  : m_alpha(alpha)
{
  if (n == 0)
    throw std::invalid_argument("Zipf support must be nonempty");
  if (alpha < 0.0)
    throw std::invalid_argument("Zipf exponent must be nonnegative");
  m_cdf.resize(n);
  double sum = 0.0;
  for (std::uint32_t k = 1; k <= n; ++k) {
    sum += std::pow(static_cast<double>(k), -alpha);
    m_cdf[k - 1] = sum;
  }
  for (auto& v : m_cdf)
    v /= sum;
  m_cdf.back() = 1.0;
}

std::uint32_t
ZipfDistribution::sample(Rng& rng) const
{
  double u = uniform01(rng);
  auto it = std::upper_bound(m_cdf.begin(), m_cdf.end(), u);
  if (it == m_cdf.end())
    --it;
  return static_cast<std::uint32_t>(it - m_cdf.begin()) + 1;
}

double
ZipfDistribution::pmf(std::uint32_t rank) const
{
  if (rank == 0 || rank > m_cdf.size())
    return 0.0;
  return rank == 1 ? m_cdf[0] : m_cdf[rank - 1] - m_cdf[rank - 2];
}

double
ZipfDistribution::cdf(std::uint32_t rank) const
{
  if (rank == 0)
    return 0.0;
  return m_cdf[std::min<std::size_t>(rank, m_cdf.size()) - 1];
}

std::vector<Fetch>
generateWorkload(const WorkloadConfig& config, std::span<const NodeId> clients)
{
  if (clients.empty())
    throw std::invalid_argument("workload needs at least one client");
  if (config.measure == 0)
    throw std::invalid_argument("measured request count must be positive");
  if (config.arrivals == ArrivalMode::Poisson && !(config.rate > 0.0))
    throw std::invalid_argument("request rate must be positive");

  ZipfDistribution zipf(config.alpha, config.objects);
  auto rng = rngStream(config.seed, "workload");
  std::vector<Fetch> out;
  out.reserve(config.warmup + config.measure);
  SimTime t = 0;
  for (std::uint64_t i = 0; i < config.warmup + config.measure; ++i) {
    Fetch f;
    if (config.arrivals == ArrivalMode::Poisson) {
      t += exponential(rng, 1.0 / config.rate);
      f.time = t;
    }
    f.object = zipf.sample(rng) - 1;
    f.client = clients[uniformIndex(rng, clients.size())];
    out.push_back(f);
  }
  return out;
}

void
writeWorkloadCsv(std::ostream& os, std::span<const Fetch> fetches, const Graph& g)
{
  os << "time,client,object\n";
  os << std::setprecision(17);
  for (const auto& f : fetches)
    os << f.time << ',' << g.name(f.client) << ',' << f.object << '\n';
}

std::vector<Fetch>
readWorkloadCsv(std::istream& is, const Graph& g)
{
  std::vector<Fetch> out;
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r')
      line.pop_back();
    if (line.empty() || (lineNo == 1 && line.rfind("time,", 0) == 0))
      continue;
    std::istringstream ls(line);
    std::string time, client, object;
    if (!std::getline(ls, time, ',') || !std::getline(ls, client, ',') || !std::getline(ls, object))
      throw std::invalid_argument("workload line " + std::to_string(lineNo) + ": expected time,client,object");
    auto id = g.find(client);
    if (!id || g.kind(*id) != NodeKind::Client)
      throw std::invalid_argument("workload line " + std::to_string(lineNo) + ": unknown client '" +
                                  client + "'");
    Fetch f;
    f.time = std::stod(time);
    f.client = *id;
    f.object = static_cast<std::uint32_t>(std::stoul(object));
    out.push_back(f);
  }
  return out;
}

} // namespace lira
