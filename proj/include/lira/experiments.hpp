#ifndef LIRA_EXPERIMENTS_HPP
#define LIRA_EXPERIMENTS_HPP

#include "lira/config.hpp"

#include <json.hpp>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace lira {

/// One simulation run of a study.
struct StudyPoint
{
  std::string study;
  DeploymentStrategy strategy;
  AdmissionKind policy = AdmissionKind::Lce;
  double cacheFraction = 0.5;
  double cfibFraction = 0.5;
  double ratio = 16.0;
  Scheme scheme = Scheme::Lira;
  double ttl = 0.0;
  double cachePct = 100.0;
  double cfibPct = 100.0;
  std::uint64_t seed = 1;
  ArrivalMode arrivals = ArrivalMode::Sequential;
};

/// One CSV row; a TTL run yields two rows (ttl_all and ttl_fresh).
struct ResultRow
{
  std::string topology;
  std::string strategy;
  std::string policy;
  double ratio = 0;
  double alpha = 0;
  std::uint64_t seed = 0;
  double hitTotal = 0;
  double hitOn = 0;
  double hitOff = 0;
  double freshness = 0;
  double stale = 0;
  double latencyMs = 0;
  std::string study;
  std::string scheme;
  double ttl = 0;
  double cachePct = 0;
  double cfibPct = 0;
  double staleAtDelivery = 0;
  std::uint64_t requests = 0;
  nlohmann::json metrics; ///< full per-run document, not part of the CSV
};

const char*
toString(AdmissionKind k);

/// Expands a study into its runs (every point times every seed).
std::vector<StudyPoint>
expandStudy(const ExperimentConfig& c);

RoleMap
buildRoles(const ExperimentConfig& c, const Graph& g, const StudyPoint& p);

SimulationConfig
simulationConfig(const ExperimentConfig& c, const StudyPoint& p);

std::vector<ResultRow>
runPoint(const ExperimentConfig& c, const Graph& g, const StudyPoint& p);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Runs every point of the configured study on a worker pool; rows come back in
/// expansion order regardless of scheduling.
std::vector<ResultRow>
runStudy(const ExperimentConfig& c, const ProgressFn& progress = {});

std::vector<ResultRow>
runPoints(const ExperimentConfig& c, const Graph& g, const std::vector<StudyPoint>& points,
          const ProgressFn& progress = {});

void
writeResultsCsv(std::ostream& os, const std::vector<ResultRow>& rows);

std::vector<ResultRow>
readResultsCsv(std::istream& is);

/// Mean and standard error per point (rows grouped on every column except seed).
nlohmann::json
summarizeResults(const std::vector<ResultRow>& rows);

/// A C-FIB row change during the replay of the small example scenario.
struct TraceRow
{
  std::string label; ///< t1 .. t10 when the replay has the expected shape
  double time = 0;
  std::string node;
  std::string row; ///< cid,if_I,if_O,if_TI,mIP
};

/// Replays the example on `g` (routers R1, R3, clients A, B): A then B fetch x1, then
/// A and B fetch x2 together. R1 and R3 get a cache and a C-FIB; other routers stay plain.
std::vector<TraceRow>
runGoldenTrace(const Graph& g, double chunkDuration = 0.0);

std::vector<TraceRow>
runGoldenTrace(double chunkDuration = 0.0);

void
writeTraceCsv(std::ostream& os, const std::vector<TraceRow>& rows);

} // namespace lira

#endif // LIRA_EXPERIMENTS_HPP
