#ifndef LIRA_CONFIG_HPP
#define LIRA_CONFIG_HPP

#include "lira/simulation.hpp"

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace lira {

/// One purging scheme compared in the stale-content study.
enum class Scheme : std::uint8_t {
  Lira,            ///< no rotation
  LiraWithout,     ///< rotation, retired names age out
  LiraWith,        ///< rotation, purge lists on data
  Ttl,             ///< permanent names with a TTL
};

const char*
toString(Scheme s);

Scheme
parseScheme(std::string_view text);

struct ExperimentConfig
{
  std::string study = "deployment";
  std::string topology = "builtin:telstra108";

  std::vector<DeploymentStrategy> strategies = DeploymentStrategy::all();
  std::vector<AdmissionKind> policies = {AdmissionKind::Lce, AdmissionKind::Choice};
  double cacheFraction = 0.5;
  double cfibFraction = 0.5;
  double cacheBudget = 0.04; ///< total cache slots as a fraction of catalog chunks
  double cfibRatio = 16.0;
  std::vector<double> ratios = {0.25, 0.5, 1, 2, 4, 8, 16, 32};
  std::vector<double> cachePcts = {25, 50, 75, 100};
  std::vector<double> cfibPcts = {0, 10, 20, 30, 40, 50, 60, 70, 80, 90, 100};

  std::uint32_t objects = 10000;
  std::uint32_t chunksPerObject = 1;
  double alpha = 0.8;
  ArrivalMode arrivals = ArrivalMode::Sequential;
  double rate = 50.0;
  std::uint64_t warmup = 20000;
  std::uint64_t measure = 100000;

  Scheme scheme = Scheme::Lira; ///< deployment, ratio and incremental studies; purging sweeps its own
  double ttl = 10.0;
  std::vector<double> ttls = {1, 3, 10, 30, 100};
  ArrivalMode purgingArrivals = ArrivalMode::Poisson;

  std::uint32_t bundle = 8;
  double chunkDuration = 0.0;
  bool piggyback = false;
  double tBase = 1000.0;
  double tMin = 1.0;
  std::size_t purgeDepth = 4;
  DigestAlgorithm digest = DigestAlgorithm::Sha256;
  ForwardPolicy forwardPolicy = ForwardPolicy::Both;
  CacheReplacement cacheReplacement = CacheReplacement::Lru;
  CfibReplacement cfibReplacement = CfibReplacement::Fifo;
  std::uint64_t freshnessEvery = 1000;
  unsigned freshnessHops = 3;
  bool verify = true;

  std::vector<std::uint64_t> seeds = {1};
  unsigned workers = 0; ///< 0: one per hardware thread
  std::string out;
};

class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Named presets: fig3 .. fig7.
std::vector<std::string>
presetNames();

void
applyPreset(ExperimentConfig& c, std::string_view name);

/// Sets one key; throws ConfigError naming the key on unknown keys or bad values.
void
setConfigValue(ExperimentConfig& c, std::string_view key, std::string_view value);

/// `key = value` lines with '#' comments; `preset = figN` applies a preset in place.
ExperimentConfig
parseConfig(std::istream& is, std::string_view sourceName = "<config>",
            ExperimentConfig base = {});

ExperimentConfig
loadConfigFile(const std::filesystem::path& path, ExperimentConfig base = {});

/// The canonical `key = value` rendering of every field.
std::string
formatConfig(const ExperimentConfig& c);

std::vector<std::uint64_t>
parseSeedList(std::string_view text);

} // namespace lira

#endif // LIRA_CONFIG_HPP
