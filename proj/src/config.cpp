#include "lira/config.hpp"

#include <boost/algorithm/string.hpp>

#include <charconv>
#include <fstream>
#include <sstream>

namespace lira {

const char*
toString(Scheme s)
{
  switch (s) {
    case Scheme::Lira:
      return "lira";
    case Scheme::LiraWithout:
      return "lira_wo_replacement";
    case Scheme::LiraWith:
      return "lira_w_replacement";
    case Scheme::Ttl:
      return "ttl";
  }
  return "?";
}

Scheme
parseScheme(std::string_view text)
{
  for (auto s : {Scheme::Lira, Scheme::LiraWithout, Scheme::LiraWith, Scheme::Ttl}) {
    if (text == toString(s))
      return s;
  }
  throw ConfigError("unknown scheme '" + std::string(text) + "'");
}

namespace {

[[noreturn]] void
bad(std::string_view key, std::string_view value, std::string_view expected)
{
  throw ConfigError("key '" + std::string(key) + "': invalid value '" + std::string(value) +
                    "' (expected " + std::string(expected) + ")");
}

double
toDouble(std::string_view key, std::string_view v)
{
  double out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    bad(key, v, "a number");
  return out;
}

std::uint64_t
toUnsigned(std::string_view key, std::string_view v)
{
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    bad(key, v, "a nonnegative integer");
  return out;
}

bool
toBool(std::string_view key, std::string_view v)
{
  if (v == "true" || v == "1" || v == "yes" || v == "on")
    return true;
  if (v == "false" || v == "0" || v == "no" || v == "off")
    return false;
  bad(key, v, "true or false");
}

std::vector<std::string>
splitList(std::string_view v)
{
  std::vector<std::string> parts;
  std::string s(v);
  boost::split(parts, s, boost::is_any_of(","));
  for (auto& p : parts)
    boost::trim(p);
  std::erase_if(parts, [](const std::string& p) { return p.empty(); });
  return parts;
}

std::vector<double>
toDoubles(std::string_view key, std::string_view v)
{
  std::vector<double> out;
  for (const auto& p : splitList(v))
    out.push_back(toDouble(key, p));
  if (out.empty())
    bad(key, v, "a comma-separated list of numbers");
  return out;
}

AdmissionKind
toPolicy(std::string_view key, std::string_view v)
{
  if (v == "lce")
    return AdmissionKind::Lce;
  if (v == "choice")
    return AdmissionKind::Choice;
  bad(key, v, "lce or choice");
}

ArrivalMode
toArrivals(std::string_view key, std::string_view v)
{
  if (v == "sequential")
    return ArrivalMode::Sequential;
  if (v == "poisson")
    return ArrivalMode::Poisson;
  bad(key, v, "sequential or poisson");
}

const char*
policyName(AdmissionKind k)
{
  return k == AdmissionKind::Lce ? "lce" : "choice";
}

const char*
arrivalsName(ArrivalMode a)
{
  return a == ArrivalMode::Sequential ? "sequential" : "poisson";
}

template<typename T>
std::string
joinNumbers(const std::vector<T>& v)
{
  std::ostringstream os;
  for (std::size_t i = 0; i < v.size(); ++i)
    os << (i ? "," : "") << v[i];
  return os.str();
}

} // namespace

std::vector<std::uint64_t>
parseSeedList(std::string_view text)
{
  std::vector<std::uint64_t> out;
  for (const auto& p : splitList(text)) {
    auto dash = p.find('-');
    if (dash != std::string::npos && dash > 0) {
      auto lo = toUnsigned("seeds", std::string_view(p).substr(0, dash));
      auto hi = toUnsigned("seeds", std::string_view(p).substr(dash + 1));
      if (hi < lo)
        bad("seeds", p, "an ascending range");
      for (auto s = lo; s <= hi; ++s)
        out.push_back(s);
    }
    else
      out.push_back(toUnsigned("seeds", p));
  }
  return out;
}

std::vector<std::string>
presetNames()
{
  return {"fig3", "fig4", "fig5", "fig6", "fig7"};
}

void
applyPreset(ExperimentConfig& c, std::string_view name)
{
  ExperimentConfig d;
  if (name == "fig3" || name == "fig4") {
    c.study = "deployment";
    c.topology = name == "fig3" ? "builtin:telstra108" : "builtin:abovenet141";
    c.strategies = DeploymentStrategy::all();
    c.policies = d.policies;
    c.alpha = 0.8;
    c.cfibRatio = d.cfibRatio;
    c.cacheBudget = d.cacheBudget;
    c.seeds = {1, 2, 3, 4, 5};
  }
  else if (name == "fig5") {
    c.study = "ratio";
    c.topology = "builtin:abovenet141";
    c.ratios = d.ratios;
    c.cacheBudget = d.cacheBudget;
    c.policies = d.policies;
    c.alpha = 0.8;
    c.seeds = {1, 2, 3, 4, 5};
  }
  else if (name == "fig6") {
    c.study = "purging";
    c.topology = "builtin:telstra108";
    c.ttls = d.ttls;
    c.policies = {AdmissionKind::Lce};
    c.purgingArrivals = ArrivalMode::Poisson;
    // residency in the caches has to span the TTL grid
    c.cacheBudget = 0.2;
    c.seeds = {1, 2, 3};
  }
  else if (name == "fig7") {
    c.study = "incremental";
    c.topology = "builtin:telstra108";
    c.cachePcts = d.cachePcts;
    c.cfibPcts = d.cfibPcts;
    c.cacheBudget = d.cacheBudget;
    c.cfibRatio = d.cfibRatio;
    c.policies = {AdmissionKind::Lce};
    c.seeds = {1, 2, 3};
  }
  else
    throw ConfigError("unknown preset '" + std::string(name) + "'");
}

void
setConfigValue(ExperimentConfig& c, std::string_view key, std::string_view value)
{
  auto v = value;
  if (key == "preset")
    applyPreset(c, v);
  else if (key == "study")
    c.study = v;
  else if (key == "topology")
    c.topology = v;
  else if (key == "strategy" || key == "strategies") {
    c.strategies.clear();
    for (const auto& p : splitList(v)) {
      try {
        c.strategies.push_back(DeploymentStrategy::parse(p));
      }
      catch (const std::invalid_argument&) {
        bad(key, p, "a strategy such as CH_FA");
      }
    }
    if (c.strategies.empty())
      bad(key, v, "at least one strategy");
  }
  else if (key == "policy" || key == "policies") {
    c.policies.clear();
    for (const auto& p : splitList(v))
      c.policies.push_back(toPolicy(key, p));
    if (c.policies.empty())
      bad(key, v, "lce and/or choice");
  }
  else if (key == "cache_fraction")
    c.cacheFraction = toDouble(key, v);
  else if (key == "cfib_fraction")
    c.cfibFraction = toDouble(key, v);
  else if (key == "cache_budget")
    c.cacheBudget = toDouble(key, v);
  else if (key == "cfib_ratio")
    c.cfibRatio = toDouble(key, v);
  else if (key == "ratios")
    c.ratios = toDoubles(key, v);
  else if (key == "cache_pcts")
    c.cachePcts = toDoubles(key, v);
  else if (key == "cfib_pcts")
    c.cfibPcts = toDoubles(key, v);
  else if (key == "objects")
    c.objects = static_cast<std::uint32_t>(toUnsigned(key, v));
  else if (key == "chunks_per_object")
    c.chunksPerObject = static_cast<std::uint32_t>(toUnsigned(key, v));
  else if (key == "alpha")
    c.alpha = toDouble(key, v);
  else if (key == "arrivals")
    c.arrivals = toArrivals(key, v);
  else if (key == "purging_arrivals")
    c.purgingArrivals = toArrivals(key, v);
  else if (key == "rate")
    c.rate = toDouble(key, v);
  else if (key == "warmup")
    c.warmup = toUnsigned(key, v);
  else if (key == "measure")
    c.measure = toUnsigned(key, v);
  else if (key == "scheme") {
    try {
      c.scheme = parseScheme(v);
    }
    catch (const ConfigError&) {
      bad(key, v, "lira, lira_wo_replacement, lira_w_replacement or ttl");
    }
  }
  else if (key == "ttl")
    c.ttl = toDouble(key, v);
  else if (key == "ttls")
    c.ttls = toDoubles(key, v);
  else if (key == "bundle")
    c.bundle = static_cast<std::uint32_t>(toUnsigned(key, v));
  else if (key == "chunk_duration")
    c.chunkDuration = toDouble(key, v);
  else if (key == "piggyback_first_chunk")
    c.piggyback = toBool(key, v);
  else if (key == "t_base")
    c.tBase = toDouble(key, v);
  else if (key == "t_min")
    c.tMin = toDouble(key, v);
  else if (key == "purge_depth")
    c.purgeDepth = toUnsigned(key, v);
  else if (key == "digest") {
    if (v == "sha256")
      c.digest = DigestAlgorithm::Sha256;
    else if (v == "sha512")
      c.digest = DigestAlgorithm::Sha512;
    else
      bad(key, v, "sha256 or sha512");
  }
  else if (key == "forward_policy") {
    if (v == "both")
      c.forwardPolicy = ForwardPolicy::Both;
    else if (v == "ti_first")
      c.forwardPolicy = ForwardPolicy::TiFirst;
    else
      bad(key, v, "both or ti_first");
  }
  else if (key == "cache_replacement") {
    if (v == "lru")
      c.cacheReplacement = CacheReplacement::Lru;
    else if (v == "fifo")
      c.cacheReplacement = CacheReplacement::Fifo;
    else
      bad(key, v, "lru or fifo");
  }
  else if (key == "cfib_replacement") {
    if (v == "fifo")
      c.cfibReplacement = CfibReplacement::Fifo;
    else if (v == "lru")
      c.cfibReplacement = CfibReplacement::Lru;
    else
      bad(key, v, "fifo or lru");
  }
  else if (key == "freshness_every")
    c.freshnessEvery = toUnsigned(key, v);
  else if (key == "freshness_hops")
    c.freshnessHops = static_cast<unsigned>(toUnsigned(key, v));
  else if (key == "verify")
    c.verify = toBool(key, v);
  else if (key == "seeds" || key == "seed") {
    c.seeds = parseSeedList(v);
    if (c.seeds.empty())
      bad(key, v, "at least one seed");
  }
  else if (key == "workers")
    c.workers = static_cast<unsigned>(toUnsigned(key, v));
  else if (key == "out")
    c.out = v;
  else
    throw ConfigError("unknown key '" + std::string(key) + "'");
}

ExperimentConfig
parseConfig(std::istream& is, std::string_view sourceName, ExperimentConfig base)
{
  auto c = std::move(base);
  std::string line;
  std::size_t lineNo = 0;
  while (std::getline(is, line)) {
    ++lineNo;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    boost::trim(line);
    if (line.empty())
      continue;
    auto eq = line.find('=');
    auto where = std::string(sourceName) + ":" + std::to_string(lineNo) + ": ";
    if (eq == std::string::npos)
      throw ConfigError(where + "expected 'key = value'");
    auto key = boost::trim_copy(line.substr(0, eq));
    auto value = boost::trim_copy(line.substr(eq + 1));
    try {
      setConfigValue(c, key, value);
    }
    catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  return c;
}

ExperimentConfig
loadConfigFile(const std::filesystem::path& path, ExperimentConfig base)
{
  std::ifstream is(path);
  if (!is)
    throw ConfigError("cannot open config file " + path.string());
  return parseConfig(is, path.string(), std::move(base));
}

std::string
formatConfig(const ExperimentConfig& c)
{
  std::ostringstream os;
  std::vector<std::string> strategies;
  for (const auto& s : c.strategies)
    strategies.push_back(s.token());
  std::vector<std::string> policies;
  for (auto p : c.policies)
    policies.push_back(policyName(p));

  os << "study = " << c.study << '\n'
     << "topology = " << c.topology << '\n'
     << "strategies = " << boost::join(strategies, ",") << '\n'
     << "policies = " << boost::join(policies, ",") << '\n'
     << "cache_fraction = " << c.cacheFraction << '\n'
     << "cfib_fraction = " << c.cfibFraction << '\n'
     << "cache_budget = " << c.cacheBudget << '\n'
     << "cfib_ratio = " << c.cfibRatio << '\n'
     << "ratios = " << joinNumbers(c.ratios) << '\n'
     << "cache_pcts = " << joinNumbers(c.cachePcts) << '\n'
     << "cfib_pcts = " << joinNumbers(c.cfibPcts) << '\n'
     << "objects = " << c.objects << '\n'
     << "chunks_per_object = " << c.chunksPerObject << '\n'
     << "alpha = " << c.alpha << '\n'
     << "arrivals = " << arrivalsName(c.arrivals) << '\n'
     << "purging_arrivals = " << arrivalsName(c.purgingArrivals) << '\n'
     << "rate = " << c.rate << '\n'
     << "warmup = " << c.warmup << '\n'
     << "measure = " << c.measure << '\n'
     << "scheme = " << toString(c.scheme) << '\n'
     << "ttl = " << c.ttl << '\n'
     << "ttls = " << joinNumbers(c.ttls) << '\n'
     << "bundle = " << c.bundle << '\n'
     << "chunk_duration = " << c.chunkDuration << '\n'
     << "piggyback_first_chunk = " << (c.piggyback ? "true" : "false") << '\n'
     << "t_base = " << c.tBase << '\n'
     << "t_min = " << c.tMin << '\n'
     << "purge_depth = " << c.purgeDepth << '\n'
     << "digest = " << (c.digest == DigestAlgorithm::Sha256 ? "sha256" : "sha512") << '\n'
     << "forward_policy = " << (c.forwardPolicy == ForwardPolicy::Both ? "both" : "ti_first") << '\n'
     << "cache_replacement = " << (c.cacheReplacement == CacheReplacement::Lru ? "lru" : "fifo") << '\n'
     << "cfib_replacement = " << (c.cfibReplacement == CfibReplacement::Fifo ? "fifo" : "lru") << '\n'
     << "freshness_every = " << c.freshnessEvery << '\n'
     << "freshness_hops = " << c.freshnessHops << '\n'
     << "verify = " << (c.verify ? "true" : "false") << '\n'
     << "seeds = " << joinNumbers(c.seeds) << '\n'
     << "workers = " << c.workers << '\n';
  if (!c.out.empty())
    os << "out = " << c.out << '\n';
  return os.str();
}

} // namespace lira
