#include "lira/experiments.hpp"

#include <boost/algorithm/string.hpp>

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace lira {

const char*
toString(AdmissionKind k)
{
  return k == AdmissionKind::Lce ? "lce" : "choice";
}

namespace {

const DeploymentStrategy kChFa{Placement::High, Placement::All};

void
checkCommon(const ExperimentConfig& c)
{
  if (c.seeds.empty())
    throw ConfigError("no seeds given");
  if (c.policies.empty())
    throw ConfigError("no caching policy given");
  if (c.objects == 0 || c.chunksPerObject == 0)
    throw ConfigError("catalog must not be empty");
  if (c.measure == 0)
    throw ConfigError("measure must be positive");
}

Placement
placementFor(double pct)
{
  return pct >= 100.0 ? Placement::All : Placement::High;
}

} // namespace

std::vector<StudyPoint>
expandStudy(const ExperimentConfig& c)
{
  checkCommon(c);
  std::vector<StudyPoint> out;
  StudyPoint base;
  base.study = c.study;
  base.cacheFraction = c.cacheFraction;
  base.cfibFraction = c.cfibFraction;
  base.ratio = c.cfibRatio;
  base.arrivals = c.arrivals;
  base.scheme = c.scheme;
  base.ttl = c.ttl;

  if (c.study == "deployment") {
    if (c.strategies.empty())
      throw ConfigError("no deployment strategy given");
    for (const auto& s : c.strategies)
      for (auto pol : c.policies)
        for (auto seed : c.seeds) {
          auto p = base;
          p.strategy = s;
          p.policy = pol;
          p.seed = seed;
          out.push_back(p);
        }
  }
  else if (c.study == "ratio") {
    for (auto r : c.ratios)
      for (auto pol : c.policies)
        for (auto seed : c.seeds) {
          auto p = base;
          p.strategy = kChFa;
          p.ratio = r;
          p.policy = pol;
          p.seed = seed;
          out.push_back(p);
        }
  }
  else if (c.study == "purging") {
    for (auto pol : c.policies)
      for (auto seed : c.seeds) {
        auto p = base;
        p.strategy = kChFa;
        p.policy = pol;
        p.seed = seed;
        p.arrivals = c.purgingArrivals;
        for (auto s : {Scheme::LiraWithout, Scheme::LiraWith}) {
          p.scheme = s;
          out.push_back(p);
        }
        p.scheme = Scheme::Ttl;
        for (auto ttl : c.ttls) {
          p.ttl = ttl;
          out.push_back(p);
        }
      }
  }
  else if (c.study == "incremental") {
    for (auto cachePct : c.cachePcts)
      for (auto cfibPct : c.cfibPcts)
        for (auto pol : c.policies)
          for (auto seed : c.seeds) {
            if (cachePct <= 0 || cachePct > 100 || cfibPct < 0 || cfibPct > 100)
              throw ConfigError("deployment percentages must be in (0,100] for caches and [0,100] for C-FIBs");
            auto p = base;
            p.strategy = {placementFor(cachePct), placementFor(cfibPct)};
            p.cachePct = cachePct;
            p.cfibPct = cfibPct;
            p.cacheFraction = cachePct / 100.0;
            p.cfibFraction = cfibPct / 100.0;
            p.policy = pol;
            p.seed = seed;
            out.push_back(p);
          }
  }
  else if (c.study == "trace")
    throw ConfigError("the trace study is a fixed scenario; run it with the trace command");
  else
    throw ConfigError("unknown study '" + c.study + "'");
  return out;
}

RoleMap
buildRoles(const ExperimentConfig& c, const Graph& g, const StudyPoint& p)
{
  DeploymentParams d;
  d.strategy = p.strategy;
  d.cacheFraction = p.cacheFraction;
  d.cfibFraction = p.cfibFraction;
  d.cfibRatio = p.ratio;
  d.totalCacheBudget = static_cast<std::size_t>(
    std::llround(c.cacheBudget * static_cast<double>(c.objects) * c.chunksPerObject));
  if (d.totalCacheBudget == 0)
    throw ConfigError("cache budget rounds to zero slots");
  // no C-FIB at all: every router gets an empty table
  if (p.strategy.cfib == Placement::High && p.cfibFraction <= 0.0) {
    d.strategy.cfib = Placement::All;
    d.cfibRatio = 0.0;
  }
  auto ranking = betweennessRanking(g);
  if (p.study != "incremental")
    return applyDeployment(g, ranking, d);

  // incremental: every upgraded router gets the per-node share of full deployment
  auto routers = ranking.size();
  auto count = [routers](double fraction) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(routers) + 1e-9));
  };
  auto cacheShares = splitBudget(d.totalCacheBudget, routers);
  auto cfibShares = splitBudget(
    static_cast<std::size_t>(std::llround(static_cast<double>(d.totalCacheBudget) * p.ratio)), routers);
  RoleMap roles(g.size());
  for (std::size_t i = 0; i < count(p.cacheFraction); ++i) {
    auto& r = roles[ranking[i]];
    r.hasCache = true;
    r.cacheCapacity = cacheShares[i];
  }
  for (std::size_t i = 0; i < count(p.cfibFraction); ++i) {
    auto& r = roles[ranking[i]];
    r.hasCfib = true;
    r.cfibCapacity = cfibShares[i];
  }
  return roles;
}

SimulationConfig
simulationConfig(const ExperimentConfig& c, const StudyPoint& p)
{
  SimulationConfig s;
  s.admission = p.policy;
  s.cacheReplacement = c.cacheReplacement;
  s.cfibReplacement = c.cfibReplacement;
  s.forwardPolicy = c.forwardPolicy;
  s.chunkDuration = c.chunkDuration;
  s.chunksPerObject = c.chunksPerObject;
  s.bundleSize = c.bundle;
  s.piggybackFirstChunk = c.piggyback;
  s.tBase = c.tBase;
  s.tMin = c.tMin;
  s.purgeDepth = c.purgeDepth;
  s.digest = c.digest;
  s.freshnessEvery = c.freshnessEvery;
  s.freshnessHops = c.freshnessHops;
  s.seed = p.seed;
  s.verifyDelivery = c.verify;
  switch (p.scheme) {
    case Scheme::Lira:
      s.rotation = RotationMode::Off;
      break;
    case Scheme::LiraWithout:
      s.rotation = RotationMode::WithoutReplacement;
      break;
    case Scheme::LiraWith:
      s.rotation = RotationMode::WithReplacement;
      break;
    case Scheme::Ttl:
      s.rotation = RotationMode::WithoutReplacement;
      s.cacheMode = CacheMode::Ttl;
      s.ttl = p.ttl;
      break;
  }
  return s;
}

std::vector<ResultRow>
runPoint(const ExperimentConfig& c, const Graph& g, const StudyPoint& p)
{
  auto roles = buildRoles(c, g, p);
  auto sc = simulationConfig(c, p);

  WorkloadConfig wc;
  wc.objects = c.objects;
  wc.alpha = c.alpha;
  wc.arrivals = p.arrivals;
  wc.rate = c.rate;
  wc.warmup = c.warmup;
  wc.measure = c.measure;
  wc.seed = p.seed;
  auto fetches = generateWorkload(wc, g.clients());

  Simulation sim(g, roles, sc, c.objects);
  sim.run(fetches, c.warmup, p.arrivals);
  const auto& m = sim.metrics();

  ResultRow r;
  r.topology = c.topology;
  r.strategy = p.strategy.token();
  r.policy = toString(p.policy);
  r.ratio = p.ratio;
  r.alpha = c.alpha;
  r.seed = p.seed;
  r.hitOn = m.fraction(Outcome::OnPath);
  r.hitOff = m.fraction(Outcome::OffPath);
  r.hitTotal = m.hitRatio();
  r.freshness = m.freshness().mean;
  r.stale = m.fraction(Outcome::Stale);
  r.latencyMs = m.meanLatency() * 1000.0;
  r.study = p.study;
  r.scheme = toString(p.scheme);
  r.ttl = p.scheme == Scheme::Ttl ? p.ttl : 0.0;
  r.cachePct = p.cachePct;
  r.cfibPct = p.cfibPct;
  r.staleAtDelivery = m.staleAtDeliveryRatio();
  r.requests = m.requests();
  r.metrics = m.toJson();

  if (p.scheme != Scheme::Ttl)
    return {r};
  auto all = r;
  all.scheme = "ttl_all";
  all.hitTotal = r.hitTotal + r.stale;
  auto fresh = r;
  fresh.scheme = "ttl_fresh";
  return {all, fresh};
}

std::vector<ResultRow>
runPoints(const ExperimentConfig& c, const Graph& g, const std::vector<StudyPoint>& points,
          const ProgressFn& progress)
{
  std::vector<std::vector<ResultRow>> results(points.size());
  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> done{0};
  std::mutex mutex;
  std::exception_ptr failure;

  auto work = [&] {
    for (;;) {
      auto i = next.fetch_add(1);
      if (i >= points.size())
        return;
      try {
        results[i] = runPoint(c, g, points[i]);
      }
      catch (...) {
        std::lock_guard lock(mutex);
        if (!failure)
          failure = std::current_exception();
        next = points.size();
        return;
      }
      auto d = ++done;
      if (progress) {
        std::lock_guard lock(mutex);
        progress(d, points.size());
      }
    }
  };

  unsigned workers = c.workers ? c.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, points.size()));
  if (workers <= 1)
    work();
  else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
      pool.emplace_back(work);
  }
  if (failure)
    std::rethrow_exception(failure);

  std::vector<ResultRow> rows;
  for (auto& r : results)
    rows.insert(rows.end(), r.begin(), r.end());
  return rows;
}

std::vector<ResultRow>
runStudy(const ExperimentConfig& c, const ProgressFn& progress)
{
  auto points = expandStudy(c);
  auto g = loadTopologyReference(c.topology);
  return runPoints(c, g, points, progress);
}

namespace {

const char* const kColumns[] = {
  "topology", "strategy", "policy", "ratio", "alpha", "seed", "hit_total", "hit_on", "hit_off",
  "freshness", "stale", "latency_ms", "study", "scheme", "ttl", "cache_pct", "cfib_pct",
  "stale_at_delivery", "requests",
};

std::string
num(double v)
{
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

double
parseNum(const std::string& s, const std::string& column)
{
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size())
      throw std::invalid_argument(s);
    return v;
  }
  catch (const std::exception&) {
    throw ConfigError("column '" + column + "': not a number: '" + s + "'");
  }
}

} // namespace

void
writeResultsCsv(std::ostream& os, const std::vector<ResultRow>& rows)
{
  for (std::size_t i = 0; i < std::size(kColumns); ++i)
    os << (i ? "," : "") << kColumns[i];
  os << '\n';
  for (const auto& r : rows) {
    os << r.topology << ',' << r.strategy << ',' << r.policy << ',' << num(r.ratio) << ','
       << num(r.alpha) << ',' << r.seed << ',' << num(r.hitTotal) << ',' << num(r.hitOn) << ','
       << num(r.hitOff) << ',' << num(r.freshness) << ',' << num(r.stale) << ','
       << num(r.latencyMs) << ',' << r.study << ',' << r.scheme << ',' << num(r.ttl) << ','
       << num(r.cachePct) << ',' << num(r.cfibPct) << ',' << num(r.staleAtDelivery) << ','
       << r.requests << '\n';
  }
}

std::vector<ResultRow>
readResultsCsv(std::istream& is)
{
  std::string line;
  if (!std::getline(is, line))
    throw ConfigError("empty results file");
  std::vector<std::string> header;
  boost::trim(line);
  boost::split(header, line, boost::is_any_of(","));
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < header.size(); ++i)
    col[header[i]] = i;
  for (const char* name : kColumns) {
    if (!col.count(name))
      throw ConfigError(std::string("results file lacks column '") + name + "'");
  }

  std::vector<ResultRow> rows;
  while (std::getline(is, line)) {
    boost::trim(line);
    if (line.empty())
      continue;
    std::vector<std::string> f;
    boost::split(f, line, boost::is_any_of(","));
    if (f.size() != header.size())
      throw ConfigError("results row has " + std::to_string(f.size()) + " fields, expected " +
                        std::to_string(header.size()));
    auto get = [&](const char* name) -> const std::string& { return f[col[name]]; };
    auto number = [&](const char* name) { return parseNum(get(name), name); };
    ResultRow r;
    r.topology = get("topology");
    r.strategy = get("strategy");
    r.policy = get("policy");
    r.ratio = number("ratio");
    r.alpha = number("alpha");
    r.seed = static_cast<std::uint64_t>(number("seed"));
    r.hitTotal = number("hit_total");
    r.hitOn = number("hit_on");
    r.hitOff = number("hit_off");
    r.freshness = number("freshness");
    r.stale = number("stale");
    r.latencyMs = number("latency_ms");
    r.study = get("study");
    r.scheme = get("scheme");
    r.ttl = number("ttl");
    r.cachePct = number("cache_pct");
    r.cfibPct = number("cfib_pct");
    r.staleAtDelivery = number("stale_at_delivery");
    r.requests = static_cast<std::uint64_t>(number("requests"));
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json
summarizeResults(const std::vector<ResultRow>& rows)
{
  using Key = std::tuple<std::string, std::string, std::string, std::string, double, double,
                         std::string, double, double, double>;
  std::map<Key, std::vector<const ResultRow*>> groups;
  std::vector<Key> order;
  for (const auto& r : rows) {
    Key k{r.study, r.topology, r.strategy, r.policy, r.ratio, r.alpha, r.scheme, r.ttl, r.cachePct,
          r.cfibPct};
    auto [it, inserted] = groups.try_emplace(k);
    if (inserted)
      order.push_back(k);
    it->second.push_back(&r);
  }

  auto stat = [](const std::vector<const ResultRow*>& g, double ResultRow::*field) {
    std::vector<double> v;
    for (const auto* r : g)
      v.push_back(r->*field);
    auto s = summarize(v);
    return nlohmann::json{{"mean", s.mean}, {"stderr", s.sem}};
  };

  nlohmann::json points = nlohmann::json::array();
  for (const auto& k : order) {
    const auto& g = groups[k];
    const auto& f = *g.front();
    nlohmann::json seeds = nlohmann::json::array();
    for (const auto* r : g)
      seeds.push_back(r->seed);
    points.push_back({
      {"study", f.study},
      {"topology", f.topology},
      {"strategy", f.strategy},
      {"policy", f.policy},
      {"ratio", f.ratio},
      {"alpha", f.alpha},
      {"scheme", f.scheme},
      {"ttl", f.ttl},
      {"cache_pct", f.cachePct},
      {"cfib_pct", f.cfibPct},
      {"seeds", seeds},
      {"hit_total", stat(g, &ResultRow::hitTotal)},
      {"hit_on", stat(g, &ResultRow::hitOn)},
      {"hit_off", stat(g, &ResultRow::hitOff)},
      {"freshness", stat(g, &ResultRow::freshness)},
      {"stale", stat(g, &ResultRow::stale)},
      {"stale_at_delivery", stat(g, &ResultRow::staleAtDelivery)},
      {"latency_ms", stat(g, &ResultRow::latencyMs)},
    });
  }
  nlohmann::json runs = nlohmann::json::array();
  for (const auto& r : rows) {
    if (r.metrics.is_null())
      continue;
    runs.push_back({{"study", r.study},
                    {"strategy", r.strategy},
                    {"policy", r.policy},
                    {"ratio", r.ratio},
                    {"scheme", r.scheme},
                    {"ttl", r.ttl},
                    {"cache_pct", r.cachePct},
                    {"cfib_pct", r.cfibPct},
                    {"seed", r.seed},
                    {"metrics", r.metrics}});
  }
  return nlohmann::json{{"points", points}, {"runs", runs}};
}

std::vector<TraceRow>
runGoldenTrace(double chunkDuration)
{
  auto g = loadTopologyReference("builtin:fig2");
  return runGoldenTrace(g, chunkDuration);
}

std::vector<TraceRow>
runGoldenTrace(const Graph& g, double chunkDuration)
{
  auto need = [&g](const char* name) {
    auto n = g.find(name);
    if (!n)
      throw ConfigError(std::string("trace topology lacks node '") + name + "'");
    return *n;
  };
  RoleMap roles(g.size());
  for (const char* name : {"R1", "R3"}) {
    auto& r = roles[need(name)];
    r.hasCache = r.hasCfib = true;
    r.cacheCapacity = 8;
    r.cfibCapacity = 8;
  }

  SimulationConfig sc;
  sc.chunkDuration = chunkDuration;
  sc.recordCfibTrace = true;
  Simulation sim(g, roles, sc, 2);
  auto a = need("A");
  auto b = need("B");
  sim.scheduleFetch(0.0, a, 0);
  sim.scheduleFetch(0.1, b, 0);
  sim.scheduleFetch(0.2, a, 1);
  sim.scheduleFetch(0.2, b, 1);
  sim.drain();

  std::vector<TraceRow> rows;
  for (const auto& step : sim.cfibTrace()) {
    TraceRow t;
    t.time = step.time;
    t.node = g.name(step.node);
    auto label = "x" + std::to_string(sim.provider().info(step.cid).object + 1);
    t.row = formatCfibRow(step.entry, label, [&g](NodeId n) { return g.name(n); });
    rows.push_back(std::move(t));
  }
  static const char* const kLabels[] = {"t1", "t2", "t3", "t4", "t5", "t6", "t7", "t8", "t9", "t10", "t10"};
  if (rows.size() == std::size(kLabels)) {
    for (std::size_t i = 0; i < rows.size(); ++i)
      rows[i].label = kLabels[i];
  }
  return rows;
}

void
writeTraceCsv(std::ostream& os, const std::vector<TraceRow>& rows)
{
  os << "step,time,node,cid,if_I,if_O,if_TI,mIP\n";
  for (const auto& r : rows) {
    os << r.label << ',' << std::fixed << std::setprecision(3) << r.time << std::defaultfloat << ','
       << r.node << ',' << r.row << '\n';
  }
}

} // namespace lira
