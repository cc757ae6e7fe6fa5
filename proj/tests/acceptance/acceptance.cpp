// Runs acceptance criteria 1-8 and prints one PASS/FAIL line per criterion.
#include "lira/experiments.hpp"

#include "../oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <map>
#include <sstream>

using namespace lira;

namespace {

struct Stat
{
  double mean = 0;
  double se = 0;
};

struct Verdict
{
  bool pass = true;
  std::vector<std::string> notes;

  void
  check(bool ok, const std::string& what)
  {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok " : "FAILED ") + what);
  }
};

std::string
fmt(const char* f, double a, double b = 0, double c = 0, double d = 0)
{
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

/// a >= b within one standard error of the difference
bool
geWithin(const Stat& a, const Stat& b, double k = 1.0)
{
  return a.mean >= b.mean - k * std::sqrt(a.se * a.se + b.se * b.se);
}

template<typename KeyFn>
std::map<std::string, std::map<std::string, Stat>>
aggregate(const std::vector<ResultRow>& rows, KeyFn key)
{
  std::map<std::string, std::map<std::string, std::vector<double>>> raw;
  for (const auto& r : rows) {
    auto& m = raw[key(r)];
    m["hit_total"].push_back(r.hitTotal);
    m["hit_on"].push_back(r.hitOn);
    m["hit_off"].push_back(r.hitOff);
    m["freshness"].push_back(r.freshness);
    m["stale"].push_back(r.stale);
    m["stale_at_delivery"].push_back(r.staleAtDelivery);
  }
  std::map<std::string, std::map<std::string, Stat>> out;
  for (auto& [k, fields] : raw)
    for (auto& [f, v] : fields) {
      auto s = summarize(v);
      out[k][f] = Stat{s.mean, s.sem};
    }
  return out;
}

double
seconds(std::chrono::steady_clock::time_point since)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

std::string
num(double v)
{
  std::ostringstream os;
  os << v;
  return os.str();
}

// ---------------------------------------------------------------------------

Verdict
criterion1()
{
  Verdict v;
  auto start = std::chrono::steady_clock::now();
  auto rows = runGoldenTrace();
  double elapsed = seconds(start);

  // expected C-FIB rows of R1 and R3 for the example
  const std::vector<std::pair<std::string, std::string>> r1 = {
    {"t1", "x1,1,3,-,-"},  {"t2", "x1,1,-,3,-"},   {"t4", "x1,1,2,3,-"}, {"t5", "x1,1,-,2;3,-"},
    {"t7", "x2,1,3,-,-"},  {"t9", "x2,1,2;3,-,B"}, {"t10", "x2,1,-,2;3,-"},
  };
  const std::vector<std::pair<std::string, std::string>> r3 = {
    {"t3", "x1,1,2,-,-"}, {"t6", "x1,1,-,2,-"}, {"t8", "x2,1,2,-,-"}, {"t10", "x2,1,-,2,-"},
  };
  std::vector<std::pair<std::string, std::string>> got1, got3;
  for (const auto& r : rows) {
    if (r.node == "R1")
      got1.emplace_back(r.label, r.row);
    else if (r.node == "R3")
      got3.emplace_back(r.label, r.row);
  }
  v.check(got1 == r1, "R1 rows match the expected table (" + std::to_string(got1.size()) + " rows)");
  v.check(got3 == r3, "R3 rows match the expected table (" + std::to_string(got3.size()) + " rows)");

  bool ordered = rows.size() == 11;
  for (std::size_t i = 1; ordered && i < rows.size(); ++i)
    ordered = rows[i].time >= rows[i - 1].time;
  v.check(ordered, "t1..t10 occur in order");
  v.check(elapsed < 1.0, fmt("runtime %.3f s < 1 s", elapsed));
  return v;
}

ExperimentConfig
deploymentGrid()
{
  ExperimentConfig c;
  c.study = "deployment";
  c.topology = "builtin:telstra108";
  c.objects = 10000;
  c.alpha = 0.8;
  c.measure = 100000;
  c.seeds = {1, 2, 3, 4, 5};
  return c;
}

std::map<std::string, std::map<std::string, Stat>>
deploymentStats(double& elapsed)
{
  static std::map<std::string, std::map<std::string, Stat>> stats;
  static double took = 0;
  if (stats.empty()) {
    auto start = std::chrono::steady_clock::now();
    auto rows = runStudy(deploymentGrid());
    took = seconds(start);
    stats = aggregate(rows, [](const ResultRow& r) { return r.strategy + "/" + r.policy; });
  }
  elapsed = took;
  return stats;
}

Verdict
criterion2()
{
  Verdict v;
  double elapsed = 0;
  auto s = deploymentStats(elapsed);
  std::vector<double> fresh, off;
  for (auto& [k, m] : s) {
    fresh.push_back(m["freshness"].mean);
    off.push_back(m["hit_off"].mean);
    v.notes.push_back(k + fmt(": freshness %.4f, off-path %.4f, total %.4f", m["freshness"].mean,
                              m["hit_off"].mean, m["hit_total"].mean));
  }
  double rho = spearman(fresh, off);
  v.check(rho > 0.7, fmt("Spearman rho(freshness, off-path) = %.3f > 0.7 over %g points", rho,
                         static_cast<double>(fresh.size())));
  for (const char* pol : {"lce", "choice"}) {
    auto& m = s[std::string("CH_FA/") + pol];
    double gap = std::abs(m["hit_off"].mean - m["freshness"].mean);
    v.check(gap <= 0.02, std::string("CH_FA/") + pol +
                           fmt(": |off-path - freshness| = %.2f pp <= 2 pp", 100 * gap));
  }
  v.check(elapsed < 300, fmt("runtime %.1f s < 300 s", elapsed));
  return v;
}

Verdict
criterion3()
{
  Verdict v;
  double elapsed = 0;
  auto s = deploymentStats(elapsed);
  const std::vector<std::string> strategies = {"CH_FA", "CH_FH", "CA_FA", "CA_FH"};

  for (const auto& st : strategies) {
    auto c = s[st + "/choice"]["hit_total"];
    auto l = s[st + "/lce"]["hit_total"];
    v.check(geWithin(c, l), "(a) " + st + fmt(": choice %.4f >= lce %.4f", c.mean, l.mean));
  }
  for (const char* pol : {"lce", "choice"}) {
    for (const char* h : {"CH_FH", "CH_FA"})
      for (const char* a : {"CA_FA", "CA_FH"}) {
        auto hs = s[std::string(h) + "/" + pol]["hit_total"];
        auto as = s[std::string(a) + "/" + pol]["hit_total"];
        v.check(geWithin(hs, as), std::string("(b) ") + pol + ": " + h + " " + num(hs.mean) +
                                    " >= " + a + " " + num(as.mean));
      }
  }
  // matched C-FIB placement: (C_A,F_x) against (C_H,F_x)
  for (const char* pol : {"lce", "choice"}) {
    for (const char* f : {"FA", "FH"}) {
      auto as = s[std::string("CA_") + f + "/" + pol]["freshness"];
      auto hs = s[std::string("CH_") + f + "/" + pol]["freshness"];
      v.check(geWithin(as, hs), std::string("(c) ") + pol + ": CA_" + f + " freshness " +
                                  num(as.mean) + " >= CH_" + f + " " + num(hs.mean));
    }
  }
  return v;
}

Verdict
criterion4()
{
  Verdict v;
  ExperimentConfig c;
  c.study = "ratio";
  c.topology = "builtin:telstra108";
  c.seeds = {1, 2, 3};
  auto rows = runStudy(c);
  auto s = aggregate(rows, [](const ResultRow& r) { return r.policy + "/" + num(r.ratio); });

  for (const char* pol : {"lce", "choice"}) {
    std::string p = pol;
    auto at = [&](double r) -> std::map<std::string, Stat>& { return s[p + "/" + num(r)]; };
    const std::vector<double> grid = {0.25, 0.5, 1, 2, 4, 8, 16};
    bool mono = true;
    std::string curve;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      curve += fmt("%.4f ", at(grid[i])["hit_total"].mean);
      if (i > 0)
        mono = mono && geWithin(at(grid[i])["hit_total"], at(grid[i - 1])["hit_total"]);
    }
    curve += fmt("| 32: %.4f", at(32)["hit_total"].mean);
    v.check(mono, p + ": total hit non-decreasing over 0.25..16: " + curve);

    double h4 = at(4)["hit_total"].mean, h16 = at(16)["hit_total"].mean, h32 = at(32)["hit_total"].mean;
    v.check(h32 - h16 < h16 - h4, p + fmt(": hit(32)-hit(16) = %.4f < hit(16)-hit(4) = %.4f", h32 - h16, h16 - h4));

    double on16 = at(16)["hit_on"].mean, off16 = at(16)["hit_off"].mean;
    v.check(off16 >= 0.25 * on16, p + fmt(": off-path %.4f >= 25%% of on-path %.4f at 16", off16, on16));

    auto on32 = at(32)["hit_on"], on025 = at(0.25)["hit_on"];
    v.check(on32.mean <= on025.mean, p + fmt(": on-path at 32 %.4f <= at 0.25 %.4f", on32.mean, on025.mean));
  }
  return v;
}

Verdict
criterion5()
{
  Verdict v;
  ExperimentConfig c;
  applyPreset(c, "fig6");
  auto rows = runStudy(c);

  double raced = 0;
  for (const auto& r : rows) {
    if (r.scheme == "lira_w_replacement" || r.scheme == "lira_wo_replacement") {
      if (r.stale != 0.0)
        v.check(false, r.scheme + " seed " + std::to_string(r.seed) + " delivered stale content");
      raced = std::max(raced, r.staleAtDelivery);
    }
  }
  v.check(v.pass, "LIRA w/ and w/o replacement deliver no stale content (all seeds)");
  v.notes.push_back(fmt("note: at most %.5f of LIRA deliveries had their name rotated while in flight", raced));

  auto s = aggregate(rows, [](const ResultRow& r) { return r.scheme + "/" + num(r.ttl); });
  bool increasing = true;
  std::string staleCurve, freshCurve;
  double best = -1, bestTtl = 0;
  Stat bestStat;
  for (std::size_t i = 0; i < c.ttls.size(); ++i) {
    auto st = s["ttl_all/" + num(c.ttls[i])]["stale"];
    auto fr = s["ttl_fresh/" + num(c.ttls[i])]["hit_total"];
    staleCurve += fmt("%.4f ", st.mean);
    freshCurve += fmt("%.4f ", fr.mean);
    if (i > 0)
      increasing = increasing && st.mean > s["ttl_all/" + num(c.ttls[i - 1])]["stale"].mean;
    if (fr.mean > best) {
      best = fr.mean;
      bestTtl = static_cast<double>(i);
      bestStat = fr;
    }
  }
  v.check(increasing, "TTL(all hits) stale fraction strictly increasing in TTL: " + staleCurve);
  bool interior = bestTtl > 0 && bestTtl < static_cast<double>(c.ttls.size() - 1);
  v.check(interior, "TTL(fresh only) useful hits peak inside the grid: " + freshCurve);

  auto w = s["lira_w_replacement/0"]["hit_total"];
  auto wo = s["lira_wo_replacement/0"]["hit_total"];
  v.check(geWithin(w, wo), fmt("LIRA w/ %.4f >= LIRA w/o %.4f", w.mean, wo.mean));
  v.check(geWithin(wo, bestStat), fmt("LIRA w/o %.4f >= best TTL(fresh only) %.4f", wo.mean, bestStat.mean));
  return v;
}

Verdict
criterion6()
{
  Verdict v;
  ExperimentConfig c;
  applyPreset(c, "fig7");
  auto g = loadTopologyReference(c.topology);

  // C-FIB curve with caches everywhere, cache curve with C-FIBs everywhere
  std::vector<StudyPoint> points;
  ExperimentConfig cfibCurve = c;
  cfibCurve.cachePcts = {100};
  for (const auto& p : expandStudy(cfibCurve))
    points.push_back(p);
  ExperimentConfig cacheCurve = c;
  cacheCurve.cfibPcts = {100};
  cacheCurve.cachePcts = {25, 50, 75};
  for (const auto& p : expandStudy(cacheCurve))
    points.push_back(p);
  auto rows = runPoints(c, g, points);
  auto s = aggregate(rows, [](const ResultRow& r) { return num(r.cachePct) + "/" + num(r.cfibPct); });

  auto at = [&](double cache, double cfib) { return s[num(cache) + "/" + num(cfib)]["hit_total"]; };
  auto c30 = at(100, 30), c100 = at(100, 100);
  v.check(c30.mean >= 0.95 * c100.mean,
          fmt("C-FIB on top 30%%: %.4f >= 95%% of full C-FIB %.4f", c30.mean, c100.mean));
  auto k50 = at(50, 100);
  v.check(std::abs(k50.mean - c100.mean) <= 0.02,
          fmt("caches on top 50%%: %.4f within 2 pp of full deployment %.4f", k50.mean, c100.mean));

  bool mono = true;
  std::string curve;
  for (std::size_t i = 0; i < c.cfibPcts.size(); ++i) {
    curve += fmt("%.4f ", at(100, c.cfibPcts[i]).mean);
    if (i > 0)
      mono = mono && geWithin(at(100, c.cfibPcts[i]), at(100, c.cfibPcts[i - 1]), 2.0);
  }
  v.check(mono, "C-FIB curve non-decreasing within 2 stderr: " + curve);
  mono = true;
  curve.clear();
  const std::vector<double> cachePcts = {25, 50, 75, 100};
  for (std::size_t i = 0; i < cachePcts.size(); ++i) {
    curve += fmt("%.4f ", at(cachePcts[i], 100).mean);
    if (i > 0)
      mono = mono && geWithin(at(cachePcts[i], 100), at(cachePcts[i - 1], 100), 2.0);
  }
  v.check(mono, "cache curve non-decreasing within 2 stderr: " + curve);
  return v;
}

Verdict
criterion7()
{
  Verdict v;

  // single-node LRU against a brute-force replay
  {
    auto rng = rngStream(7, "oracle-lru");
    ZipfDistribution zipf(0.8, 500);
    std::vector<std::uint32_t> trace;
    for (int i = 0; i < 10000; ++i)
      trace.push_back(zipf.sample(rng));
    bool same = true;
    for (std::size_t cap : {1, 4, 16, 64, 256}) {
      auto expect = oracle::lruReplay(trace, cap);
      ContentStore cs(cap);
      for (std::size_t i = 0; i < trace.size(); ++i) {
        bool hit = cs.lookup(trace[i], 0.0) == LookupResult::Hit;
        if (!hit)
          cs.admit(trace[i], 0.0);
        same = same && hit == expect[i];
      }
    }
    v.check(same, "LRU store equals brute-force replay (10^4 requests, 5 capacities)");
  }

  // betweenness against path enumeration
  {
    bool same = true;
    int graphs = 0;
    for (std::size_t n = 2; n <= 12; ++n)
      for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto g = oracle::randomRouterGraph(n, seed * 100 + n);
        auto got = betweenness(g);
        auto want = oracle::betweennessByPaths(g);
        for (NodeId x = 0; x < g.size(); ++x)
          same = same && std::abs(got[x] - want[x]) <= 1e-9 * std::max(1.0, want[x]);
        ++graphs;
      }
    v.check(same, "betweenness equals path enumeration on " + std::to_string(graphs) + " graphs of 2..12 routers");
  }

  // Zipf sampler KS test
  {
    auto rng = rngStream(11, "oracle-zipf");
    ZipfDistribution zipf(0.8, 100);
    std::vector<std::uint32_t> draws;
    for (int i = 0; i < 100000; ++i)
      draws.push_back(zipf.sample(rng));
    auto cdf = oracle::zipfCdf(0.8, 100);
    double d = oracle::ksStatistic(draws, [&](std::uint32_t k) { return cdf[k - 1]; }, 100);
    double p = oracle::ksPValue(d, draws.size());
    v.check(p > 0.01, fmt("Zipf KS statistic %.5f, p = %.3f > 0.01", d, p));
  }

  // C-FIB FIFO eviction against a queue
  {
    auto rng = rngStream(13, "oracle-cfib");
    std::vector<std::uint32_t> trace;
    for (int i = 0; i < 10000; ++i)
      trace.push_back(static_cast<std::uint32_t>(uniformIndex(rng, 300)));
    bool same = true;
    for (std::size_t cap : {1, 8, 64, 200}) {
      auto expect = oracle::fifoReplay(trace, cap);
      CfibTable t(cap, CfibReplacement::Fifo);
      std::deque<std::uint32_t> model;
      for (std::size_t i = 0; i < trace.size(); ++i) {
        t.onRequestForwarded(trace[i], 2, 1);
        if (std::find(model.begin(), model.end(), trace[i]) == model.end())
          model.push_back(trace[i]);
        if (expect[i] >= 0)
          model.pop_front();
        std::vector<std::uint32_t> contents;
        t.forEach([&](const CfibEntry& e) { contents.push_back(e.cid); });
        same = same && std::equal(contents.begin(), contents.end(), model.begin(), model.end());
      }
    }
    v.check(same, "C-FIB FIFO order equals queue oracle (10^4 steps, 4 capacities)");
  }
  return v;
}

Verdict
criterion8()
{
  Verdict v;

  // multicast: ten clients behind one C-FIB hub ask for the same chunk at once
  {
    Graph g;
    auto hub = g.addRouter("H");
    auto up = g.addRouter("U");
    g.addEdge(hub, up, 5.0);
    std::vector<NodeId> clients;
    for (int i = 0; i < 10; ++i) {
      auto e = g.addRouter("E" + std::to_string(i));
      g.addEdge(e, hub, 1.0);
      clients.push_back(g.attachClient("c" + std::to_string(i), e));
    }
    g.attachProvider("cp", up);
    g.validate();
    RoleMap roles(g.size());
    roles[hub] = NodeRole{true, true, 16, 64};
    SimulationConfig sc;
    sc.chunkDuration = 0.05;
    Simulation sim(g, roles, sc, 4);
    sim.keepDeliveries(true);
    for (auto cl : clients)
      sim.scheduleFetch(0.0, cl, 0);
    sim.drain();
    auto upstream = sim.dataCount(up, g.interfaceTowards(up, hub));
    v.check(upstream == 1 && sim.deliveries().size() == 10,
            "multicast: " + std::to_string(upstream) + " upstream Data, " +
              std::to_string(sim.deliveries().size()) + " deliveries (want 1 and 10)");
  }

  // loop freedom over at least 10^6 message hops
  {
    auto g = loadTopologyReference("builtin:telstra108");
    ExperimentConfig c;
    StudyPoint p;
    p.strategy = {Placement::High, Placement::All};
    p.ratio = 16;
    p.seed = 3;
    auto roles = buildRoles(c, g, p);
    auto sc = simulationConfig(c, p);
    sc.chunkDuration = 0.02;
    sc.checkLoops = true;
    WorkloadConfig wc;
    wc.arrivals = ArrivalMode::Poisson;
    wc.rate = 400;
    wc.warmup = 0;
    wc.measure = 100000;
    wc.seed = 3;
    auto fetches = generateWorkload(wc, g.clients());
    Simulation sim(g, roles, sc, wc.objects);
    sim.run(fetches, 0, ArrivalMode::Poisson);
    const auto& m = sim.metrics();
    v.check(m.messagesSent >= 1000000 && m.loopViolations == 0 && m.hopBudgetDrops == 0,
            "loop freedom: " + std::to_string(m.messagesSent) + " hops, " +
              std::to_string(m.loopViolations) + " repeated links, " +
              std::to_string(m.hopBudgetDrops) + " hop-budget drops, " +
              std::to_string(m.suppressions) + " suppressions");
    v.check(m.requests() == wc.measure, "termination: " + std::to_string(m.requests()) + " of " +
                                          std::to_string(wc.measure) + " fetches delivered");
  }

  // determinism: same seed twice, byte-identical CSV
  {
    ExperimentConfig c;
    c.study = "deployment";
    c.strategies = {{Placement::High, Placement::All}};
    c.policies = {AdmissionKind::Choice};
    c.chunkDuration = 0.01;
    c.arrivals = ArrivalMode::Poisson;
    c.rate = 200;
    c.warmup = 5000;
    c.measure = 20000;
    c.seeds = {9};
    std::ostringstream a, b;
    writeResultsCsv(a, runStudy(c));
    writeResultsCsv(b, runStudy(c));
    v.check(a.str() == b.str() && !a.str().empty(), "determinism: repeated run gives identical CSV");
  }
  return v;
}

} // namespace

int
main()
{
  const std::vector<std::pair<std::string, Verdict (*)()>> criteria = {
    {"1 golden trace", criterion1},
    {"2 freshness vs off-path", criterion2},
    {"3 deployment orderings", criterion3},
    {"4 C-FIB ratio sweep", criterion4},
    {"5 purging", criterion5},
    {"6 incremental deployment", criterion6},
    {"7 oracle suites", criterion7},
    {"8 protocol properties", criterion8},
  };
  int failed = 0;
  std::vector<std::string> summary;
  for (const auto& [name, fn] : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = fn();
    }
    catch (const std::exception& e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    for (const auto& n : v.notes)
      std::cout << "    " << n << '\n';
    auto line = "criterion " + name + ": " + (v.pass ? "PASS" : "FAIL") +
                fmt(" (%.1f s)", seconds(start));
    std::cout << line << '\n' << std::flush;
    summary.push_back(line);
    failed += v.pass ? 0 : 1;
  }
  std::cout << "\nsummary\n";
  for (const auto& s : summary)
    std::cout << s << '\n';
  return failed == 0 ? 0 : 1;
}
