#include "lira/experiments.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

using namespace lira;

namespace {

struct CommonOptions
{
  std::string configFile;
  std::string preset;
  std::string seeds;
  std::string out;
  std::string topology;
  std::string study;
  std::vector<std::string> sets;
  unsigned workers = 0;
  bool quiet = false;
};

void
addCommon(CLI::App* cmd, CommonOptions& o)
{
  cmd->add_option("--config", o.configFile, "key = value config file");
  cmd->add_option("--preset", o.preset, "fig3, fig4, fig5, fig6 or fig7");
  cmd->add_option("--seed", o.seeds, "seed list, e.g. 1,2,3 or 1-5");
  cmd->add_option("--out", o.out, "output prefix (writes <prefix>.csv and <prefix>.json)");
  cmd->add_option("--topology", o.topology, "topology file or builtin:<name>");
  cmd->add_option("--study", o.study, "deployment, ratio, purging, incremental or trace");
  cmd->add_option("--set", o.sets, "override one key, key=value (repeatable)");
  cmd->add_option("--workers", o.workers, "parallel runs (0: one per core)");
  cmd->add_flag("--quiet", o.quiet, "no progress output");
}

ExperimentConfig
buildConfig(const CommonOptions& o)
{
  ExperimentConfig c;
  if (!o.preset.empty())
    applyPreset(c, o.preset);
  if (!o.configFile.empty())
    c = loadConfigFile(o.configFile, c);
  for (const auto& s : o.sets) {
    auto eq = s.find('=');
    if (eq == std::string::npos)
      throw ConfigError("--set expects key=value, got '" + s + "'");
    setConfigValue(c, s.substr(0, eq), s.substr(eq + 1));
  }
  if (!o.seeds.empty())
    setConfigValue(c, "seeds", o.seeds);
  if (!o.topology.empty())
    c.topology = o.topology;
  if (!o.study.empty())
    c.study = o.study;
  if (!o.out.empty())
    c.out = o.out;
  if (o.workers)
    c.workers = o.workers;
  return c;
}

std::ofstream
openOut(const std::string& path)
{
  std::ofstream os(path);
  if (!os)
    throw ConfigError("cannot write " + path);
  return os;
}

void
runTrace(const ExperimentConfig& c, double chunkDuration)
{
  std::vector<TraceRow> rows;
  if (c.topology.empty() || c.topology == "builtin:telstra108")
    rows = runGoldenTrace(chunkDuration);
  else
    rows = runGoldenTrace(loadTopologyReference(c.topology), chunkDuration);
  if (c.out.empty()) {
    writeTraceCsv(std::cout, rows);
    return;
  }
  auto os = openOut(c.out + ".csv");
  writeTraceCsv(os, rows);
  std::cerr << "wrote " << c.out << ".csv\n";
}

void
runSweep(const ExperimentConfig& c, bool quiet)
{
  if (c.study == "trace") {
    runTrace(c, c.chunkDuration);
    return;
  }
  ProgressFn progress;
  if (!quiet) {
    progress = [](std::size_t done, std::size_t total) {
      std::cerr << "\r" << done << "/" << total << " runs" << (done == total ? "\n" : "") << std::flush;
    };
  }
  auto rows = runStudy(c, progress);
  auto summary = summarizeResults(rows);
  if (c.out.empty()) {
    writeResultsCsv(std::cout, rows);
    return;
  }
  auto csv = openOut(c.out + ".csv");
  writeResultsCsv(csv, rows);
  auto json = openOut(c.out + ".json");
  json << summary.dump(2) << '\n';
  std::cerr << "wrote " << c.out << ".csv and " << c.out << ".json\n";
}

} // namespace

int
main(int argc, char** argv)
{
  CLI::App app{"LIRA network simulator"};
  app.require_subcommand(1);

  CommonOptions runOpts;
  auto* run = app.add_subcommand("run", "run one study from a config");
  addCommon(run, runOpts);

  CommonOptions sweepOpts;
  auto* sweep = app.add_subcommand("sweep", "run a named preset (fig3 .. fig7)");
  addCommon(sweep, sweepOpts);

  CommonOptions traceOpts;
  double traceD = 0.0;
  auto* trace = app.add_subcommand("trace", "replay the two-client example and print C-FIB rows");
  trace->add_option("--topology", traceOpts.topology, "topology with R1, R3, A, B");
  trace->add_option("--out", traceOpts.out, "output prefix");
  trace->add_option("--chunk-duration", traceD, "seconds from first byte to EoC");

  std::string reportIn;
  auto* report = app.add_subcommand("report", "summarize a results CSV as JSON");
  report->add_option("input", reportIn, "results CSV")->required();

  auto* printConfig = app.add_subcommand("config", "print the effective configuration");
  CommonOptions printOpts;
  addCommon(printConfig, printOpts);

  std::string convertIn;
  std::string convertOut;
  RocketfuelOptions rf;
  auto* convert = app.add_subcommand("convert", "RocketFuel map to topology document");
  convert->add_option("input", convertIn, "RocketFuel .cch or edge list")->required();
  convert->add_option("--out", convertOut, "output topology file");
  convert->add_option("--providers", rf.providers);
  convert->add_option("--seed", rf.seed);

  SyntheticTopologyOptions syn;
  std::string genOut;
  auto* gen = app.add_subcommand("gen-topology", "generate a synthetic ISP-like topology");
  gen->add_option("--routers", syn.routers);
  gen->add_option("--seed", syn.seed);
  gen->add_option("--providers", syn.providers);
  gen->add_option("--out", genOut, "output topology file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      runSweep(buildConfig(runOpts), runOpts.quiet);
    }
    else if (*sweep) {
      if (sweepOpts.preset.empty())
        throw ConfigError("sweep needs --preset");
      runSweep(buildConfig(sweepOpts), sweepOpts.quiet);
    }
    else if (*trace) {
      ExperimentConfig c;
      c.topology = traceOpts.topology.empty() ? "builtin:fig2" : traceOpts.topology;
      c.out = traceOpts.out;
      runTrace(c, traceD);
    }
    else if (*report) {
      std::ifstream is(reportIn);
      if (!is)
        throw ConfigError("cannot open " + reportIn);
      std::cout << summarizeResults(readResultsCsv(is)).dump(2) << '\n';
    }
    else if (*printConfig) {
      std::cout << formatConfig(buildConfig(printOpts));
    }
    else if (*convert) {
      std::ifstream is(convertIn);
      if (!is)
        throw ConfigError("cannot open " + convertIn);
      auto g = convertRocketfuel(is, rf);
      if (convertOut.empty())
        writeTopology(std::cout, g);
      else {
        auto os = openOut(convertOut);
        writeTopology(os, g);
      }
    }
    else if (*gen) {
      auto g = synthesizeIspTopology(syn);
      if (genOut.empty())
        writeTopology(std::cout, g);
      else {
        auto os = openOut(genOut);
        writeTopology(os, g);
      }
    }
  }
  catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
