#include "commands.h"

#include <charconv>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string_view>

#include "json.hpp"
#include "storagelab/filterlist.h"
#include "storagelab/grading.h"
#include "storagelab/io.h"
#include "storagelab/metrics.h"
#include "storagelab/psl.h"
#include "storagelab/similarity.h"
#include "storagelab/simulator.h"
#include "storagelab/status_macros.h"
#include "storagelab/synthetic.h"
#include "storagelab/trace.h"

#ifndef STORAGELAB_VERSION
#define STORAGELAB_VERSION "0.0.0"
#endif

namespace storagelab::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

absl::Status InputError(const std::string& message) {
  return absl::InvalidArgumentError(message);
}

std::string FormatDouble(double value) {
  char buffer[64];
  auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, result.ptr);
}

std::string RunName(const fs::path& dir) {
  fs::path normal = dir.lexically_normal();
  if (normal.filename().empty()) normal = normal.parent_path();
  return normal.filename().string();
}

// Input file described for a manifest: path as given plus content hash.
Json DescribeInput(const std::string& path, const std::string& contents) {
  Json j;
  j["path"] = path;
  j["sha256"] = Sha256Hex(contents);
  return j;
}

struct LoadedRules {
  SuffixRuleSet rules;
  Json description;
};

absl::StatusOr<LoadedRules> LoadPsl(const std::string& path) {
  LoadedRules loaded;
  if (path.empty()) {
    loaded.rules = SuffixRuleSet::Builtin();
    loaded.description =
        DescribeInput("builtin", std::string(BuiltinPslText()));
    return loaded;
  }
  ASSIGN_OR_RETURN(std::string text, ReadFile(path));
  ASSIGN_OR_RETURN(loaded.rules, ParsePsl(text));
  loaded.description = DescribeInput(path, text);
  return loaded;
}

// Writes `files` under `dir`, then a manifest echoing config, inputs and the
// hash of every output file.
absl::Status WriteOutputs(const fs::path& dir, const std::string& command,
                          Json config, Json inputs,
                          const std::map<std::string, std::string>& files) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) {
    return absl::PermissionDeniedError("cannot create " + dir.string() + ": " +
                                       ec.message());
  }
  Json outputs = Json::object();
  for (const auto& [name, contents] : files) {
    RETURN_IF_ERROR(WriteFile(dir / name, contents));
    outputs[name] = Sha256Hex(contents);
  }
  Json manifest;
  manifest["tool"] = "storagelab";
  manifest["version"] = STORAGELAB_VERSION;
  manifest["command"] = command;
  manifest["config"] = std::move(config);
  manifest["inputs"] = std::move(inputs);
  manifest["outputs"] = std::move(outputs);
  return WriteFile(dir / kManifestFileName, manifest.dump(2) + "\n");
}

absl::StatusOr<std::vector<RunDirectory>> LoadRuns(
    const std::vector<std::string>& paths) {
  std::vector<RunDirectory> runs;
  std::set<std::string> names;
  for (const std::string& path : paths) {
    ASSIGN_OR_RETURN(RunDirectory run, LoadRunDirectory(path));
    if (!names.insert(RunName(run.path)).second) {
      return InputError("two run directories share the name '" +
                        RunName(run.path) + "'");
    }
    runs.push_back(std::move(run));
  }
  if (runs.empty()) return InputError("no run directories given");
  return runs;
}

absl::Status RequireSameTrace(const std::vector<const RunDirectory*>& runs) {
  for (const RunDirectory* run : runs) {
    if (run->trace_sha256 != runs.front()->trace_sha256) {
      return InputError("runs " + runs.front()->path.string() + " and " +
                        run->path.string() +
                        " were simulated from different traces");
    }
  }
  return absl::OkStatus();
}

Json DescribeRuns(const std::vector<RunDirectory>& runs) {
  Json list = Json::array();
  for (const RunDirectory& run : runs) {
    Json j;
    j["path"] = run.path.string();
    j["policy"] = run.policy;
    j["trace_sha256"] = run.trace_sha256;
    list.push_back(std::move(j));
  }
  return list;
}

// Finds a run by explicit path, else the first run with `policy`.
absl::StatusOr<const RunDirectory*> PickRun(
    const std::vector<RunDirectory>& runs, const std::string& path,
    std::string_view policy, std::string_view role) {
  for (const RunDirectory& run : runs) {
    if (path.empty() ? run.policy == policy
                     : fs::path(path).lexically_normal() ==
                           run.path.lexically_normal()) {
      return &run;
    }
  }
  return InputError(
      path.empty()
          ? "no " + std::string(policy) + " run for the " + std::string(role) +
                "; pass --" + std::string(role)
          : "--" + std::string(role) + " " + path + " is not among --runs");
}

std::string CurveCsv(const std::vector<CumulativePoint>& curve) {
  std::string csv = CsvRow({"rank", "cumulative_sum"});
  for (const CumulativePoint& point : curve) {
    csv += CsvRow(
        {std::to_string(point.rank), std::to_string(point.cumulative_sum)});
  }
  return csv;
}

Json BaseMetricsConfig(const MetricsConfig& config) {
  Json j;
  j["runs"] = config.runs;
  j["picf_threshold"] = config.threshold;
  j["seed"] = config.seed;
  return j;
}

absl::Status MetricsPicf(const MetricsConfig& config,
                         const std::vector<RunDirectory>& runs,
                         std::ostream& out) {
  std::map<std::string, std::string> files;
  for (const RunDirectory& run : runs) {
    std::string csv = CsvRow(
        {"cookie_name", "cookie_value", "third_party_site", "owning_profile"});
    const std::set<Picf> picfs =
        ExtractPicfs(run.output.flows, config.threshold);
    for (const Picf& picf : picfs) {
      csv += CsvRow({picf.cookie_name, picf.cookie_value, picf.third_party_site,
                     picf.owning_profile});
    }
    files[RunName(run.path) + ".csv"] = std::move(csv);
    out << RunName(run.path) << " picfs=" << picfs.size() << "\n";
  }
  Json inputs;
  inputs["runs"] = DescribeRuns(runs);
  return WriteOutputs(config.out_dir, "metrics picf", BaseMetricsConfig(config),
                      std::move(inputs), files);
}

absl::Status MetricsTrackability(const MetricsConfig& config,
                                 const std::vector<RunDirectory>& runs,
                                 std::ostream& out) {
  const bool cross_site = config.command == "cross-site";
  const CrossTimeMode mode = config.cross_time_mode == "iterations"
                                 ? CrossTimeMode::kAcrossIterations
                                 : CrossTimeMode::kAnyVisits;
  std::map<std::string, std::string> files;
  std::string totals = CsvRow({"run", "policy", "total", "keys"});
  for (const RunDirectory& run : runs) {
    const std::set<Picf> picfs =
        ExtractPicfs(run.output.flows, config.threshold);
    const Scores scores =
        cross_site ? CrossSiteScores(picfs, run.output.flows,
                                     CrossSiteOptions{config.min_sites})
                   : CrossTimeScores(picfs, run.output.flows, mode);
    const std::string name = RunName(run.path);
    files[name + ".csv"] = CurveCsv(CumulativeCurve(scores));
    totals += CsvRow({name, run.policy, std::to_string(Total(scores)),
                      std::to_string(scores.size())});
    out << name << " (" << run.policy << ") total=" << Total(scores) << "\n";
  }
  files["totals.csv"] = std::move(totals);
  Json cfg = BaseMetricsConfig(config);
  if (cross_site) {
    cfg["min_sites"] = config.min_sites;
  } else {
    cfg["mode"] = config.cross_time_mode;
  }
  Json inputs;
  inputs["runs"] = DescribeRuns(runs);
  return WriteOutputs(config.out_dir, "metrics " + config.command,
                      std::move(cfg), std::move(inputs), files);
}

absl::Status MetricsSimilarity(const MetricsConfig& config,
                               const std::vector<RunDirectory>& runs,
                               std::ostream& out) {
  ASSIGN_OR_RETURN(NodeTypeSet filter, ParseNodeFilter(config.node_filter));
  ASSIGN_OR_RETURN(const RunDirectory* baseline,
                   PickRun(runs, config.baseline, "permissive", "baseline"));
  std::vector<const RunDirectory*> all;
  for (const RunDirectory& run : runs) all.push_back(&run);
  RETURN_IF_ERROR(RequireSameTrace(all));
  const std::string compare_profile = config.compare_profile.empty()
                                          ? config.base_profile
                                          : config.compare_profile;

  const std::vector<InstanceScore> baseline_scores =
      FrameSimilarity(baseline->output, config.base_profile, baseline->output,
                      config.peer_profile, filter);
  std::map<std::string, std::string> files;
  std::string summary =
      CsvRow({"run", "policy", "instances", "defined", "curve_points",
              "mean_defined", "mean_defined_exact", "final_point"});
  for (const RunDirectory& run : runs) {
    // The baseline run is compared against its peer profile; every other run
    // against the baseline's base profile.
    const std::vector<InstanceScore> scores =
        &run == baseline
            ? baseline_scores
            : FrameSimilarity(baseline->output, config.base_profile, run.output,
                              compare_profile, filter);
    const std::vector<SimilarityPoint> curve =
        SimilarityCurve(scores, baseline_scores);
    std::string csv = CsvRow({"rank", "value", "value_exact"});
    for (const SimilarityPoint& point : curve) {
      csv += CsvRow({std::to_string(point.rank),
                     FormatDouble(ToDouble(point.value)),
                     RationalToString(point.value)});
    }
    const std::string name = RunName(run.path);
    files[name + ".csv"] = std::move(csv);
    size_t defined = 0;
    for (const InstanceScore& s : scores) defined += s.score.has_value();
    const std::optional<Rational> mean = MeanDefined(scores);
    summary += CsvRow(
        {name, run.policy, std::to_string(scores.size()),
         std::to_string(defined), std::to_string(curve.size()),
         mean ? FormatDouble(ToDouble(*mean)) : "undefined",
         mean ? RationalToString(*mean) : "undefined",
         curve.empty() ? "" : FormatDouble(ToDouble(curve.back().value))});
    out << name << " (" << run.policy
        << ") mean=" << (mean ? RationalToString(*mean) : "undefined")
        << " instances=" << scores.size() << " defined=" << defined
        << " dropped=" << scores.size() - curve.size() << "\n";
  }
  files["summary.csv"] = std::move(summary);
  Json cfg = BaseMetricsConfig(config);
  cfg["node_filter"] = filter.ToString();
  cfg["baseline"] = baseline->path.string();
  cfg["base_profile"] = config.base_profile;
  cfg["peer_profile"] = config.peer_profile;
  cfg["compare_profile"] = compare_profile;
  Json inputs;
  inputs["runs"] = DescribeRuns(runs);
  return WriteOutputs(config.out_dir, "metrics similarity", std::move(cfg),
                      std::move(inputs), files);
}

absl::Status MetricsOptimize(const MetricsConfig& config,
                             const std::vector<RunDirectory>& runs,
                             std::ostream& out) {
  ASSIGN_OR_RETURN(const RunDirectory* baseline,
                   PickRun(runs, config.baseline, "permissive", "baseline"));
  ASSIGN_OR_RETURN(const RunDirectory* contrast,
                   PickRun(runs, config.contrast, "blocking", "contrast"));
  RETURN_IF_ERROR(RequireSameTrace({baseline, contrast}));
  const std::string compare_profile = config.compare_profile.empty()
                                          ? config.base_profile
                                          : config.compare_profile;
  const std::vector<SampleInstance> sample =
      BuildSample(baseline->output, config.base_profile, baseline->output,
                  config.peer_profile, contrast->output, compare_profile);
  ASSIGN_OR_RETURN(OptimizationResult result,
                   OptimizeNodeTypes(sample, config.jobs));
  Json report;
  report["best_subset"] = Json::array();
  for (NodeType type : result.best_subset.types()) {
    report["best_subset"].push_back(std::string(NodeTypeName(type)));
  }
  report["separation"] = ToDouble(result.separation);
  report["separation_exact"] = RationalToString(result.separation);
  report["subsets_evaluated"] = result.subsets_evaluated;
  report["subsets_defined"] = result.subsets_defined;
  report["sample_instances"] = sample.size();
  out << "best=" << result.best_subset.ToString()
      << " separation=" << RationalToString(result.separation)
      << " evaluated=" << result.subsets_evaluated << "\n";

  Json cfg = BaseMetricsConfig(config);
  cfg["baseline"] = baseline->path.string();
  cfg["contrast"] = contrast->path.string();
  cfg["base_profile"] = config.base_profile;
  cfg["peer_profile"] = config.peer_profile;
  cfg["compare_profile"] = compare_profile;
  Json inputs;
  inputs["runs"] = DescribeRuns(runs);
  return WriteOutputs(config.out_dir, "metrics optimize", std::move(cfg),
                      std::move(inputs),
                      {{"optimization.json", report.dump(2) + "\n"}});
}

absl::Status MetricsCandidates(const MetricsConfig& config,
                               const std::vector<RunDirectory>& runs,
                               std::ostream& out) {
  ASSIGN_OR_RETURN(LoadedRules psl, LoadPsl(config.psl_path));
  std::map<std::string, std::string> files;
  for (const RunDirectory& run : runs) {
    const std::vector<FrameStat> stats =
        FrameStatsFromOutput(run.output, psl.rules);
    const CandidateSelection selection =
        SelectCandidates(stats, static_cast<size_t>(config.k), psl.rules);
    std::string csv =
        CsvRow({"rank", "frame_url", "harmonic_mean", "harmonic_mean_exact"});
    for (size_t i = 0; i < selection.frame_urls.size(); ++i) {
      csv += CsvRow({std::to_string(i + 1), selection.frame_urls[i],
                     FormatDouble(ToDouble(selection.scores[i])),
                     RationalToString(selection.scores[i])});
    }
    files[RunName(run.path) + ".csv"] = std::move(csv);
    out << RunName(run.path) << " candidates=" << selection.frame_urls.size();
    if (selection.short_of_k) out << " (short of k=" << config.k << ")";
    out << "\n";
  }
  Json cfg = BaseMetricsConfig(config);
  cfg["k"] = config.k;
  Json inputs;
  inputs["runs"] = DescribeRuns(runs);
  inputs["psl"] = psl.description;
  return WriteOutputs(config.out_dir, "metrics candidates", std::move(cfg),
                      std::move(inputs), files);
}

absl::Status MetricsKappa(const MetricsConfig& config, std::ostream& out) {
  ASSIGN_OR_RETURN(std::string text, ReadFile(config.grades_path));
  ASSIGN_OR_RETURN(std::vector<GradeCell> cells, ParseGradesCsv(text));
  ASSIGN_OR_RETURN(GradeStats stats, ComputeGradeStats(cells));
  Json report;
  report["cells"] = stats.cells;
  report["agreements"] = stats.agreements;
  report["agreement_pct"] = stats.agreement_pct;
  report["cohens_kappa"] = stats.cohens_kappa;
  report["cohens_kappa_exact"] = RationalToString(stats.kappa);
  std::string breakage = CsvRow({"profile", "broken", "n", "pct"});
  for (const auto& [profile, row] : stats.breakage) {
    breakage += CsvRow({profile, std::to_string(row.broken),
                        std::to_string(row.n), FormatDouble(row.pct)});
    out << profile << " broken=" << row.broken << "/" << row.n << " ("
        << FormatDouble(row.pct) << "%)\n";
  }
  out << "agreement=" << FormatDouble(stats.agreement_pct)
      << "% kappa=" << FormatDouble(stats.cohens_kappa) << "\n";
  Json cfg;
  cfg["grades"] = config.grades_path;
  Json inputs;
  inputs["grades"] = DescribeInput(config.grades_path, text);
  return WriteOutputs(config.out_dir, "metrics kappa", std::move(cfg),
                      std::move(inputs),
                      {{"grade_stats.json", report.dump(2) + "\n"},
                       {"breakage.csv", std::move(breakage)}});
}

}  // namespace

absl::Status Simulate(const SimulateConfig& config, std::ostream& out) {
  const std::optional<PolicyKind> policy = ParsePolicyName(config.policy);
  if (!policy) return InputError("unknown policy '" + config.policy + "'");
  ASSIGN_OR_RETURN(std::string trace_text, ReadFile(config.trace_path));
  ASSIGN_OR_RETURN(Trace trace, ParseTrace(trace_text));
  ASSIGN_OR_RETURN(LoadedRules psl, LoadPsl(config.psl_path));
  AdRuleSet ads;
  Json inputs;
  inputs["trace"] = DescribeInput(config.trace_path, trace_text);
  inputs["psl"] = psl.description;
  if (!config.filters_path.empty()) {
    ASSIGN_OR_RETURN(std::string filter_text, ReadFile(config.filters_path));
    ads = ParseAdRules(filter_text);
    inputs["filters"] = DescribeInput(config.filters_path, filter_text);
  }

  ReplayOptions options;
  options.tick_seconds = config.tick_seconds;
  options.partition.origin_keyed_third_parties = config.origin_keyed;
  options.jobs = config.jobs;
  ASSIGN_OR_RETURN(SimOutput output,
                   Replay(trace, *policy, psl.rules, ads, options));

  Json cfg;
  cfg["policy"] = std::string(PolicyName(*policy));
  cfg["trace"] = config.trace_path;
  cfg["psl"] = config.psl_path.empty() ? "builtin" : config.psl_path;
  cfg["filters"] = config.filters_path;
  cfg["tick_seconds"] = config.tick_seconds;
  cfg["origin_keyed_third_parties"] = config.origin_keyed;
  cfg["seed"] = config.seed;
  RETURN_IF_ERROR(WriteOutputs(
      config.out_dir, "simulate", std::move(cfg), std::move(inputs),
      {{std::string(kFlowsFileName), FlowsToCsv(output.flows)},
       {std::string(kFramesFileName), FramesToArchive(output.frames)}}));
  out << PolicyName(*policy) << ": " << output.flows.size() << " flows, "
      << output.frames.size() << " frames -> " << config.out_dir << "\n";
  return absl::OkStatus();
}

absl::Status GenTrace(const GenTraceConfig& config, std::ostream& out) {
  SyntheticTraceSpec spec;
  spec.n_sites = config.sites;
  spec.trackers = DefaultTrackers(config.trackers);
  for (TrackerSpec& tracker : spec.trackers) {
    tracker.embed_all = config.embed_probability >= 1.0;
    tracker.embed_probability = config.embed_probability;
  }
  spec.pages_per_site = config.pages_per_site;
  spec.crawl_iters = config.iters;
  spec.profiles = config.profiles;
  spec.seed = config.seed;
  spec.adaptive = config.adaptive;
  spec.include_ad_frame = config.ad_frame;
  ASSIGN_OR_RETURN(Trace trace, GenerateSyntheticTrace(spec));
  const std::string text = SerializeTrace(trace);
  const fs::path path(config.out_path);
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  RETURN_IF_ERROR(WriteFile(path, text));

  Json manifest;
  manifest["tool"] = "storagelab";
  manifest["version"] = STORAGELAB_VERSION;
  manifest["command"] = "gen-trace";
  Json& cfg = manifest["config"];
  cfg["sites"] = config.sites;
  cfg["trackers"] = config.trackers;
  cfg["pages_per_site"] = config.pages_per_site;
  cfg["iters"] = config.iters;
  cfg["profiles"] = config.profiles;
  cfg["seed"] = config.seed;
  cfg["embed_probability"] = config.embed_probability;
  cfg["adaptive"] = config.adaptive;
  cfg["ad_frame"] = config.ad_frame;
  manifest["outputs"][path.filename().string()] = Sha256Hex(text);
  RETURN_IF_ERROR(
      WriteFile(config.out_path + ".manifest.json", manifest.dump(2) + "\n"));
  out << trace.size() << " events -> " << config.out_path << "\n";
  return absl::OkStatus();
}

absl::Status Metrics(const MetricsConfig& config, std::ostream& out) {
  if (config.command == "kappa") return MetricsKappa(config, out);
  ASSIGN_OR_RETURN(std::vector<RunDirectory> runs, LoadRuns(config.runs));
  if (config.command == "picf") return MetricsPicf(config, runs, out);
  if (config.command == "cross-site" || config.command == "cross-time") {
    return MetricsTrackability(config, runs, out);
  }
  if (config.command == "similarity") {
    return MetricsSimilarity(config, runs, out);
  }
  if (config.command == "optimize") return MetricsOptimize(config, runs, out);
  if (config.command == "candidates") {
    return MetricsCandidates(config, runs, out);
  }
  return absl::InternalError("unhandled metrics command " + config.command);
}

}  // namespace storagelab::cli
