#include "cli.h"

#include <algorithm>

#include "CLI11.hpp"
#include "commands.h"
#include "storagelab/trace.h"

namespace storagelab::cli {
namespace {

const std::vector<std::string> kPolicyNames = {"permissive", "blocking",
                                               "site-keyed", "page-length"};

const CLI::Validator kNodeFilter(
    [](std::string& value) -> std::string {
      absl::StatusOr<NodeTypeSet> filter = ParseNodeFilter(value);
      if (filter.ok()) return "";
      return std::string(filter.status().message());
    },
    "all|optimal|TYPE[,TYPE...]", "NodeFilter");

int ExitCodeFor(const absl::Status& status, std::ostream& err) {
  if (status.ok()) return kExitOk;
  err << "storagelab: " << status.message() << "\n";
  switch (status.code()) {
    case absl::StatusCode::kInternal:
    case absl::StatusCode::kUnknown:
      return kExitInternal;
    default:
      return kExitInput;
  }
}

void AddSimulate(CLI::App& app, SimulateConfig& config) {
  CLI::App* cmd =
      app.add_subcommand("simulate", "Replay a trace under a policy");
  cmd->add_option("--policy", config.policy, "Storage policy")
      ->required()
      ->check(CLI::IsMember(kPolicyNames));
  cmd->add_option("--trace", config.trace_path, "JSONL trace")->required();
  cmd->add_option("--out", config.out_dir, "Output directory")->required();
  cmd->add_option("--psl", config.psl_path,
                  "public_suffix_list.dat (default: built-in subset)");
  cmd->add_option("--filters", config.filters_path, "Ad filter list");
  cmd->add_option("--tick", config.tick_seconds, "Virtual seconds per event")
      ->check(CLI::PositiveNumber);
  cmd->add_flag("--origin-keyed", config.origin_keyed,
                "Key third-party partitions by origin instead of site");
  cmd->add_option("--jobs", config.jobs, "Replay workers")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", config.seed, "Recorded in the manifest");
}

void AddGenTrace(CLI::App& app, GenTraceConfig& config) {
  CLI::App* cmd =
      app.add_subcommand("gen-trace", "Generate a synthetic crawl trace");
  cmd->add_option("--sites", config.sites)->check(CLI::PositiveNumber);
  cmd->add_option("--trackers", config.trackers)->check(CLI::NonNegativeNumber);
  cmd->add_option("--pages-per-site", config.pages_per_site)
      ->check(CLI::PositiveNumber);
  cmd->add_option("--iters", config.iters)->check(CLI::PositiveNumber);
  cmd->add_option("--profiles", config.profiles)->check(CLI::PositiveNumber);
  cmd->add_option("--seed", config.seed);
  cmd->add_option("--embed-prob", config.embed_probability,
                  "Per-page embedding probability of each tracker")
      ->check(CLI::Range(0.0, 1.0));
  cmd->add_flag("!--no-adaptive", config.adaptive,
                "Emit storage edges regardless of the cookie read-back");
  cmd->add_flag("--ad-frame", config.ad_frame, "Add an ad frame to each page");
  cmd->add_option("--out", config.out_path, "Trace file")->required();
}

void AddMetrics(CLI::App& app, MetricsConfig& config) {
  CLI::App* metrics = app.add_subcommand("metrics", "Compute metrics");
  metrics->require_subcommand(1);
  auto add = [&](const std::string& name, const std::string& description) {
    CLI::App* cmd = metrics->add_subcommand(name, description);
    cmd->callback([&config, name] { config.command = name; });
    cmd->add_option("--out", config.out_dir, "Output directory")->required();
    cmd->add_option("--seed", config.seed, "Recorded in the manifest");
    return cmd;
  };
  auto add_runs = [&](CLI::App* cmd) {
    cmd->add_option("--runs", config.runs, "Simulation run directories")
        ->required()
        ->check(CLI::ExistingDirectory);
    cmd->add_option("--threshold", config.threshold,
                    "Minimum PICF value length in characters")
        ->check(CLI::PositiveNumber);
  };
  auto add_profiles = [&](CLI::App* cmd) {
    cmd->add_option("--baseline", config.baseline,
                    "Baseline run (default: the permissive run)");
    cmd->add_option("--base-profile", config.base_profile);
    cmd->add_option("--peer-profile", config.peer_profile,
                    "Second baseline profile");
    cmd->add_option("--compare-profile", config.compare_profile,
                    "Profile of compared runs (default: base profile)");
  };

  add_runs(add("picf", "List potentially identifying cookie flows"));

  CLI::App* cross_site = add("cross-site", "Cross-site trackability curves");
  add_runs(cross_site);
  cross_site
      ->add_option("--min-sites", config.min_sites,
                   "Top sites a PICF must reach to count")
      ->check(CLI::PositiveNumber);

  CLI::App* cross_time = add("cross-time", "Cross-time trackability curves");
  add_runs(cross_time);
  cross_time->add_option("--mode", config.cross_time_mode)
      ->check(CLI::IsMember({"any", "iterations"}));

  CLI::App* similarity = add("similarity", "Behavioral similarity curves");
  add_runs(similarity);
  add_profiles(similarity);
  similarity->add_option("--node-filter", config.node_filter)
      ->check(kNodeFilter);

  CLI::App* optimize = add("optimize", "Search node-type subsets");
  add_runs(optimize);
  add_profiles(optimize);
  optimize->add_option("--contrast", config.contrast,
                       "Contrast run (default: the blocking run)");
  optimize->add_option("--jobs", config.jobs)->check(CLI::PositiveNumber);

  CLI::App* candidates = add("candidates", "Select frames for grading");
  add_runs(candidates);
  candidates->add_option("--k", config.k)->check(CLI::PositiveNumber);
  candidates->add_option("--psl", config.psl_path);

  CLI::App* kappa = add("kappa", "Grader agreement and breakage");
  kappa
      ->add_option("--grades", config.grades_path,
                   "CSV: url,profile,grader_a,grader_b")
      ->required()
      ->check(CLI::ExistingFile);
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err) {
  CLI::App app("Third-party storage policy laboratory", "storagelab");
  app.require_subcommand(1);
  SimulateConfig simulate;
  GenTraceConfig gen_trace;
  MetricsConfig metrics;
  AddSimulate(app, simulate);
  AddGenTrace(app, gen_trace);
  AddMetrics(app, metrics);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (app.got_subcommand("simulate")) {
      return ExitCodeFor(Simulate(simulate, out), err);
    }
    if (app.got_subcommand("gen-trace")) {
      return ExitCodeFor(GenTrace(gen_trace, out), err);
    }
    return ExitCodeFor(Metrics(metrics, out), err);
  } catch (const std::exception& e) {
    err << "storagelab: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace storagelab::cli
