#include "hopadv/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <set>

#include "CLI11.hpp"
#include "hopadv/attack.hpp"
#include "hopadv/builtin_annotator.hpp"
#include "hopadv/corenlp_client.hpp"
#include "hopadv/errors.hpp"
#include "hopadv/evaluate.hpp"
#include "hopadv/fixture_store.hpp"
#include "hopadv/span_model.hpp"
#include "json.hpp"

namespace hopadv {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

void write_text(const std::string& path, const std::string& content) {
  if (auto parent = fs::path(path).parent_path(); !parent.empty())
    fs::create_directories(parent);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write file: " + path);
  out << content;
  if (!out) throw DataError("write failed: " + path);
}

struct CommonOptions {
  std::string resources_dir;
  std::string provider = "builtin";
  std::string fixtures_dir;
  std::string endpoint = "http://localhost:9000";
};

struct ProviderBundle {
  std::unique_ptr<SubstitutionResources> resources;
  std::unique_ptr<BuiltinAnnotator> builtin;
  std::unique_ptr<AnnotationProvider> provider;
};

ProviderBundle make_provider(const CommonOptions& opts, bool need_resources) {
  ProviderBundle bundle;
  Lexicons lexicons;
  if (!opts.resources_dir.empty()) {
    bundle.resources = std::make_unique<SubstitutionResources>(
        SubstitutionResources::load(opts.resources_dir));
    lexicons = bundle.resources->lexicons;
  } else if (need_resources) {
    throw ConfigError("a resource directory is required (--resources or HOPADV_RESOURCES)");
  }
  bundle.builtin = std::make_unique<BuiltinAnnotator>(lexicons);
  if (opts.provider == "builtin") {
    bundle.provider = std::make_unique<BuiltinAnnotator>(lexicons);
  } else if (opts.provider == "fixture") {
    if (opts.fixtures_dir.empty())
      throw ConfigError("--fixtures is required with the fixture provider");
    bundle.provider = std::make_unique<FixtureProvider>(FixtureStore::load(opts.fixtures_dir));
  } else if (opts.provider == "corenlp") {
    bundle.provider = std::make_unique<CoreNlpClient>(opts.endpoint);
  } else {
    throw ConfigError("unknown provider: " + opts.provider);
  }
  return bundle;
}

json config_json(const CLI::App* cmd) {
  json cfg = json::object();
  for (const CLI::Option* opt : cmd->get_options()) {
    std::string name = opt->get_lnames().empty() ? opt->get_name() : opt->get_lnames().front();
    if (name == "help" || name == "config") continue;
    if (opt->count() == 0 && opt->get_default_str().empty()) continue;
    cfg[name] = opt->count() ? opt->as<std::string>() : opt->get_default_str();
  }
  return cfg;
}

void write_run_manifest(const std::string& out_path, const std::string& command,
                        const CLI::App* cmd, const SubstitutionResources* resources,
                        const json& stats) {
  json manifest;
  manifest["command"] = command;
  manifest["config"] = config_json(cmd);
  if (resources) {
    json hashes = json::object();
    for (const auto& [path, hash] : resources->file_hashes) hashes[path] = hash;
    manifest["resource_hashes"] = std::move(hashes);
  }
  manifest["stats"] = stats;
  write_text(out_path, manifest.dump(2) + "\n");
}

json stats_json(const AttackStats& stats) {
  json by_reason = json::object();
  for (const auto& [reason, count] : stats.by_reason) by_reason[reason] = count;
  json by_type = json::object();
  for (const auto& [type, count] : stats.by_type) by_type[type] = count;
  return json{{"total", stats.total},
              {"attacked", stats.attacked},
              {"skipped", stats.skipped},
              {"by_reason", std::move(by_reason)},
              {"by_type", std::move(by_type)}};
}

// ---- subcommand bodies ----

int cmd_annotate(const CommonOptions& common, const std::string& in_path,
                 const std::string& out_dir, CLI::App* cmd) {
  ProviderBundle bundle = make_provider(common, false);
  std::vector<Example> examples = load_dataset(in_path);

  FixtureStore store;
  size_t texts = 0;
  std::set<std::string> seen;
  auto add = [&](const std::string& textstr) {
    if (textstr.empty() || !seen.insert(sha256_hex(textstr)).second) return;
    store.put(bundle.provider->annotate(textstr));
    ++texts;
  };
  for (const auto& ex : examples) {
    add(ex.question);
    for (const auto& p : ex.context)
      for (const auto& s : p.sentences) add(s);
  }
  store.save(out_dir);
  write_run_manifest(out_dir + "/run.json", "annotate", cmd, bundle.resources.get(),
                     json{{"examples", examples.size()}, {"texts", texts}});
  std::cout << "annotated " << texts << " texts from " << examples.size() << " examples into "
            << out_dir << "\n";
  return 0;
}

struct AttackArgs {
  std::string in_path, out_path, train_path, manifest_path;
  std::string span_model_path;
  std::string hop = "auto";
  std::string placement = "random";
  std::string target = "relations";
  uint64_t seed = 0;
  double threshold = 0.5;
  int workers = 1;
  bool no_span_fallback = false;
  std::string dump_graphs, dump_chains;
};

int cmd_attack(const CommonOptions& common, const AttackArgs& args, CLI::App* cmd) {
  ProviderBundle bundle = make_provider(common, true);

  AttackConfig config;
  if (args.hop != "auto") {
    auto hop = hop_choice_from_name(args.hop);
    if (!hop) throw ConfigError("unknown hop strategy: " + args.hop);
    config.hop = *hop;
  }
  auto placement = placement_from_name(args.placement);
  if (!placement) throw ConfigError("unknown placement: " + args.placement);
  config.placement = *placement;
  if (args.target == "relations")
    config.target = TargetWords::Relations;
  else if (args.target == "entities")
    config.target = TargetWords::Entities;
  else
    throw ConfigError("unknown target: " + args.target);
  config.seed = args.seed;
  config.relevance_threshold = args.threshold;
  config.allow_span_fallback = !args.no_span_fallback;
  config.debug_dumps = !args.dump_graphs.empty() || !args.dump_chains.empty();

  std::vector<Example> examples = load_dataset(args.in_path);
  std::vector<Example> training;
  if (!args.train_path.empty()) training = load_dataset(args.train_path);

  FakeAnswerPool pool = build_fake_answer_pool(training, *bundle.builtin);
  LexicalOverlapScorer scorer = LexicalOverlapScorer::fit(examples);
  ConversionRuleSet rules =
      ConversionRuleSet::load(common.resources_dir + "/conversion_rules.json");

  SpanModel span_model;
  AttackContext ctx;
  if (!args.span_model_path.empty()) {
    span_model = SpanModel::load(args.span_model_path);
    ctx.span_model = &span_model;
  }
  ctx.provider = bundle.provider.get();
  ctx.resources = bundle.resources.get();
  ctx.pool = &pool;
  ctx.typer = bundle.builtin.get();
  ctx.rules = &rules;
  ctx.scorer = &scorer;

  auto [attacked, records] = attack_dataset(examples, config, ctx, args.workers);
  write_dataset(attacked, args.out_path);
  std::string manifest_path =
      args.manifest_path.empty() ? args.out_path + ".manifest.jsonl" : args.manifest_path;
  write_text(manifest_path, manifest_to_jsonl(records));

  if (!args.dump_graphs.empty()) {
    std::string dump;
    for (const auto& rec : records) {
      json line{{"id", rec.id}};
      line["graph"] =
          rec.outcome.graph_json.empty() ? json() : json::parse(rec.outcome.graph_json);
      dump += line.dump() + "\n";
    }
    write_text(args.dump_graphs, dump);
  }
  if (!args.dump_chains.empty()) {
    std::string dump;
    for (const auto& rec : records) {
      json line{{"id", rec.id}};
      line["chain"] =
          rec.outcome.chain_json.empty() ? json() : json::parse(rec.outcome.chain_json);
      dump += line.dump() + "\n";
    }
    write_text(args.dump_chains, dump);
  }

  AttackStats stats = summarize(records);
  write_run_manifest(args.out_path + ".run.json", "attack", cmd, bundle.resources.get(),
                     stats_json(stats));
  std::cout << "attacked " << stats.attacked << "/" << stats.total << " examples ("
            << stats.skipped << " skipped) -> " << args.out_path << "\n";
  return 0;
}

int cmd_evaluate(const std::string& pred_path, const std::string& gold_path,
                 const std::string& out_path, CLI::App* cmd) {
  PredictionFile pred = PredictionFile::load(pred_path);
  std::vector<Example> gold = load_dataset(gold_path);
  MetricBlock block = evaluate_predictions(pred, gold);
  std::string payload = metrics_to_json(block) + "\n";
  if (!out_path.empty()) {
    write_text(out_path, payload);
    write_run_manifest(out_path + ".run.json", "evaluate", cmd, nullptr,
                       json{{"examples", gold.size()}});
  }
  std::cout << payload;
  return 0;
}

struct ReportArgs {
  std::string pred_ori, pred_adv, gold_ori, gold_adv, manifest, out_path, table_path;
};

int cmd_report(const ReportArgs& args, CLI::App* cmd) {
  PredictionFile pred_ori = PredictionFile::load(args.pred_ori);
  PredictionFile pred_adv = PredictionFile::load(args.pred_adv);
  std::vector<Example> gold_ori = load_dataset(args.gold_ori);
  std::vector<Example> gold_adv = load_dataset(args.gold_adv);
  std::ifstream manifest_in(args.manifest, std::ios::binary);
  if (!manifest_in) throw DataError("cannot open manifest: " + args.manifest);
  std::ostringstream buf;
  buf << manifest_in.rdbuf();
  std::vector<AttackRecord> records = manifest_from_jsonl(buf.str());

  MetricReport report = robustness_report(pred_ori, pred_adv, gold_ori, gold_adv, records);
  std::string table = report_to_table(report);
  if (!args.out_path.empty()) {
    write_text(args.out_path, report_to_json(report) + "\n");
    write_run_manifest(args.out_path + ".run.json", "report", cmd, nullptr,
                       json{{"examples", gold_ori.size()}});
  }
  if (!args.table_path.empty()) write_text(args.table_path, table);
  std::cout << table;
  return 0;
}

struct MixArgs {
  std::string original, adversarial, out_path;
  double fraction = 0.25;
  uint64_t seed = 0;
  bool exclude_original = false;
};

int cmd_mix(const MixArgs& args, CLI::App* cmd) {
  std::vector<Example> original = load_dataset(args.original);
  std::vector<Example> adversarial = load_dataset(args.adversarial);
  std::vector<Example> mixed = mix_retraining_set(original, adversarial, args.fraction, args.seed,
                                                  !args.exclude_original);
  write_dataset(mixed, args.out_path);
  write_run_manifest(args.out_path + ".run.json", "mix", cmd, nullptr,
                     json{{"original", original.size()},
                          {"adversarial", adversarial.size()},
                          {"mixed", mixed.size()}});
  std::cout << "mixed " << mixed.size() << " examples -> " << args.out_path << "\n";
  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  CLI::App app{"hop-targeted adversarial attacks for multi-hop QA datasets"};
  app.require_subcommand(1);
  app.set_config("--config");

  CommonOptions common;

  // annotate
  auto* annotate_cmd = app.add_subcommand("annotate", "annotate a dataset into fixture shards");
  std::string ann_in, ann_out;
  annotate_cmd->add_option("--in", ann_in, "input dataset (HotpotQA JSON)")->required();
  annotate_cmd->add_option("--out", ann_out, "output fixture directory")->required();
  annotate_cmd->add_option("--provider", common.provider, "builtin|corenlp|fixture");
  annotate_cmd->add_option("--endpoint", common.endpoint, "annotation server URL");
  annotate_cmd->add_option("--resources", common.resources_dir, "resource directory")
      ->envname("HOPADV_RESOURCES");
  annotate_cmd->add_option("--fixtures", common.fixtures_dir, "fixture directory to replay");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "build the adversarial dataset");
  AttackArgs atk;
  attack_cmd->add_option("--in", atk.in_path, "input dataset")->required();
  attack_cmd->add_option("--out", atk.out_path, "output adversarial dataset")->required();
  attack_cmd->add_option("--train", atk.train_path, "training dataset for the fake answer pool");
  attack_cmd->add_option("--manifest", atk.manifest_path, "attack manifest path (JSONL)");
  attack_cmd->add_option("--hop", atk.hop, "auto|first|second|both|random");
  attack_cmd->add_option("--placement", atk.placement, "random|first|last");
  attack_cmd->add_option("--target", atk.target, "relations|entities");
  attack_cmd->add_option("--seed", atk.seed, "RNG seed")->required();
  attack_cmd->add_option("--threshold", atk.threshold, "paragraph relevance threshold");
  attack_cmd->add_option("--workers", atk.workers, "worker threads");
  attack_cmd->add_option("--span-model", atk.span_model_path, "span model artifact");
  attack_cmd->add_flag("--no-span-fallback", atk.no_span_fallback,
                       "fail instead of using the rule fallback");
  attack_cmd->add_option("--dump-graphs", atk.dump_graphs, "entity graph dump (JSONL)");
  attack_cmd->add_option("--dump-chains", atk.dump_chains, "reasoning chain dump (JSONL)");
  attack_cmd->add_option("--provider", common.provider, "builtin|corenlp|fixture");
  attack_cmd->add_option("--endpoint", common.endpoint, "annotation server URL");
  attack_cmd->add_option("--resources", common.resources_dir, "resource directory")
      ->envname("HOPADV_RESOURCES");
  attack_cmd->add_option("--fixtures", common.fixtures_dir, "fixture directory to replay");

  // evaluate
  auto* eval_cmd = app.add_subcommand("evaluate", "score a prediction file");
  std::string eval_pred, eval_gold, eval_out;
  eval_cmd->add_option("--pred", eval_pred, "prediction file")->required();
  eval_cmd->add_option("--gold", eval_gold, "gold dataset")->required();
  eval_cmd->add_option("--out", eval_out, "metrics JSON output");

  // report
  auto* report_cmd = app.add_subcommand("report", "original-vs-adversarial robustness report");
  ReportArgs rep;
  report_cmd->add_option("--pred-ori", rep.pred_ori, "predictions on the original set")
      ->required();
  report_cmd->add_option("--pred-adv", rep.pred_adv, "predictions on the adversarial set")
      ->required();
  report_cmd->add_option("--gold-ori", rep.gold_ori, "original dataset")->required();
  report_cmd->add_option("--gold-adv", rep.gold_adv, "adversarial dataset")->required();
  report_cmd->add_option("--manifest", rep.manifest, "attack manifest (JSONL)")->required();
  report_cmd->add_option("--out", rep.out_path, "report JSON output");
  report_cmd->add_option("--table", rep.table_path, "aligned text table output");

  // mix
  auto* mix_cmd = app.add_subcommand("mix", "mix original and adversarial training sets");
  MixArgs mix;
  mix_cmd->add_option("--original", mix.original, "original dataset")->required();
  mix_cmd->add_option("--adversarial", mix.adversarial, "adversarial dataset")->required();
  mix_cmd->add_option("--fraction", mix.fraction, "sampled fraction of the adversarial set");
  mix_cmd->add_option("--seed", mix.seed, "RNG seed")->required();
  mix_cmd->add_option("--out", mix.out_path, "output dataset")->required();
  mix_cmd->add_flag("--exclude-original", mix.exclude_original,
                    "emit only the sampled adversarial examples");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      std::cout << app.help() << "\n";
      return 0;
    }
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (annotate_cmd->parsed()) return cmd_annotate(common, ann_in, ann_out, annotate_cmd);
    if (attack_cmd->parsed()) return cmd_attack(common, atk, attack_cmd);
    if (eval_cmd->parsed()) return cmd_evaluate(eval_pred, eval_gold, eval_out, eval_cmd);
    if (report_cmd->parsed()) return cmd_report(rep, report_cmd);
    if (mix_cmd->parsed()) return cmd_mix(mix, mix_cmd);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace hopadv
