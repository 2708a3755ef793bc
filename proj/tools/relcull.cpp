// relcull command-line tool: ingestion, curation pipeline, baselines,
// evaluation, and reports. Every run writes a manifest (resolved config +
// input hashes) to the output directory so it can be reproduced exactly.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "relcull/relcull.hpp"

namespace fs = std::filesystem;
using relcull::json;

namespace {

struct GlobalOpts {
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  std::string log_level = "info";
};

GlobalOpts g_opts;

void log_info(const std::string& msg) {
  if (g_opts.log_level != "quiet") std::fprintf(stderr, "[relcull] %s\n", msg.c_str());
}

std::string out_path(const std::string& name) {
  fs::create_directories(g_opts.out_dir);
  return (fs::path(g_opts.out_dir) / name).string();
}

void emit_manifest(const std::string& command, const json& config,
                   const std::vector<std::string>& inputs,
                   const std::vector<std::string>& outputs) {
  relcull::write_manifest(out_path("manifest.json"), command, config, inputs, outputs);
}

std::vector<int> parse_k_list(const std::string& spec) {
  std::vector<int> ks;
  std::size_t pos = 0;
  while (pos < spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string tok = spec.substr(pos, comma - pos);
    if (!tok.empty()) ks.push_back(std::stoi(tok));
    pos = comma + 1;
  }
  if (ks.empty()) throw relcull::DataError("--k: expected a comma-separated list of integers");
  return ks;
}

// Rule list grammar, comma separated:
//   above | left_of | contains          geometric, name defaults to the kind
//   KIND:NAME[:WEIGHT]                  geometric with explicit name
//   coin:NAME[:OUTCOMES[:WEIGHT]]       coin rule
std::vector<relcull::SynthRule> parse_rules(const std::string& spec) {
  std::vector<relcull::SynthRule> rules;
  std::size_t pos = 0;
  while (pos <= spec.size()) {
    std::size_t comma = spec.find(',', pos);
    if (comma == std::string::npos) comma = spec.size();
    const std::string entry = spec.substr(pos, comma - pos);
    pos = comma + 1;
    if (entry.empty()) continue;
    std::vector<std::string> parts;
    std::size_t p = 0;
    while (p <= entry.size()) {
      std::size_t colon = entry.find(':', p);
      if (colon == std::string::npos) colon = entry.size();
      parts.push_back(entry.substr(p, colon - p));
      p = colon + 1;
    }
    relcull::SynthRule r;
    const std::string& kind = parts[0];
    if (kind == "above") {
      r.kind = relcull::SynthKind::above;
    } else if (kind == "left_of") {
      r.kind = relcull::SynthKind::left_of;
    } else if (kind == "contains") {
      r.kind = relcull::SynthKind::contains;
    } else if (kind == "coin") {
      r.kind = relcull::SynthKind::coin;
    } else {
      throw relcull::DataError("--rules: unknown rule kind '" + kind + "'");
    }
    r.name = parts.size() > 1 && !parts[1].empty() ? parts[1] : kind;
    if (r.kind == relcull::SynthKind::coin) {
      if (parts.size() > 2) r.n_outcomes = std::stoi(parts[2]);
      if (parts.size() > 3) r.weight = std::stoi(parts[3]);
    } else {
      if (parts.size() > 2) r.weight = std::stoi(parts[2]);
    }
    rules.push_back(std::move(r));
  }
  if (rules.empty()) throw relcull::DataError("--rules: expected at least one rule");
  return rules;
}

void write_json_file(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw relcull::DataError("cannot open '" + path + "' for writing");
  out << j.dump(2) << "\n";
  if (!out) throw relcull::DataError("write failed for '" + path + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"relcull: curation toolkit for visually-relevant scene-graph relationships"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Config file (INI format, [subcommand] sections; flags win)");
  app.add_option("--out-dir", g_opts.out_dir, "Directory for outputs and the run manifest")
      ->capture_default_str();
  app.add_option("--seed", g_opts.seed, "Global seed (default for all per-stage seeds)")
      ->capture_default_str();
  app.add_option("--log-level", g_opts.log_level, "quiet|info|debug")->capture_default_str();

  // ---- ingest ----
  auto* ingest = app.add_subcommand("ingest", "Convert VG-style JSON to the canonical format");
  struct {
    std::string objects, relationships, attributes, image_meta;
  } ing;
  ingest->add_option("--objects", ing.objects, "objects.json")->required();
  ingest->add_option("--relationships", ing.relationships, "relationships.json")->required();
  ingest->add_option("--attributes", ing.attributes, "attributes.json (optional)");
  ingest->add_option("--image-meta", ing.image_meta, "image_data.json")->required();
  ingest->callback([&] {
    auto result = relcull::ingest_vg(ing.objects, ing.relationships, ing.attributes, ing.image_meta);
    const std::string ds_path = out_path("dataset.sgds.jsonl");
    relcull::save_dataset(result.dataset, ds_path);
    const auto& r = result.report;
    json report{{"images", r.images},
                {"instances", r.instances},
                {"triplets", r.triplets},
                {"images_without_meta", r.images_without_meta},
                {"boxes_clamped", r.boxes_clamped},
                {"boxes_degenerate_dropped", r.boxes_degenerate_dropped},
                {"instances_unnamed_dropped", r.instances_unnamed_dropped},
                {"duplicate_instance_ids_dropped", r.duplicate_instance_ids_dropped},
                {"triplets_dangling_dropped", r.triplets_dangling_dropped},
                {"triplets_self_loop_dropped", r.triplets_self_loop_dropped},
                {"triplets_unlabeled_dropped", r.triplets_unlabeled_dropped},
                {"attribute_refs_unmatched", r.attribute_refs_unmatched}};
    write_json_file(report, out_path("ingest_report.json"));
    log_info("ingested " + std::to_string(r.images) + " images, " + std::to_string(r.instances) +
             " instances, " + std::to_string(r.triplets) + " triplets");
    std::vector<std::string> inputs{ing.objects, ing.relationships, ing.image_meta};
    if (!ing.attributes.empty()) inputs.push_back(ing.attributes);
    emit_manifest("ingest",
                  json{{"objects", ing.objects},
                       {"relationships", ing.relationships},
                       {"attributes", ing.attributes},
                       {"image_meta", ing.image_meta}},
                  inputs,
                  {ds_path, relcull::vocab_sidecar_path(ds_path), out_path("ingest_report.json")});
  });

  // ---- stats ----
  auto* stats = app.add_subcommand("stats", "Dataset statistics (the five comparison columns)");
  struct {
    std::string dataset;
  } st;
  stats->add_option("--dataset", st.dataset, "canonical dataset")->required();
  stats->callback([&] {
    relcull::Dataset ds = relcull::load_dataset(st.dataset);
    relcull::StatsReport s = relcull::dataset_stats(ds);
    json j{{"object_categories", s.object_categories},
           {"instance_annotations", s.instance_annotations},
           {"predicate_categories", s.predicate_categories},
           {"unique_triplet_types", s.unique_triplet_types},
           {"images", s.images},
           {"duplicate_boxes", s.duplicate_boxes}};
    write_json_file(j, out_path("stats.json"));
    std::printf("%s\n", j.dump(2).c_str());
    emit_manifest("stats", json{{"dataset", st.dataset}}, {st.dataset},
                  {out_path("stats.json")});
  });

  // ---- cluster ----
  auto* cluster = app.add_subcommand("cluster", "Deduplicate predicate labels by clustering");
  struct {
    std::string dataset, embeddings, linkage = "average";
    double threshold = 0.35;
  } cl;
  cluster->add_option("--dataset", cl.dataset, "canonical dataset")->required();
  cluster->add_option("--embeddings", cl.embeddings, "word-vector file")->required();
  cluster->add_option("--cluster-threshold", cl.threshold, "cosine distance threshold")
      ->capture_default_str();
  cluster->add_option("--linkage", cl.linkage, "single|complete|average")->capture_default_str();
  cluster->callback([&] {
    relcull::Dataset ds = relcull::load_dataset(cl.dataset);
    relcull::EmbeddingTable table = relcull::load_embeddings(cl.embeddings);
    auto mapping = relcull::cluster_predicates(ds.predicate_vocab, table,
                                               relcull::linkage_from_string(cl.linkage),
                                               cl.threshold);
    write_json_file(relcull::cluster_mapping_to_json(mapping, ds.predicate_vocab),
                    out_path("cluster_mapping.json"));
    relcull::Dataset rvg = relcull::apply_mapping(ds, mapping);
    const std::string rvg_path = out_path("rvg.sgds.jsonl");
    relcull::save_dataset(rvg, rvg_path);
    log_info("clustered " + std::to_string(ds.predicate_vocab.size()) + " predicates into " +
             std::to_string(rvg.predicate_vocab.size()));
    emit_manifest("cluster",
                  json{{"dataset", cl.dataset},
                       {"embeddings", cl.embeddings},
                       {"cluster_threshold", cl.threshold},
                       {"linkage", cl.linkage}},
                  {cl.dataset, cl.embeddings},
                  {out_path("cluster_mapping.json"), rvg_path});
  });

  // ---- train-vdnet ----
  auto* train = app.add_subcommand("train-vdnet", "Train the visual discriminator");
  struct {
    std::string dataset, embeddings;
    relcull::VDNetConfig net;
    double split_fraction = 0.7;
  } tr;
  train->add_option("--dataset", tr.dataset)->required();
  train->add_option("--embeddings", tr.embeddings)->required();
  train->add_option("--epochs", tr.net.epochs)->capture_default_str();
  train->add_option("--lr", tr.net.learning_rate)->capture_default_str();
  train->add_option("--batch-size", tr.net.batch_size)->capture_default_str();
  train->add_option("--word-proj-dim", tr.net.word_proj_dim)->capture_default_str();
  train->add_option("--hidden-dim", tr.net.hidden_dim)->capture_default_str();
  train->add_option("--split-fraction", tr.split_fraction)->capture_default_str();
  train->callback([&] {
    tr.net.seed = g_opts.seed;
    relcull::Dataset ds = relcull::load_dataset(tr.dataset);
    relcull::EmbeddingTable table = relcull::load_embeddings(tr.embeddings);
    auto [train_ds, test_ds] = relcull::split_dataset(ds, tr.split_fraction, g_opts.seed);
    auto samples = relcull::build_pair_samples(train_ds, table);
    log_info("training on " + std::to_string(samples.size()) + " samples, " +
             std::to_string(ds.predicate_vocab.size()) + " predicates");
    auto params = relcull::init_vdnet(tr.net, table.dim, ds.predicate_vocab.size());
    auto result = relcull::train_vdnet(std::move(params), samples, tr.net.seed);
    relcull::save_checkpoint(result.params, out_path("vdnet_checkpoint.json"));
    relcull::write_loss_history(result.epoch_loss, out_path("loss_history.csv"));
    emit_manifest("train-vdnet",
                  json{{"dataset", tr.dataset},
                       {"embeddings", tr.embeddings},
                       {"epochs", tr.net.epochs},
                       {"lr", tr.net.learning_rate},
                       {"batch_size", tr.net.batch_size},
                       {"word_proj_dim", tr.net.word_proj_dim},
                       {"hidden_dim", tr.net.hidden_dim},
                       {"split_fraction", tr.split_fraction},
                       {"seed", g_opts.seed}},
                  {tr.dataset, tr.embeddings},
                  {out_path("vdnet_checkpoint.json"), out_path("loss_history.csv")});
  });

  // ---- eval-vdnet ----
  auto* evnet = app.add_subcommand("eval-vdnet", "Held-out accuracy per predicate");
  struct {
    std::string dataset, embeddings, checkpoint;
    double split_fraction = 0.7;
  } ev;
  evnet->add_option("--dataset", ev.dataset)->required();
  evnet->add_option("--embeddings", ev.embeddings)->required();
  evnet->add_option("--checkpoint", ev.checkpoint)->required();
  evnet->add_option("--split-fraction", ev.split_fraction,
                    "held-out = test half of this split (0 evaluates everything)")
      ->capture_default_str();
  evnet->callback([&] {
    relcull::Dataset ds = relcull::load_dataset(ev.dataset);
    relcull::EmbeddingTable table = relcull::load_embeddings(ev.embeddings);
    relcull::VDNetParams params = relcull::load_checkpoint(ev.checkpoint);
    auto [train_ds, test_ds] = relcull::split_dataset(ds, ev.split_fraction, g_opts.seed);
    auto samples = relcull::build_pair_samples(test_ds, table);
    relcull::AccuracyReport report = relcull::evaluate(params, samples);
    write_json_file(relcull::accuracy_report_json(report, ds.predicate_vocab),
                    out_path("accuracy_report.json"));
    std::printf("overall_accuracy %.6f over %zu predicates\n", report.overall_accuracy,
                report.per_predicate.size());
    emit_manifest("eval-vdnet",
                  json{{"dataset", ev.dataset},
                       {"embeddings", ev.embeddings},
                       {"checkpoint", ev.checkpoint},
                       {"split_fraction", ev.split_fraction},
                       {"seed", g_opts.seed}},
                  {ev.dataset, ev.embeddings, ev.checkpoint},
                  {out_path("accuracy_report.json")});
  });

  // ---- curate ----
  auto* cur = app.add_subcommand("curate", "Full pipeline: select, cluster, train, filter");
  struct {
    std::string dataset, embeddings, linkage = "average";
    relcull::CurateConfig cfg;
  } cu;
  cur->add_option("--dataset", cu.dataset)->required();
  cur->add_option("--embeddings", cu.embeddings)->required();
  cur->add_option("--alpha", cu.cfg.alpha, "held-out accuracy cutoff")->capture_default_str();
  cur->add_option("--n-objects", cu.cfg.n_objects)->capture_default_str();
  cur->add_option("--n-predicates", cu.cfg.n_predicates)->capture_default_str();
  cur->add_option("--cluster-threshold", cu.cfg.cluster_threshold)->capture_default_str();
  cur->add_option("--linkage", cu.linkage)->capture_default_str();
  cur->add_option("--split-fraction", cu.cfg.split_fraction)->capture_default_str();
  cur->add_option("--min-support", cu.cfg.min_support)->capture_default_str();
  cur->add_option("--epochs", cu.cfg.vdnet.epochs)->capture_default_str();
  cur->add_option("--lr", cu.cfg.vdnet.learning_rate)->capture_default_str();
  cur->add_option("--batch-size", cu.cfg.vdnet.batch_size)->capture_default_str();
  cur->add_option("--word-proj-dim", cu.cfg.vdnet.word_proj_dim)->capture_default_str();
  cur->add_option("--hidden-dim", cu.cfg.vdnet.hidden_dim)->capture_default_str();
  cur->callback([&] {
    cu.cfg.linkage = relcull::linkage_from_string(cu.linkage);
    cu.cfg.split_seed = g_opts.seed;
    cu.cfg.vdnet.seed = g_opts.seed;
    relcull::Dataset ds = relcull::load_dataset(cu.dataset);
    relcull::EmbeddingTable table = relcull::load_embeddings(cu.embeddings);
    relcull::CurationResult result = relcull::curate(ds, table, cu.cfg);
    const std::string vrr_path = out_path("vrr.sgds.jsonl");
    relcull::save_dataset(result.vrr, vrr_path);
    relcull::write_curation_report(result, out_path("curation_report.json"));
    auto curve = relcull::predictability_curve(result.report, relcull::default_accuracy_grid());
    relcull::write_predictability_curve(curve, out_path("predictability_curve.csv"));
    log_info("kept " + std::to_string(result.kept.size()) + " predicates, dropped " +
             std::to_string(result.dropped.size()));
    emit_manifest("curate",
                  json{{"dataset", cu.dataset},
                       {"embeddings", cu.embeddings},
                       {"alpha", cu.cfg.alpha},
                       {"n_objects", cu.cfg.n_objects},
                       {"n_predicates", cu.cfg.n_predicates},
                       {"cluster_threshold", cu.cfg.cluster_threshold},
                       {"linkage", cu.linkage},
                       {"split_fraction", cu.cfg.split_fraction},
                       {"min_support", cu.cfg.min_support},
                       {"epochs", cu.cfg.vdnet.epochs},
                       {"lr", cu.cfg.vdnet.learning_rate},
                       {"batch_size", cu.cfg.vdnet.batch_size},
                       {"word_proj_dim", cu.cfg.vdnet.word_proj_dim},
                       {"hidden_dim", cu.cfg.vdnet.hidden_dim},
                       {"seed", g_opts.seed}},
                  {cu.dataset, cu.embeddings},
                  {vrr_path, relcull::vocab_sidecar_path(vrr_path),
                   out_path("curation_report.json"), out_path("predictability_curve.csv")});
  });

  // ---- baseline ----
  auto* base = app.add_subcommand("baseline", "Fit and evaluate the frequency baseline");
  struct {
    std::string dataset, mode = "preddet", ks = "50,100";
    double smoothing_k = 0.0;
    double split_fraction = 0.7;
  } ba;
  base->add_option("--dataset", ba.dataset)->required();
  base->add_option("--mode", ba.mode, "preddet|predcls")->capture_default_str();
  base->add_option("--k", ba.ks, "comma-separated K values")->capture_default_str();
  base->add_option("--smoothing-k", ba.smoothing_k)->capture_default_str();
  base->add_option("--split-fraction", ba.split_fraction)->capture_default_str();
  base->callback([&] {
    relcull::Dataset ds = relcull::load_dataset(ba.dataset);
    auto [train_ds, test_ds] = relcull::split_dataset(ds, ba.split_fraction, g_opts.seed);
    relcull::FreqModel model = relcull::fit_freq_baseline(train_ds, ba.smoothing_k);
    relcull::Predictor pred = relcull::make_freq_predictor(std::move(model));
    const std::vector<int> ks = parse_k_list(ba.ks);
    relcull::RecallResult rec = ba.mode == "predcls"
                                    ? relcull::eval_predcls(pred, test_ds, ks)
                                    : relcull::eval_preddet(pred, test_ds, ks);
    write_json_file(relcull::recall_to_json(rec), out_path("baseline_recall.json"));
    std::printf("%s\n", relcull::recall_to_json(rec).dump(2).c_str());
    emit_manifest("baseline",
                  json{{"dataset", ba.dataset},
                       {"mode", ba.mode},
                       {"k", ba.ks},
                       {"smoothing_k", ba.smoothing_k},
                       {"split_fraction", ba.split_fraction},
                       {"seed", g_opts.seed}},
                  {ba.dataset}, {out_path("baseline_recall.json")});
  });

  // ---- eval ----
  auto* evalc = app.add_subcommand("eval", "Recall@K for externally produced predictions");
  struct {
    std::string dataset, predictions, mode = "preddet", ks = "50,100";
  } ex;
  evalc->add_option("--dataset", ex.dataset)->required();
  evalc->add_option("--predictions", ex.predictions, "JSONL of per-pair score vectors")
      ->required();
  evalc->add_option("--mode", ex.mode, "preddet|predcls")->capture_default_str();
  evalc->add_option("--k", ex.ks)->capture_default_str();
  evalc->callback([&] {
    relcull::Dataset ds = relcull::load_dataset(ex.dataset);
    relcull::Predictor pred =
        relcull::load_prediction_file(ex.predictions, ds.predicate_vocab.size());
    const std::vector<int> ks = parse_k_list(ex.ks);
    relcull::RecallResult rec = ex.mode == "predcls" ? relcull::eval_predcls(pred, ds, ks)
                                                     : relcull::eval_preddet(pred, ds, ks);
    write_json_file(relcull::recall_to_json(rec), out_path("recall.json"));
    std::printf("%s\n", relcull::recall_to_json(rec).dump(2).c_str());
    emit_manifest("eval",
                  json{{"dataset", ex.dataset},
                       {"predictions", ex.predictions},
                       {"mode", ex.mode},
                       {"k", ex.ks}},
                  {ex.dataset, ex.predictions}, {out_path("recall.json")});
  });

  // ---- report ----
  auto* rep = app.add_subcommand("report", "Distribution and predictability reports");
  struct {
    std::string which = "dist", dataset, report_path, subject, object;
  } rp;
  rep->add_option("--which", rp.which, "dist|cond|curve")->capture_default_str();
  rep->add_option("--dataset", rp.dataset, "needed for dist|cond");
  rep->add_option("--report", rp.report_path, "accuracy report JSON, needed for curve");
  rep->add_option("--subject", rp.subject, "subject class label (cond)");
  rep->add_option("--object", rp.object, "object class label (cond)");
  rep->callback([&] {
    if (rp.which == "dist") {
      relcull::Dataset ds = relcull::load_dataset(rp.dataset);
      auto hist = relcull::label_distribution(ds);
      relcull::write_distribution_csv(hist, ds.predicate_vocab, out_path("label_distribution.csv"));
      emit_manifest("report", json{{"which", rp.which}, {"dataset", rp.dataset}}, {rp.dataset},
                    {out_path("label_distribution.csv")});
    } else if (rp.which == "cond") {
      relcull::Dataset ds = relcull::load_dataset(rp.dataset);
      auto sid = ds.object_vocab.id_of(relcull::normalize_label(rp.subject));
      auto oid = ds.object_vocab.id_of(relcull::normalize_label(rp.object));
      if (!sid || !oid) {
        throw relcull::DataError("report: unknown class label '" + (sid ? rp.object : rp.subject) +
                                 "'");
      }
      auto hist = relcull::conditional_distribution(ds, *sid, *oid);
      relcull::write_distribution_csv(hist, ds.predicate_vocab,
                                      out_path("conditional_distribution.csv"));
      emit_manifest("report",
                    json{{"which", rp.which},
                         {"dataset", rp.dataset},
                         {"subject", rp.subject},
                         {"object", rp.object}},
                    {rp.dataset}, {out_path("conditional_distribution.csv")});
    } else if (rp.which == "curve") {
      auto [report, labels] = relcull::load_accuracy_report(rp.report_path);
      auto curve = relcull::predictability_curve(report, relcull::default_accuracy_grid());
      relcull::write_predictability_curve(curve, out_path("predictability_curve.csv"));
      emit_manifest("report", json{{"which", rp.which}, {"report", rp.report_path}},
                    {rp.report_path}, {out_path("predictability_curve.csv")});
    } else {
      throw relcull::DataError("report: --which must be dist, cond, or curve");
    }
  });

  // ---- synth ----
  auto* synth = app.add_subcommand("synth", "Generate a synthetic oracle dataset");
  struct {
    int n_images = 200;
    int instances_per_image = 8;
    int classes = 24;
    int embed_dim = 16;
    double image_size = 1000.0;
    std::string rules = "above,left_of,coin:u,coin:v";
  } sy;
  synth->add_option("--n-images", sy.n_images)->capture_default_str();
  synth->add_option("--instances-per-image", sy.instances_per_image)->capture_default_str();
  synth->add_option("--classes", sy.classes)->capture_default_str();
  synth->add_option("--embed-dim", sy.embed_dim)->capture_default_str();
  synth->add_option("--image-size", sy.image_size)->capture_default_str();
  synth->add_option("--rules", sy.rules, "rule list, e.g. above,left_of,coin:u,coin:v")
      ->capture_default_str();
  synth->callback([&] {
    relcull::SynthSpec spec;
    spec.n_images = sy.n_images;
    spec.instances_per_image = sy.instances_per_image;
    spec.class_vocab_size = sy.classes;
    spec.image_size = sy.image_size;
    spec.seed = g_opts.seed;
    spec.rules = parse_rules(sy.rules);
    relcull::Dataset ds = relcull::gen_synthetic(spec);
    const std::string ds_path = out_path("synthetic.sgds.jsonl");
    relcull::save_dataset(ds, ds_path);
    auto table = relcull::synthetic_embeddings(relcull::dataset_label_tokens(ds), sy.embed_dim,
                                               g_opts.seed + 1);
    const std::string emb_path = out_path("synthetic_embeddings.txt");
    relcull::write_embeddings(table, emb_path);
    log_info("generated " + std::to_string(ds.images.size()) + " images, " +
             std::to_string(ds.n_triplets()) + " triplets");
    emit_manifest("synth",
                  json{{"n_images", sy.n_images},
                       {"instances_per_image", sy.instances_per_image},
                       {"classes", sy.classes},
                       {"embed_dim", sy.embed_dim},
                       {"image_size", sy.image_size},
                       {"rules", sy.rules},
                       {"seed", g_opts.seed}},
                  {}, {ds_path, relcull::vocab_sidecar_path(ds_path), emb_path});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const relcull::Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 0;
}
