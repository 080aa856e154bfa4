// Copyright 2026 The Scriptor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// scriptor: command-line driver for preprocessing, bootstrap matching,
// annotation cycles, the review server and evaluation reports.

#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "scriptor/core/annotation_store.hpp"
#include "scriptor/core/error.hpp"
#include "scriptor/core/scribe_aliases.hpp"
#include "scriptor/dataset/detections_file.hpp"
#include "scriptor/dataset/manifest.hpp"
#include "scriptor/detect/gateway.hpp"
#include "scriptor/eval/metrics.hpp"
#include "scriptor/eval/report.hpp"
#include "scriptor/loop/orchestrator.hpp"
#include "scriptor/loop/review_server.hpp"
#include "scriptor/match/template_matcher.hpp"
#include "scriptor/preprocess/manuscript_config.hpp"
#include "scriptor/synth/synthetic.hpp"

namespace fs = std::filesystem;
using namespace scriptor;

namespace {

struct Workspace {
  fs::path root = "workspace";

  fs::path manuscript_dir(const std::string& m) const { return root / m; }
  fs::path log(const std::string& m) const { return manuscript_dir(m) / "annotations.ndjson"; }
  fs::path columns(const std::string& m) const { return manuscript_dir(m) / "columns"; }
  fs::path templates() const { return root / "templates"; }
  fs::path aliases() const { return root / "scribes.json"; }

  std::unique_ptr<AnnotationStore> open(const std::string& m) const {
    ManuscriptId id(m);  // validates the name
    fs::create_directories(manuscript_dir(m));
    return AnnotationStore::open(log(m));
  }
};

ScribeId resolve_target(const Workspace& ws, const std::string& target, const std::string& manuscript) {
  if (target.find(':') == std::string::npos) return ScribeId(target);
  auto ref = ScribeRef::parse(target);
  ScribeAliasTable table;
  if (fs::exists(ws.aliases())) {
    std::ifstream in(ws.aliases());
    table = ScribeAliasTable::from_json(nlohmann::json::parse(in));
  }
  auto id = table.resolve(ref, ManuscriptId(manuscript));
  if (!id) throw Error(ErrorCode::InvalidConfig, "no alias of " + target + " in " + manuscript);
  return *id;
}

BBox parse_box_arg(const std::string& text) {
  BBox b;
  if (std::sscanf(text.c_str(), "%d,%d,%d,%d", &b.x, &b.y, &b.w, &b.h) != 4)
    throw Error(ErrorCode::InvalidArgument, "box must be x,y,w,h");
  return b;
}

void print_json(const nlohmann::ordered_json& j) { std::cout << j.dump(2) << "\n"; }

loop::ReviewServer* g_server = nullptr;
void on_signal(int) {
  if (g_server) g_server->stop();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"scriptor: target-letter extraction and scribe attribution pipeline"};
  app.require_subcommand(1);
  Workspace ws;
  app.add_option("-w,--workspace", ws.root, "Workspace directory")->capture_default_str();
  unsigned threads = 0;
  app.add_option("-j,--threads", threads, "Worker threads (0 = all cores)");

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic two-hand manuscript");
  fs::path synth_out = "synthetic";
  synth::SynthOptions synth_opts;
  std::string synth_name = "synth";
  synth_cmd->add_option("--out", synth_out, "Output directory")->capture_default_str();
  synth_cmd->add_option("--manuscript", synth_name)->capture_default_str();
  synth_cmd->add_option("--pages", synth_opts.pages)->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.seed)->capture_default_str();

  // preprocess
  auto* pre_cmd = app.add_subcommand("preprocess", "Crop, clean and binarize page scans");
  fs::path config_path;
  pre_cmd->add_option("--config", config_path, "Manuscript configuration")->required();

  // bootstrap
  auto* boot_cmd = app.add_subcommand("bootstrap", "Template-match the registered columns");
  std::string manuscript;
  std::string scribe;
  fs::path template_dir;
  double tm_tau = 0.55;
  double tm_nms = 0.3;
  bool accept_all = false;
  boot_cmd->add_option("--manuscript", manuscript)->required();
  boot_cmd->add_option("--scribe", scribe, "Only columns written by this hand");
  boot_cmd->add_option("--templates", template_dir, "Template directory (default: workspace/templates)");
  boot_cmd->add_option("--tau", tm_tau, "NCC acceptance threshold")->capture_default_str();
  boot_cmd->add_option("--nms", tm_nms, "NMS IoU threshold")->capture_default_str();
  boot_cmd->add_flag("--accept-all", accept_all, "Accept every match without review");

  // cycle
  auto* cycle_cmd = app.add_subcommand("cycle", "Annotation cycle control");
  cycle_cmd->require_subcommand(1);
  auto* cstart = cycle_cmd->add_subcommand("start", "Build and export the next cycle's dataset");
  fs::path spec_path;
  int standard_cycle = 0;
  cstart->add_option("--manuscript", manuscript)->required();
  cstart->add_option("--spec", spec_path, "Cycle spec JSON");
  cstart->add_option("--standard", standard_cycle, "Use cycle N of the three-cycle schedule");
  cstart->add_option("--scribe", scribe, "Target hand for --standard");
  auto* cstatus = cycle_cmd->add_subcommand("status", "Show the current cycle");
  cstatus->add_option("--manuscript", manuscript)->required();
  auto* cawait = cycle_cmd->add_subcommand("await", "Mark the dataset as handed to the detector");
  cawait->add_option("--manuscript", manuscript)->required();
  auto* cmerge = cycle_cmd->add_subcommand("merge", "Close the reviewed cycle");
  cmerge->add_option("--manuscript", manuscript)->required();

  // detections
  auto* det_cmd = app.add_subcommand("detections", "Detection file intake");
  det_cmd->require_subcommand(1);
  fs::path det_file;
  int ingest_cycle = 0;
  auto* dsubmit = det_cmd->add_subcommand("submit", "Ingest detections for the current cycle");
  dsubmit->add_option("--manuscript", manuscript)->required();
  dsubmit->add_option("--file", det_file)->required()->check(CLI::ExistingFile);
  auto* dingest = det_cmd->add_subcommand("ingest", "Ingest detections outside the cycle flow");
  dingest->add_option("--manuscript", manuscript)->required();
  dingest->add_option("--file", det_file)->required()->check(CLI::ExistingFile);
  dingest->add_option("--cycle", ingest_cycle)->capture_default_str();

  // infer
  auto* infer_cmd = app.add_subcommand("infer", "Run an ONNX detector over columns");
  fs::path model_path;
  fs::path infer_out;
  detect::InferOptions infer_opts;
  bool all_columns = false;
  infer_cmd->add_option("--manuscript", manuscript)->required();
  infer_cmd->add_option("--model", model_path)->required()->check(CLI::ExistingFile);
  infer_cmd->add_option("--out", infer_out, "Detection file to write")->required();
  infer_cmd->add_option("--conf", infer_opts.conf_floor)->capture_default_str();
  infer_cmd->add_option("--nms", infer_opts.nms_iou)->capture_default_str();
  infer_cmd->add_flag("--all-columns", all_columns, "Every column, not just the inference set");

  // decide
  auto* decide_cmd = app.add_subcommand("decide", "Record one review decision");
  std::uint64_t box_id = 0;
  std::string action;
  std::string box_text;
  int cls = -1;
  decide_cmd->add_option("--manuscript", manuscript)->required();
  decide_cmd->add_option("--id", box_id)->required();
  decide_cmd->add_option("--action", action)->required()->check(CLI::IsMember({"accept", "reject", "adjust"}));
  decide_cmd->add_option("--box", box_text, "x,y,w,h for adjust");
  decide_cmd->add_option("--class", cls)->check(CLI::Range(0, 1));

  // serve
  auto* serve_cmd = app.add_subcommand("serve", "Serve the review API");
  loop::ServerOptions server_opts;
  serve_cmd->add_option("--manuscript", manuscript)->required();
  serve_cmd->add_option("--port", server_opts.port)->capture_default_str();
  serve_cmd->add_option("--host", server_opts.host)->capture_default_str();
  serve_cmd->add_option("--static", server_opts.static_dir, "Review UI assets");

  // eval
  auto* eval_cmd = app.add_subcommand("eval", "Threshold sweeps");
  eval_cmd->require_subcommand(1);
  std::string target;
  std::string taus = "0.70:0.85:0.01";
  fs::path out_path;
  fs::path svg_path;
  fs::path in_path;
  auto* esweep = eval_cmd->add_subcommand("sweep", "Accuracy and F-score per confidence threshold");
  esweep->add_option("--manuscript", manuscript)->required();
  esweep->add_option("--target", target, "Target hand, a letter or manuscript:letter")->required();
  esweep->add_option("--taus", taus)->capture_default_str();
  esweep->add_option("--out", out_path, "CSV output (default: stdout)");
  esweep->add_option("--svg", svg_path, "Also render the curve");
  auto* eplot = eval_cmd->add_subcommand("plot", "Render a sweep CSV as SVG");
  eplot->add_option("--in", in_path)->required()->check(CLI::ExistingFile);
  eplot->add_option("--out", svg_path)->required();

  // stats
  auto* stats_cmd = app.add_subcommand("stats", "Per-scribe extraction statistics");
  stats_cmd->add_option("--manuscript", manuscript)->required();
  stats_cmd->add_option("--detections", det_file, "Detection file (default: stored detections)");
  stats_cmd->add_option("--out", out_path, "CSV output (default: stdout)");

  // attribute
  auto* attr_cmd = app.add_subcommand("attribute", "Page-level scribe attribution");
  std::string rule_kind = "majority_vote";
  eval::AttributionRule rule;
  attr_cmd->add_option("--manuscript", manuscript)->required();
  attr_cmd->add_option("--target", target)->required();
  attr_cmd->add_option("--rule", rule_kind)
      ->check(CLI::IsMember({"any_above", "fraction_above", "majority_vote"}))
      ->capture_default_str();
  attr_cmd->add_option("--tau", rule.tau)->capture_default_str();
  attr_cmd->add_option("--fraction", rule.fraction)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth_cmd) {
      synth_opts.manuscript = ManuscriptId(synth_name);
      auto m = synth::generate(synth_opts, synth_out);
      std::cout << "wrote " << m.config.pages.size() << " pages, config " << m.config_path.string()
                << ", templates " << m.template_dir.string() << "\n";
      return 0;
    }

    if (*pre_cmd) {
      auto cfg = preprocess::ManuscriptConfig::load(config_path);
      auto store = ws.open(cfg.manuscript.str());
      auto s = preprocess::preprocess_manuscript(cfg, *store, ws.columns(cfg.manuscript.str()), threads);
      std::cout << "pages " << s.pages << ", skipped " << s.skipped << ", columns " << s.columns << "\n";
      return 0;
    }

    if (*boot_cmd) {
      auto store = ws.open(manuscript);
      auto templates = match::load_templates(template_dir.empty() ? ws.templates() : template_dir);
      loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
      int columns = 0;
      int matches = 0;
      for (const auto& info : store->columns(ManuscriptId(manuscript))) {
        if (!scribe.empty() && (!info.scribe || info.scribe->str() != scribe)) continue;
        AnnotationFilter f;
        f.column = info.key;
        f.origin = Origin::template_match;
        if (!store->query(f).empty()) continue;  // already matched
        auto col = preprocess::load_column(info);
        for (const auto& a : match::bootstrap_annotate(col, templates, tm_tau, tm_nms, threads)) {
          auto id = store->put_annotation(a);
          if (accept_all) store->decide(id, Decision::accept());
          ++matches;
        }
        ++columns;
      }
      if (store->cycle_records().empty()) orch.mark_bootstrapped();
      std::cout << "matched " << columns << " columns, " << matches << " candidates\n";
      return 0;
    }

    if (*cycle_cmd) {
      auto store = ws.open(manuscript);
      loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
      if (*cstart) {
        dataset::CycleSpec spec;
        if (!spec_path.empty()) {
          std::ifstream in(spec_path);
          if (!in) throw Error(ErrorCode::IoError, "cannot read " + spec_path.string());
          spec = dataset::CycleSpec::from_json(nlohmann::json::parse(in));
        } else if (standard_cycle >= 1 && standard_cycle <= 3 && !scribe.empty()) {
          spec = dataset::standard_schedule(ManuscriptId(manuscript), ScribeId(scribe))[standard_cycle - 1];
        } else {
          throw Error(ErrorCode::InvalidArgument, "give --spec, or --standard 1..3 with --scribe");
        }
        auto s = orch.start_cycle(spec);
        std::cout << "cycle " << s.cycle << " exported to " << orch.dataset_dir(s.cycle).string() << ": "
                  << s.manifest.training_columns().size() << " training, "
                  << s.manifest.inference_columns.size() << " inference columns\n";
      } else if (*cstatus) {
        auto j = orch.current().to_json();
        j["pending_count"] = orch.pending_count();
        j.erase("manifest");
        print_json(j);
      } else if (*cawait) {
        auto s = orch.mark_awaiting();
        std::cout << "cycle " << s.cycle << " " << loop::to_string(s.phase) << "\n";
      } else if (*cmerge) {
        auto s = orch.merge_cycle();
        std::cout << "cycle " << s.cycle << " " << loop::to_string(s.phase) << "\n";
      }
      return 0;
    }

    if (*det_cmd) {
      auto store = ws.open(manuscript);
      if (*dsubmit) {
        loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
        auto s = orch.submit_detections(det_file);
        std::cout << "cycle " << s.cycle << " in review, " << s.pending_count << " pending\n";
      } else {
        auto recs = detect::ingest(*store, detect::DetectorHandle::external_file(det_file), ingest_cycle);
        std::cout << "ingested " << recs.size() << " detections\n";
      }
      return 0;
    }

    if (*infer_cmd) {
      auto store = ws.open(manuscript);
      loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
      auto state = orch.current();
      detect::EmbeddedDetector detector(detect::DetectorHandle::embedded_model(model_path));
      std::vector<DetectionRecord> all;
      for (const auto& info : store->columns(ManuscriptId(manuscript))) {
        if (!all_columns && !state.manifest.is_inference(info.key.str())) continue;
        auto found = detector.infer(preprocess::load_column(info), infer_opts);
        all.insert(all.end(), found.begin(), found.end());
      }
      dataset::save_detections(infer_out, all);
      std::cout << "wrote " << all.size() << " detections to " << infer_out.string() << "\n";
      return 0;
    }

    if (*decide_cmd) {
      auto store = ws.open(manuscript);
      loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
      Decision d;
      d.action = decision_action_from_string(action);
      if (!box_text.empty()) d.box = parse_box_arg(box_text);
      if (cls >= 0) d.cls = class_from_int(cls);
      auto a = orch.decide(AnnotationId{box_id}, d);
      std::cout << a.id.value << " " << to_string(a.status) << "\n";
      return 0;
    }

    if (*serve_cmd) {
      auto store = ws.open(manuscript);
      loop::Orchestrator orch(*store, ws.manuscript_dir(manuscript));
      loop::ReviewServer server(orch, server_opts);
      int port = server.bind();
      g_server = &server;
      std::signal(SIGINT, on_signal);
      std::signal(SIGTERM, on_signal);
      std::cout << "serving " << manuscript << " on http://" << server_opts.host << ":" << port << "\n"
                << std::flush;
      server.run();
      g_server = nullptr;
      return 0;
    }

    if (*eval_cmd) {
      if (*esweep) {
        auto store = ws.open(manuscript);
        auto target_id = resolve_target(ws, target, manuscript);
        auto grid = eval::parse_tau_grid(taus);
        auto samples = eval::corpus_samples(*store, ManuscriptId(manuscript), target_id);
        auto points = eval::sweep(samples, grid);
        auto csv = eval::sweep_csv(points);
        if (out_path.empty()) std::cout << csv;
        else eval::write_text(out_path.string(), csv);
        if (!svg_path.empty())
          eval::write_text(svg_path.string(), eval::sweep_svg(points, "Attribution of hand " + target_id.str()));
      } else if (*eplot) {
        auto points = eval::parse_sweep_csv(eval::read_text(in_path.string()));
        eval::write_text(svg_path.string(), eval::sweep_svg(points));
      }
      return 0;
    }

    if (*stats_cmd) {
      auto store = ws.open(manuscript);
      std::vector<DetectionRecord> dets;
      if (!det_file.empty()) {
        dets = dataset::load_detections(det_file);
      } else {
        AnnotationFilter f;
        f.manuscript = ManuscriptId(manuscript);
        f.origin = Origin::detector;
        for (const auto& a : store->query(f)) {
          if (a.status == Status::rejected) continue;
          dets.push_back({a.column, a.effective_box(), a.cls, a.confidence.value_or(0.0), a.model_id.value_or("")});
        }
      }
      auto csv = eval::stats_csv(eval::scribe_stats(*store, ManuscriptId(manuscript), dets));
      if (out_path.empty()) std::cout << csv;
      else eval::write_text(out_path.string(), csv);
      return 0;
    }

    if (*attr_cmd) {
      auto store = ws.open(manuscript);
      auto target_id = resolve_target(ws, target, manuscript);
      rule.kind = eval::attribution_kind_from_string(rule_kind);
      auto pages = eval::attribute_pages(*store, ManuscriptId(manuscript), rule);
      std::cout << "page,truth,decision,detections\n";
      for (const auto& p : pages)
        std::cout << p.page << side_letter(p.side) << "," << (p.truth ? p.truth->str() : "") << ","
                  << eval::to_string(p.decision) << "," << p.detections << "\n";
      auto c = eval::page_confusion(pages, target_id);
      std::fprintf(stderr, "pages %lld, accuracy %.4f, F-score %.4f\n",
                   static_cast<long long>(c.total()), eval::accuracy(c), eval::f_score(c));
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
