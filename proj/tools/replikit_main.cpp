// Command-line frontend: ingest PDFs into a manifest, run cross-validated
// evaluations, train/apply single models, and re-render reports from saved
// scores.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <memory>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "replikit/corpus.hpp"
#include "replikit/embeddings.hpp"
#include "replikit/eval.hpp"
#include "replikit/features.hpp"
#include "replikit/ingest.hpp"
#include "replikit/io.hpp"
#include "replikit/model.hpp"
#include "replikit/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace replikit;

namespace {

std::string env_or(const char* name, const std::string& fallback) {
  const char* value = std::getenv(name);
  return value && *value ? value : fallback;
}

struct LoadedData {
  EmbeddingTable table;
  Corpus corpus;  // already filtered
};

LoadedData load_filtered(const std::string& manifest, const std::string& embeddings,
                         int dim) {
  LoadedData data;
  data.table = load_embeddings(embeddings, dim);
  Corpus raw = load_manifest(manifest);
  raw.embedding_dim = data.table.dim;
  FilterResult filtered = filter_corpus(raw, data.table);
  if (!filtered.discarded_ids.empty()) {
    std::cerr << "warning: discarded " << filtered.discarded_ids.size()
              << " record(s) with fewer than 100 recognized English words:";
    for (const auto& id : filtered.discarded_ids) std::cerr << ' ' << id;
    std::cerr << '\n';
  }
  data.corpus = std::move(filtered.corpus);
  return data;
}

LabeledDataset build_dataset(Task task, const Corpus& corpus, const EmbeddingTable& table) {
  switch (task) {
    case Task::identify:
      return build_identify_dataset(corpus, table);
    case Task::categorize:
      return build_categorize_dataset(corpus, table);
    case Task::predict:
      return build_predict_dataset(corpus, table);
  }
  throw std::logic_error("unreachable task");
}

int default_folds(Task task) { return task == Task::identify ? 40 : 20; }

// ---------------------------------------------------------------- evaluate

struct EvaluateOpts {
  std::string task;
  std::string manifest;
  std::string embeddings;
  std::string out;
  int k = 0;  // 0 = task default
  std::uint64_t seed = 0;
  double C = 1.0;
  int dim = 50;
  bool dump_features = false;
};

void run_evaluate(const EvaluateOpts& opt) {
  Task task = parse_task(opt.task);
  LoadedData data = load_filtered(opt.manifest, opt.embeddings, opt.dim);
  LabeledDataset dataset = build_dataset(task, data.corpus, data.table);

  TrainConfig config;
  config.C = opt.C;
  int k = opt.k > 0 ? opt.k : default_folds(task);
  EvalReport report = cross_validate(dataset, k, config, opt.seed);

  fs::create_directories(opt.out);
  auto in_out = [&](const char* name) { return (fs::path(opt.out) / name).string(); };
  write_summary_json(report, in_out("summary.json"));
  write_curves_csv(report, in_out("curves.csv"));
  write_scores_csv(report, dataset.ids, in_out("scores.csv"));
  write_roc_svg(report, in_out("roc.svg"));
  write_pr_svg(report, in_out("pr.svg"));
  if (opt.dump_features) {
    write_features_csv(dataset, data.table.dim, in_out("features.csv"));
  }
  std::cout << summary_json_line(report) << '\n';
}

// ------------------------------------------------------------------- train

struct TrainOpts {
  std::string task;
  std::string manifest;
  std::string embeddings;
  std::string out;
  double C = 1.0;
  int dim = 50;
};

void run_train(const TrainOpts& opt) {
  Task task = parse_task(opt.task);
  LoadedData data = load_filtered(opt.manifest, opt.embeddings, opt.dim);
  LabeledDataset dataset = build_dataset(task, data.corpus, data.table);

  TrainConfig config;
  config.C = opt.C;
  LogisticModel model = fit(dataset.X, dataset.y, config);
  save_model(model, opt.out);

  json line = {{"task", to_string(task)},
               {"n", dataset.size()},
               {"n_pos", dataset.positives()},
               {"d", model.d},
               {"iterations", model.train_meta.iterations},
               {"objective", model.train_meta.objective},
               {"model", opt.out}};
  std::cout << line.dump() << '\n';
}

// ----------------------------------------------------------------- predict

struct PredictOpts {
  std::string model;
  std::string manifest;
  std::string embeddings;
  std::string out;  // optional CSV
  int dim = 50;
};

void run_predict(const PredictOpts& opt) {
  LogisticModel model = load_model(opt.model);
  EmbeddingTable table = load_embeddings(opt.embeddings, opt.dim);
  Corpus corpus = load_manifest(opt.manifest);

  // Score every record; the 100-word floor only gates training corpora.
  const int identify_d = 2 * (table.dim + 7);
  const int outcome_d = table.dim;
  bool identify_layout;
  if (model.d == identify_d) {
    identify_layout = true;
  } else if (model.d == outcome_d) {
    identify_layout = false;
  } else {
    throw InputError("model dimension " + std::to_string(model.d) +
                     " matches neither the text+title layout (" +
                     std::to_string(identify_d) + ") nor the text-embedding layout (" +
                     std::to_string(outcome_d) + ")");
  }

  std::ostringstream csv;
  csv << "id,score\n";
  for (const auto& record : corpus.records) {
    Vec x = identify_layout ? build_identify_features(record, table)
                            : build_outcome_features(record, table);
    double score = predict_proba(model, x);
    csv << record.id << ',' << fmt17(score) << '\n';
    json line = {{"id", record.id}, {"score", score}};
    std::cout << line.dump() << '\n';
  }
  if (!opt.out.empty()) {
    atomic_write(opt.out, csv.str());
  }
}

// ------------------------------------------------------------------ ingest

struct IngestOpts {
  std::string listing;
  std::string out;
  std::string converter;
  std::string mailto;
  bool resolve = false;
};

std::string safe_filename(const std::string& id, std::set<std::string>& used) {
  std::string name;
  for (char c : id) {
    bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
              c == '.' || c == '_' || c == '-';
    name.push_back(ok ? c : '_');
  }
  if (name.empty()) name = "record";
  std::string candidate = name;
  for (int suffix = 2; !used.insert(candidate).second; ++suffix) {
    candidate = name + "-" + std::to_string(suffix);
  }
  return candidate;
}

void run_ingest(const IngestOpts& opt) {
  std::ifstream in(opt.listing);
  if (!in) throw InputError("cannot open listing: " + opt.listing);

  const fs::path listing_dir = fs::path(opt.listing).parent_path();
  const fs::path out_dir = fs::path(opt.out).parent_path();
  const fs::path texts_dir = (out_dir.empty() ? fs::path(".") : out_dir) / "texts";
  fs::create_directories(texts_dir);

  static const std::set<std::string> known_fields = {
      "id",      "role",           "title",       "doi",        "outcome",
      "replicates", "different_data", "new_methods", "text_path", "pdf_path"};

  std::unique_ptr<HttplibGetter> http;
  std::unique_ptr<SystemClock> clock;
  std::unique_ptr<CrossrefResolver> resolver;
  if (opt.resolve) {
    if (opt.mailto.empty()) {
      throw InputError(
          "DOI resolution needs a contact email: pass --mailto or set "
          "REPLIKIT_CROSSREF_MAILTO");
    }
    http = std::make_unique<HttplibGetter>("api.crossref.org", 443, true);
    clock = std::make_unique<SystemClock>();
    resolver = std::make_unique<CrossrefResolver>(*http, opt.mailto, *clock);
  }

  std::vector<PaperRecord> records;
  std::set<std::string> used_names;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json entry;
    try {
      entry = json::parse(line);
    } catch (const json::exception& e) {
      throw InputError("listing line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!entry.is_object()) {
      throw InputError("listing line " + std::to_string(line_no) + ": expected an object");
    }
    for (const auto& [key, _] : entry.items()) {
      if (!known_fields.count(key)) {
        throw InputError("listing line " + std::to_string(line_no) + ": unknown field '" +
                         key + "'");
      }
    }
    auto require_string = [&](const char* field) {
      if (!entry.contains(field) || !entry[field].is_string()) {
        throw InputError("listing line " + std::to_string(line_no) + ": missing field '" +
                         std::string(field) + "'");
      }
      return entry[field].get<std::string>();
    };

    PaperRecord rec;
    rec.id = require_string("id");
    rec.role = parse_role(require_string("role"));
    if (entry.contains("title")) rec.title = entry["title"].get<std::string>();
    if (entry.contains("doi")) rec.doi = entry["doi"].get<std::string>();
    if (entry.contains("outcome")) rec.outcome = parse_outcome(entry["outcome"].get<std::string>());
    if (entry.contains("different_data")) rec.different_data = entry["different_data"].get<bool>();
    if (entry.contains("new_methods")) rec.new_methods = entry["new_methods"].get<bool>();
    if (entry.contains("replicates")) {
      for (const auto& ref : entry["replicates"]) rec.replicates.push_back(ref.get<std::string>());
    }

    const bool has_pdf = entry.contains("pdf_path");
    const bool has_text = entry.contains("text_path");
    if (has_pdf == has_text) {
      throw InputError("listing line " + std::to_string(line_no) + " (" + rec.id +
                       "): need exactly one of pdf_path or text_path");
    }

    json progress = {{"id", rec.id}};
    if (has_pdf) {
      fs::path pdf = listing_dir / fs::path(entry["pdf_path"].get<std::string>());
      ExtractedText extracted = extract_text(pdf.string(), opt.converter);
      rec.text = std::move(extracted.text);
      progress["action"] = "extracted";
      progress["converter"] = extracted.converter;
    } else {
      fs::path src = listing_dir / fs::path(entry["text_path"].get<std::string>());
      std::ifstream text_in(src, std::ios::binary);
      if (!text_in) throw InputError("cannot open text file: " + src.string());
      std::ostringstream buf;
      buf << text_in.rdbuf();
      rec.text = buf.str();
      progress["action"] = "copied";
    }

    rec.text_path = "texts/" + safe_filename(rec.id, used_names) + ".txt";
    atomic_write(((out_dir.empty() ? fs::path(".") : out_dir) / rec.text_path).string(),
                 rec.text);

    if (resolver && !rec.doi) {
      if (rec.title.empty()) {
        std::cerr << "warning: " << rec.id << " has no title; skipping DOI lookup\n";
      } else {
        DoiResolution res = resolver->resolve(rec.title);
        if (res.doi) {
          rec.doi = res.doi;
          progress["doi"] = *res.doi;
          progress["match_score"] = res.match_score;
        } else {
          std::cerr << "warning: no DOI match for " << rec.id << '\n';
        }
      }
    }
    if (rec.doi && !looks_like_doi(*rec.doi)) {
      std::cerr << "warning: " << rec.id << " has a suspicious DOI: " << *rec.doi << '\n';
    }

    std::cout << progress.dump() << '\n';
    records.push_back(std::move(rec));
  }

  emit_manifest(records, opt.out);
  json done = {{"manifest", opt.out}, {"records", records.size()}};
  std::cout << done.dump() << '\n';
}

// ------------------------------------------------------------------ report

struct ReportOpts {
  std::string scores;
  std::string out;
  std::string task = "identify";
  int k = 0;
  std::uint64_t seed = 0;
};

void run_report(const ReportOpts& opt) {
  std::ifstream in(opt.scores);
  if (!in) throw InputError("cannot open scores file: " + opt.scores);

  EvalReport report;
  report.task = parse_task(opt.task);
  report.k = opt.k;
  report.seed = opt.seed;

  std::vector<std::string> ids;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id,label,score") {
        throw InputError("scores file must start with 'id,label,score', got: " + line);
      }
      continue;
    }
    std::istringstream row(line);
    std::string id, label_s, score_s;
    if (!std::getline(row, id, ',') || !std::getline(row, label_s, ',') ||
        !std::getline(row, score_s)) {
      throw InputError("scores line " + std::to_string(line_no) + ": expected id,label,score");
    }
    try {
      std::size_t used = 0;
      int label = std::stoi(label_s, &used);
      if (used != label_s.size() || (label != 0 && label != 1)) {
        throw std::invalid_argument(label_s);
      }
      report.labels.push_back(label);
      report.scores.push_back(std::stod(score_s, &used));
      if (used != score_s.size()) throw std::invalid_argument(score_s);
    } catch (const std::exception&) {
      throw InputError("scores line " + std::to_string(line_no) + ": bad label or score");
    }
    ids.push_back(id);
  }
  if (report.scores.empty()) throw InputError("scores file has no rows: " + opt.scores);

  report.n = report.scores.size();
  report.n_pos = static_cast<std::size_t>(
      std::count(report.labels.begin(), report.labels.end(), 1));
  report.chance_auprc = static_cast<double>(report.n_pos) / static_cast<double>(report.n);
  report.roc = roc_curve(report.scores, report.labels);
  report.pr = pr_curve(report.scores, report.labels);
  report.auroc = auroc(report.scores, report.labels);
  report.auprc = auprc(report.scores, report.labels);

  fs::create_directories(opt.out);
  auto in_out = [&](const char* name) { return (fs::path(opt.out) / name).string(); };
  write_summary_json(report, in_out("summary.json"));
  write_curves_csv(report, in_out("curves.csv"));
  write_scores_csv(report, ids, in_out("scores.csv"));
  write_roc_svg(report, in_out("roc.svg"));
  write_pr_svg(report, in_out("pr.svg"));
  std::cout << summary_json_line(report) << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"replication-study corpus tools: ingest, evaluate, train, predict, report"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "replikit 0.1.0");

  EvaluateOpts eval_opts;
  auto* eval_cmd = app.add_subcommand("evaluate", "stratified k-fold evaluation with ROC/PR reports");
  eval_cmd->add_option("--task", eval_opts.task, "identify | categorize | predict")->required();
  eval_cmd->add_option("--manifest", eval_opts.manifest, "corpus manifest (JSON lines)")->required();
  eval_cmd->add_option("--embeddings", eval_opts.embeddings, "word-vector file")->required();
  eval_cmd->add_option("--out", eval_opts.out, "output directory")->required();
  eval_cmd->add_option("--k", eval_opts.k, "fold count (default: 40 for identify, else 20)");
  eval_cmd->add_option("--seed", eval_opts.seed, "fold-shuffle seed (default 0)");
  eval_cmd->add_option("--C", eval_opts.C, "inverse regularization strength (default 1.0)");
  eval_cmd->add_option("--dim", eval_opts.dim, "embedding dimensionality (default 50)");
  eval_cmd->add_flag("--dump-features", eval_opts.dump_features, "also write features.csv");
  eval_cmd->callback([&] { run_evaluate(eval_opts); });

  TrainOpts train_opts;
  auto* train_cmd = app.add_subcommand("train", "fit one model on the full corpus and save it");
  train_cmd->add_option("--task", train_opts.task, "identify | categorize | predict")->required();
  train_cmd->add_option("--manifest", train_opts.manifest, "corpus manifest")->required();
  train_cmd->add_option("--embeddings", train_opts.embeddings, "word-vector file")->required();
  train_cmd->add_option("--out", train_opts.out, "model JSON path")->required();
  train_cmd->add_option("--C", train_opts.C, "inverse regularization strength (default 1.0)");
  train_cmd->add_option("--dim", train_opts.dim, "embedding dimensionality (default 50)");
  train_cmd->callback([&] { run_train(train_opts); });

  PredictOpts predict_opts;
  auto* predict_cmd = app.add_subcommand("predict", "score a manifest with a saved model");
  predict_cmd->add_option("--model", predict_opts.model, "model JSON path")->required();
  predict_cmd->add_option("--manifest", predict_opts.manifest, "corpus manifest")->required();
  predict_cmd->add_option("--embeddings", predict_opts.embeddings, "word-vector file")->required();
  predict_cmd->add_option("--out", predict_opts.out, "optional id,score CSV path");
  predict_cmd->add_option("--dim", predict_opts.dim, "embedding dimensionality (default 50)");
  predict_cmd->callback([&] { run_predict(predict_opts); });

  IngestOpts ingest_opts;
  ingest_opts.converter = env_or("REPLIKIT_PDF2TEXT_CMD", kDefaultPdf2TextCmd);
  ingest_opts.mailto = env_or("REPLIKIT_CROSSREF_MAILTO", "");
  auto* ingest_cmd = app.add_subcommand("ingest", "build a manifest from a PDF/text listing");
  ingest_cmd->add_option("--listing", ingest_opts.listing,
                         "JSON-lines listing; each entry has pdf_path or text_path")->required();
  ingest_cmd->add_option("--out", ingest_opts.out, "manifest path to write")->required();
  ingest_cmd->add_option("--converter", ingest_opts.converter,
                         "PDF-to-text command with <in> placeholder "
                         "(default: REPLIKIT_PDF2TEXT_CMD or pdftotext)");
  ingest_cmd->add_flag("--resolve-doi", ingest_opts.resolve,
                       "look up missing DOIs by title via Crossref");
  ingest_cmd->add_option("--mailto", ingest_opts.mailto,
                         "contact email for Crossref (default: REPLIKIT_CROSSREF_MAILTO)");
  ingest_cmd->callback([&] { run_ingest(ingest_opts); });

  ReportOpts report_opts;
  auto* report_cmd = app.add_subcommand("report", "re-render curves and summary from a scores CSV");
  report_cmd->add_option("--scores", report_opts.scores, "id,label,score CSV")->required();
  report_cmd->add_option("--out", report_opts.out, "output directory")->required();
  report_cmd->add_option("--task", report_opts.task, "task name recorded in the summary");
  report_cmd->add_option("--k", report_opts.k, "fold count recorded in the summary");
  report_cmd->add_option("--seed", report_opts.seed, "seed recorded in the summary");
  report_cmd->callback([&] { run_report(report_opts); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
