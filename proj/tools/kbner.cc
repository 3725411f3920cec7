// Copyright 2026 The kbner Authors
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

// kbner: corpus construction, evaluation and adjudication from one binary.

#include <atomic>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <pthread.h>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "kbner/adjudication.h"
#include "kbner/adjudication_http.h"
#include "kbner/annotator.h"
#include "kbner/coarse.h"
#include "kbner/corpus.h"
#include "kbner/errors.h"
#include "kbner/evaluation.h"
#include "kbner/gazetteer.h"
#include "kbner/iob.h"
#include "kbner/kb.h"
#include "kbner/noise.h"
#include "kbner/sampling.h"
#include "kbner/stats.h"
#include "kbner/text.h"

namespace {

using namespace kbner;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitInternal = 3;

// Writes to `path`, or to stdout for "-".
void WriteOutput(const std::string &path,
                 const std::function<void(std::ostream &)> &write) {
  if (path == "-") {
    write(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path);
  write(out);
  out.flush();
  if (!out) throw Error("write failed for " + path);
}

std::vector<Task> LoadTasks(const std::string &tasks_path,
                            const std::string &candidates_path) {
  AnnotatedCorpus corpus = ReadCorpusFile(tasks_path);
  if (candidates_path.empty()) return BuildTasks(corpus);
  std::ifstream in(candidates_path);
  if (!in) throw NotFoundError("cannot open " + candidates_path);
  CandidateSidecar sidecar = ReadCandidates(in);
  return BuildTasks(corpus, &sidecar);
}

std::vector<std::string> SplitList(const std::string &text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// First `depth` entries of each span's ranking, or the span label when the
// sentence has no rankings.
std::vector<std::vector<std::string>> SpanTypeLists(
    const AnnotatedCorpus &corpus, size_t depth,
    std::vector<std::pair<size_t, size_t>> *positions) {
  std::vector<std::vector<std::string>> out;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const AnnotatedSentence &s = corpus.sentences[i];
    std::vector<Span> spans = ExtractSpans(s.tags);
    if (!s.span_rankings.empty() && s.span_rankings.size() != spans.size()) {
      throw ValidationError("sentence " + std::to_string(i + 1) + " has " +
                            std::to_string(spans.size()) + " spans but " +
                            std::to_string(s.span_rankings.size()) +
                            " rankings");
    }
    for (size_t k = 0; k < spans.size(); ++k) {
      std::vector<std::string> list =
          s.span_rankings.empty() ? std::vector<std::string>{spans[k].label}
                                  : s.span_rankings[k];
      if (depth > 0 && list.size() > depth) list.resize(depth);
      out.push_back(std::move(list));
      if (positions) positions->emplace_back(spans[k].begin, spans[k].end);
    }
  }
  return out;
}

struct Options {
  std::string kb, dump, out, in, mapping, format = "tsv", mode, rest, pred,
      gt, task, average = "macro", tasks, log, candidates, annotators,
      host = "127.0.0.1", static_dir;
  double lang_threshold = kDefaultLanguageThreshold;
  bool fold_case = false;
  bool json = false;
  bool report = false;
  size_t jobs = 1;
  size_t words = 10000;
  size_t sentences = 2000;
  uint64_t seed = kDefaultSeed;
  size_t pred_depth = 1;
  size_t gold_depth = 1;
  size_t quorum = 3;
  int port = 8080;
};

int RunBuildGazetteer(const Options &o) {
  KnowledgeSnapshot snapshot = ParseSnapshot(o.kb);
  Gazetteer gazetteer = BuildGazetteer(snapshot);
  WriteOutput(o.out, [&](std::ostream &out) { WriteGazetteer(gazetteer, out); });
  std::cerr << "entries " << gazetteer.size() << ", skipped (no type) "
            << gazetteer.skipped() << ", dangling targets "
            << snapshot.dangling_count() << "\n";
  return kExitOk;
}

int RunAnnotate(const Options &o) {
  KnowledgeSnapshot snapshot = ParseSnapshot(o.kb);
  Gazetteer gazetteer = BuildGazetteer(snapshot);
  DocumentStore docs = ReadDumpFile(o.dump);
  AnnotatorConfig config{o.lang_threshold, o.fold_case};
  AnnotationCounters counters;
  AnnotatedCorpus corpus =
      AnnotateCorpus(snapshot, gazetteer, docs, config, o.jobs, &counters);
  WriteOutput(o.out, [&](std::ostream &out) {
    if (o.format == "conll") {
      WriteConll(corpus, out);
    } else {
      WriteCorpus(corpus, out);
    }
  });
  std::cerr << "sentences " << corpus.sentences.size() << ", cpns "
            << counters.cpns << ", no text " << counters.no_text
            << ", language dropped " << counters.language_dropped
            << ", unannotated sentences " << counters.unannotated_sentences
            << ", duplicate sentences " << counters.duplicate_sentences
            << "\n";
  return kExitOk;
}

int RunReduceNoise(const Options &o) {
  AnnotatedCorpus corpus = ReadCorpusFile(o.in);
  AnnotatedCorpus reduced = ReduceNoise(corpus, *ParseNoiseMode(o.mode));
  WriteOutput(o.out, [&](std::ostream &out) { WriteCorpus(reduced, out); });
  return kExitOk;
}

int RunToCga(const Options &o) {
  AnnotatedCorpus corpus = ReadCorpusFile(o.in);
  TypeMappingTable table = LoadMappingFile(o.mapping);
  CoarseResult result = ToCoarse(corpus, table);
  WriteOutput(o.out, [&](std::ostream &out) { WriteCorpus(result.corpus, out); });
  if (o.report) {
    for (CoarseLabel label : kEntityLabels) {
      std::cerr << ToString(label) << '\t' << result.label_tokens[label] << '\n';
    }
    std::cerr << "dropped sentences\t" << result.dropped_sentences << '\n';
  }
  return kExitOk;
}

int RunStats(const Options &o) {
  StatsReport report = ComputeStats(ReadCorpusFile(o.in));
  WriteOutput(o.out, [&](std::ostream &out) {
    if (o.json) {
      out << StatsToJson(report).dump(2) << '\n';
    } else {
      out << FormatStats(report);
    }
  });
  return kExitOk;
}

int RunSample(const Options &o) {
  AnnotatedCorpus corpus = ReadCorpusFile(o.in);
  SampleSplit split = o.mode == "ner"
                          ? SampleByWords(corpus, o.words, o.seed)
                          : SampleBySentences(corpus, o.sentences, o.seed);
  split.sample.SetMeta("sample", o.mode + ";seed=" + std::to_string(o.seed));
  WriteOutput(o.out, [&](std::ostream &out) { WriteCorpus(split.sample, out); });
  if (!o.rest.empty()) {
    split.rest.SetMeta("sample", "rest;seed=" + std::to_string(o.seed));
    WriteOutput(o.rest, [&](std::ostream &out) { WriteCorpus(split.rest, out); });
  }
  std::cerr << "sampled " << split.sample.sentences.size() << " of "
            << corpus.sentences.size() << " sentences\n";
  return kExitOk;
}

int RunEval(const Options &o) {
  AnnotatedCorpus pred = ReadCorpusFile(o.pred);
  AnnotatedCorpus gt = ReadCorpusFile(o.gt);
  if (pred.sentences.size() != gt.sentences.size()) {
    throw ValidationError("prediction has " +
                          std::to_string(pred.sentences.size()) +
                          " sentences, ground truth " +
                          std::to_string(gt.sentences.size()));
  }
  EvalReport report;
  if (o.task == "coarse") {
    report.diff = DiffCorpora(pred, gt);
    CoarseCounts counts;
    for (size_t i = 0; i < pred.sentences.size(); ++i) {
      counts.Add(pred.sentences[i].tags, gt.sentences[i].tags);
    }
    report.coarse = ScoreCoarse(
        counts, o.average == "micro" ? Averaging::kMicro : Averaging::kMacro);
  } else if (o.task == "fine" || o.task == "fine-topk") {
    std::vector<std::pair<size_t, size_t>> pred_pos, gt_pos;
    size_t pred_depth = o.task == "fine" ? o.pred_depth : 0;
    auto p = SpanTypeLists(pred, pred_depth, &pred_pos);
    auto g = SpanTypeLists(gt, o.gold_depth, &gt_pos);
    if (pred_pos != gt_pos) {
      throw ValidationError("prediction and ground truth spans differ");
    }
    if (o.task == "fine") {
      std::vector<TypeSet> ps, gs;
      for (const auto &l : p) ps.emplace_back(l.begin(), l.end());
      for (const auto &l : g) gs.emplace_back(l.begin(), l.end());
      report.fine = FineGrainedF1(ps, gs);
    } else {
      std::vector<std::string> reference;
      for (const auto &l : g) {
        if (l.empty()) throw ValidationError("ground-truth span without a type");
        reference.push_back(l.front());
      }
      report.topk = TopKAgreement(p, reference);
    }
  } else {
    std::vector<std::vector<std::string>> ranked;
    std::vector<std::string> reference;
    for (size_t i = 0; i < pred.sentences.size(); ++i) {
      ranked.push_back(SplitList(pred.sentences[i].domain, '|'));
      reference.push_back(gt.sentences[i].domain);
    }
    report.topk = TopKAgreement(ranked, reference);
  }
  if (o.json) {
    std::cout << ToJson(report).dump(2) << '\n';
  } else {
    std::cout << FormatReport(report);
  }
  return kExitOk;
}

std::atomic<AdjudicationServer *> g_server{nullptr};

int RunServe(const Options &o) {
  AdjudicationService service(LoadTasks(o.tasks, o.candidates), o.log);
  for (const std::string &id : SplitList(o.annotators, ',')) {
    service.RegisterAnnotator(id);
  }
  std::optional<std::filesystem::path> static_dir;
  if (!o.static_dir.empty()) static_dir = o.static_dir;
  AdjudicationServer server(service, static_dir);

  // Stop cleanly on SIGINT/SIGTERM: the signals are blocked everywhere and
  // picked up by a dedicated thread.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);
  g_server = &server;
  std::thread watcher([signals]() {
    int sig = 0;
    sigwait(&signals, &sig);
    if (AdjudicationServer *s = g_server.load()) s->Stop();
  });
  watcher.detach();

  int port = server.Bind(o.host, o.port);
  if (port < 0) {
    std::cerr << "error: cannot bind " << o.host << ":" << o.port << "\n";
    return kExitInternal;
  }
  std::cout << "listening on " << o.host << ":" << port << std::endl;
  server.ListenAfterBind();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Knowledge-base driven NER/TC corpus builder"};
  app.require_subcommand(1);
  Options o;
  std::function<int()> run;

  auto *gaz = app.add_subcommand("build-gazetteer",
                                 "Resolve entity types and list surface forms");
  gaz->add_option("--kb", o.kb, "Knowledge-base snapshot")->required()
      ->check(CLI::ExistingFile);
  gaz->add_option("--out", o.out, "Output file ('-' for stdout)")->required();
  gaz->callback([&] { run = [&] { return RunBuildGazetteer(o); }; });

  auto *annotate = app.add_subcommand("annotate",
                                      "Build the fine-grained corpus");
  annotate->add_option("--kb", o.kb, "Knowledge-base snapshot")->required()
      ->check(CLI::ExistingFile);
  annotate->add_option("--dump", o.dump, "Article dump")->required()
      ->check(CLI::ExistingFile);
  annotate->add_option("--out", o.out, "Output file ('-' for stdout)")
      ->required();
  annotate->add_option("--format", o.format, "Output format")
      ->check(CLI::IsMember({"tsv", "conll"}))->capture_default_str();
  annotate->add_option("--lang-threshold", o.lang_threshold,
                       "Minimum Turkishness score")
      ->check(CLI::Range(0.0, 1.0))->capture_default_str();
  annotate->add_flag("--fold-case", o.fold_case,
                     "Match surfaces case-insensitively (Turkish folding)");
  annotate->add_option("--jobs", o.jobs, "Worker threads")
      ->check(CLI::PositiveNumber)->capture_default_str();
  annotate->callback([&] { run = [&] { return RunAnnotate(o); }; });

  auto *noise = app.add_subcommand("reduce-noise",
                                   "Re-type spans with their modal type");
  noise->add_option("--in", o.in, "Input corpus")->required()
      ->check(CLI::ExistingFile);
  noise->add_option("--out", o.out, "Output corpus ('-' for stdout)")
      ->required();
  noise->add_option("--mode", o.mode, "di (domain independent) or dd")
      ->required()->check(CLI::IsMember({"di", "dd"}));
  noise->callback([&] { run = [&] { return RunReduceNoise(o); }; });

  auto *cga = app.add_subcommand("to-cga", "Map fine types to coarse labels");
  cga->add_option("--in", o.in, "Input corpus")->required()
      ->check(CLI::ExistingFile);
  cga->add_option("--mapping", o.mapping, "Type mapping file")->required()
      ->check(CLI::ExistingFile);
  cga->add_option("--out", o.out, "Output corpus ('-' for stdout)")
      ->required();
  cga->add_flag("--report", o.report, "Print label token counts to stderr");
  cga->callback([&] { run = [&] { return RunToCga(o); }; });

  auto *stats = app.add_subcommand("stats", "Corpus statistics");
  stats->add_option("--in", o.in, "Input corpus")->required()
      ->check(CLI::ExistingFile);
  stats->add_option("--out", o.out, "Output file")->default_val("-");
  stats->add_flag("--json", o.json, "Emit JSON");
  stats->callback([&] { run = [&] { return RunStats(o); }; });

  auto *sample = app.add_subcommand("sample", "Draw a seeded test set");
  sample->add_option("--in", o.in, "Input corpus")->required()
      ->check(CLI::ExistingFile);
  sample->add_option("--out", o.out, "Sample output ('-' for stdout)")
      ->required();
  sample->add_option("--rest", o.rest, "Write the remaining sentences here");
  sample->add_option("--mode", o.mode,
                     "ner (word budget) or tc (sentence count)")
      ->required()->check(CLI::IsMember({"ner", "tc"}));
  sample->add_option("--words", o.words, "Word budget for ner")
      ->capture_default_str();
  sample->add_option("--sentences", o.sentences, "Sentence count for tc")
      ->capture_default_str();
  sample->add_option("--seed", o.seed, "Random seed")->capture_default_str();
  sample->callback([&] { run = [&] { return RunSample(o); }; });

  auto *eval = app.add_subcommand("eval", "Score predictions against ground truth");
  eval->add_option("--task", o.task, "coarse, fine, fine-topk or tc")
      ->required()->check(CLI::IsMember({"coarse", "fine", "fine-topk", "tc"}));
  eval->add_option("--pred,--auto", o.pred, "Predicted or automated corpus")
      ->required()->check(CLI::ExistingFile);
  eval->add_option("--gt", o.gt, "Ground-truth corpus")->required()
      ->check(CLI::ExistingFile);
  eval->add_option("--average", o.average, "Coarse average: macro or micro")
      ->check(CLI::IsMember({"macro", "micro"}))->capture_default_str();
  eval->add_option("--pred-depth", o.pred_depth,
                   "Predicted types per span for fine (0 = all)")
      ->capture_default_str();
  eval->add_option("--gold-depth", o.gold_depth,
                   "Ground-truth types per span (0 = all)")
      ->capture_default_str();
  eval->add_flag("--json", o.json, "Emit JSON");
  eval->callback([&] { run = [&] { return RunEval(o); }; });

  auto *serve = app.add_subcommand("serve", "Run the adjudication service");
  serve->add_option("--port", o.port, "TCP port (0 picks a free one)")
      ->check(CLI::Range(0, 65535))->capture_default_str();
  serve->add_option("--host", o.host, "Bind address")->capture_default_str();
  serve->add_option("--tasks", o.tasks, "Task corpus")->required()
      ->check(CLI::ExistingFile);
  serve->add_option("--log", o.log, "Judgment log (created if missing)")
      ->required();
  serve->add_option("--candidates", o.candidates,
                    "Fine-rank candidate sidecar (makes fine tasks)")
      ->check(CLI::ExistingFile);
  serve->add_option("--annotators", o.annotators,
                    "Comma-separated annotator ids to register");
  serve->add_option("--static", o.static_dir, "Directory of UI assets")
      ->check(CLI::ExistingDirectory);
  serve->callback([&] { run = [&] { return RunServe(o); }; });

  auto *exp = app.add_subcommand("export", "Write merged ground truth from a log");
  exp->add_option("--tasks", o.tasks, "Task corpus")->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--log", o.log, "Judgment log")->required()
      ->check(CLI::ExistingFile);
  exp->add_option("--candidates", o.candidates, "Fine-rank candidate sidecar")
      ->check(CLI::ExistingFile);
  exp->add_option("--quorum", o.quorum, "Agreeing annotators needed")
      ->check(CLI::PositiveNumber)->capture_default_str();
  exp->add_option("--out", o.out, "Output corpus ('-' for stdout)")
      ->required();
  exp->callback([&] {
    run = [&] {
      AdjudicationService service(LoadTasks(o.tasks, o.candidates), o.log);
      AnnotatedCorpus gt = service.ExportGroundTruth(o.quorum);
      WriteOutput(o.out, [&](std::ostream &out) { WriteCorpus(gt, out); });
      return kExitOk;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    return run();
  } catch (const FormatError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const ValidationError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NotFoundError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception &e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
