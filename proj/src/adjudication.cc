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

#include "kbner/adjudication.h"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <iterator>
#include <mutex>
#include <sstream>

#include "kbner/coarse.h"
#include "kbner/errors.h"
#include "kbner/hash.h"
#include "kbner/iob.h"
#include "kbner/type_path.h"

namespace kbner {
namespace {

using nlohmann::json;

constexpr std::string_view kLogMagic = "#adjlog v1 tasks=";
constexpr size_t kMaxCandidates = 5;

size_t ParseIndex(const std::string &text, size_t line_no) {
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("bad index '" + text + "'", line_no);
  }
  try {
    return std::stoul(text);
  } catch (const std::exception &) {
    throw FormatError("bad index '" + text + "'", line_no);
  }
}

bool IsValidAnnotatorId(std::string_view id) {
  if (id.empty() || id.size() > 128) return false;
  for (unsigned char c : id) {
    if (c < 0x20 || c == 0x7F) return false;
  }
  return true;
}

std::string LogHeader(const std::string &fingerprint) {
  return std::string(kLogMagic) + fingerprint;
}

json VerdictToJson(const UnitVerdict &v, TaskKind kind) {
  json j = {{"unit", v.unit}};
  if (kind == TaskKind::kCoarseCorrect) {
    j["label"] = v.label;
  } else {
    j["ranking"] = v.ranking;
    if (v.suggestion) j["suggestion"] = *v.suggestion;
  }
  return j;
}

}  // namespace

std::string_view ToString(TaskKind kind) {
  return kind == TaskKind::kCoarseCorrect ? "coarse" : "fine";
}

CandidateSidecar ReadCandidates(std::istream &in) {
  CandidateSidecar sidecar;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string col;
    while (std::getline(ss, col, '\t')) cols.push_back(col);
    if (cols.size() != 3) throw FormatError("expected 3 columns", line_no);
    UnitKey key{ParseIndex(cols[0], line_no), ParseIndex(cols[1], line_no)};
    if (key.sentence == 0) throw FormatError("sentence numbers start at 1", line_no);
    std::vector<std::string> types;
    std::stringstream ts(cols[2]);
    std::string type;
    while (std::getline(ts, type, '|')) {
      if (!TypePath::TryParse(type)) {
        throw FormatError("invalid type '" + type + "'", line_no);
      }
      if (std::find(types.begin(), types.end(), type) != types.end()) {
        throw FormatError("duplicate candidate '" + type + "'", line_no);
      }
      types.push_back(type);
    }
    if (types.empty()) throw FormatError("no candidates", line_no);
    if (!sidecar.emplace(key, std::move(types)).second) {
      throw FormatError("duplicate candidate line", line_no);
    }
  }
  return sidecar;
}

std::vector<Task> BuildTasks(const AnnotatedCorpus &corpus,
                             const CandidateSidecar *candidates) {
  std::vector<Task> tasks;
  std::set<UnitKey> used;
  for (size_t i = 0; i < corpus.sentences.size(); ++i) {
    const AnnotatedSentence &s = corpus.sentences[i];
    Task task;
    task.id = i + 1;
    task.kind = candidates ? TaskKind::kFineRank : TaskKind::kCoarseCorrect;
    task.sentence = s;
    std::vector<Span> spans = ExtractSpans(s.tags);
    if (candidates) {
      for (size_t k = 0; k < spans.size(); ++k) {
        UnitKey key{task.id, k};
        auto it = candidates->find(key);
        if (it == candidates->end()) {
          throw ValidationError("no candidates for sentence " +
                                std::to_string(task.id) + " span " +
                                std::to_string(k));
        }
        used.insert(key);
        std::vector<std::string> cands = it->second;
        if (cands.size() > kMaxCandidates) cands.resize(kMaxCandidates);
        task.units.push_back(
            {spans[k].begin, spans[k].end, spans[k].label, std::move(cands)});
      }
    } else {
      size_t next_span = 0;
      for (size_t t = 0; t < s.tags.size();) {
        if (next_span < spans.size() && spans[next_span].begin == t) {
          const Span &span = spans[next_span++];
          if (!ParseCoarseLabel(span.label) || span.label == kOutsideTag) {
            throw ValidationError("sentence " + std::to_string(task.id) +
                                  " carries non-coarse label " + span.label);
          }
          task.units.push_back({span.begin, span.end, span.label, {}});
          t = span.end;
          continue;
        }
        if (!s.tokens()[t].is_punct) {
          task.units.push_back({t, t + 1, std::string(kOutsideTag), {}});
        }
        ++t;
      }
    }
    tasks.push_back(std::move(task));
  }
  if (candidates) {
    for (const auto &[key, types] : *candidates) {
      if (!used.count(key)) {
        throw ValidationError("candidates for unknown span: sentence " +
                              std::to_string(key.sentence) + " span " +
                              std::to_string(key.unit));
      }
    }
  }
  return tasks;
}

std::string TasksFingerprint(const std::vector<Task> &tasks) {
  std::string all;
  for (const Task &task : tasks) all += TaskToJson(task).dump() + "\n";
  return HexDigest(Fnv1a64(all));
}

AdjudicationState::AdjudicationState(std::vector<Task> tasks)
    : tasks_(std::move(tasks)) {}

const Task &AdjudicationState::GetTask(size_t id) const {
  if (id == 0 || id > tasks_.size()) {
    throw NotFoundError("unknown task " + std::to_string(id));
  }
  return tasks_[id - 1];
}

bool AdjudicationState::RegisterAnnotator(const std::string &id) {
  if (!IsValidAnnotatorId(id)) {
    throw ValidationError("invalid annotator id '" + id + "'");
  }
  if (!annotator_set_.insert(id).second) return false;
  annotators_.push_back(id);
  return true;
}

bool AdjudicationState::HasAnnotator(std::string_view id) const {
  return annotator_set_.count(id) > 0;
}

void AdjudicationState::Validate(const Submission &submission) const {
  const Task &task = GetTask(submission.task);
  if (!HasAnnotator(submission.annotator)) {
    throw NotFoundError("unknown annotator '" + submission.annotator + "'");
  }
  if (submission.verdicts.size() != task.units.size()) {
    throw ValidationError("task " + std::to_string(task.id) + " has " +
                          std::to_string(task.units.size()) + " units, got " +
                          std::to_string(submission.verdicts.size()) +
                          " verdicts");
  }
  std::vector<bool> seen(task.units.size(), false);
  for (const UnitVerdict &v : submission.verdicts) {
    if (v.unit >= task.units.size()) {
      throw ValidationError("unit " + std::to_string(v.unit) + " out of range");
    }
    if (seen[v.unit]) {
      throw ValidationError("unit " + std::to_string(v.unit) + " judged twice");
    }
    seen[v.unit] = true;
    const TaskUnit &unit = task.units[v.unit];
    if (task.kind == TaskKind::kCoarseCorrect) {
      if (!IsCoarseLabelName(v.label)) {
        throw ValidationError("invalid label '" + v.label + "'");
      }
      if (!v.ranking.empty() || v.suggestion) {
        throw ValidationError("coarse verdicts take a label only");
      }
      continue;
    }
    if (!v.label.empty()) {
      throw ValidationError("fine verdicts take a ranking, not a label");
    }
    if (v.ranking.empty() && !v.suggestion) {
      throw ValidationError("empty ranking for unit " + std::to_string(v.unit));
    }
    std::set<std::string> distinct;
    for (const std::string &t : v.ranking) {
      if (std::find(unit.candidates.begin(), unit.candidates.end(), t) ==
          unit.candidates.end()) {
        throw ValidationError("'" + t + "' is not a candidate for unit " +
                              std::to_string(v.unit));
      }
      if (!distinct.insert(t).second) {
        throw ValidationError("'" + t + "' ranked twice");
      }
    }
    if (v.suggestion) {
      if (!TypePath::TryParse(*v.suggestion)) {
        throw ValidationError("invalid suggested type '" + *v.suggestion + "'");
      }
      if (distinct.count(*v.suggestion)) {
        throw ValidationError("suggestion repeats a ranked type");
      }
    }
  }
}

void AdjudicationState::Apply(const Submission &submission) {
  Validate(submission);
  Submission sorted = submission;
  std::sort(sorted.verdicts.begin(), sorted.verdicts.end(),
            [](const UnitVerdict &a, const UnitVerdict &b) {
              return a.unit < b.unit;
            });
  effective_[{submission.annotator, submission.task}] = std::move(sorted);
}

std::optional<size_t> AdjudicationState::NextTask(
    std::string_view annotator) const {
  if (!HasAnnotator(annotator)) {
    throw NotFoundError("unknown annotator '" + std::string(annotator) + "'");
  }
  const std::string id(annotator);
  for (const Task &task : tasks_) {
    if (!effective_.count({id, task.id})) return task.id;
  }
  return std::nullopt;
}

size_t AdjudicationState::JudgedCount(std::string_view annotator) const {
  const std::string id(annotator);
  auto it = effective_.lower_bound({id, 0});
  size_t n = 0;
  for (; it != effective_.end() && it->first.first == id; ++it) ++n;
  return n;
}

std::vector<Judgment> AdjudicationState::EffectiveJudgments() const {
  std::vector<Judgment> out;
  for (const auto &[key, submission] : effective_) {
    for (const UnitVerdict &v : submission.verdicts) {
      out.push_back({submission.annotator, submission.task, v.unit, v.label,
                     v.ranking, v.suggestion});
    }
  }
  return out;
}

AnnotatedCorpus AdjudicationState::ExportGroundTruth(size_t quorum) const {
  if (quorum == 0) throw ValidationError("quorum must be at least 1");
  // Judgments per task, annotators in id order.
  std::map<size_t, std::vector<const Submission *>> by_task;
  for (const auto &[key, submission] : effective_) {
    by_task[key.second].push_back(&submission);
  }

  AnnotatedCorpus out;
  out.SetMeta("source", "merged");
  out.SetMeta("quorum", std::to_string(quorum));
  for (const Task &task : tasks_) {
    AnnotatedSentence s = task.sentence;
    s.span_rankings.clear();
    s.agreement.clear();
    const std::vector<const Submission *> &subs = by_task[task.id];
    if (task.kind == TaskKind::kCoarseCorrect) {
      std::map<UnitKey, std::string> auto_labels;
      for (size_t u = 0; u < task.units.size(); ++u) {
        auto_labels[{task.id, u}] = task.units[u].label;
      }
      std::vector<Judgment> judgments;
      for (const Submission *sub : subs) {
        for (const UnitVerdict &v : sub->verdicts) {
          judgments.push_back({sub->annotator, task.id, v.unit, v.label, {}, {}});
        }
      }
      GroundTruth gt = MergeJudgments(judgments, auto_labels, quorum);
      s.tags.assign(s.tags.size(), std::string(kOutsideTag));
      for (size_t u = 0; u < task.units.size(); ++u) {
        const MergedUnit &merged = gt.units.at({task.id, u});
        if (merged.label != kOutsideTag) {
          TagSpan(s.tags, task.units[u].begin, task.units[u].end, merged.label);
        }
        s.agreement.push_back(merged.agreement);
      }
    } else {
      for (size_t u = 0; u < task.units.size(); ++u) {
        const TaskUnit &unit = task.units[u];
        std::vector<std::vector<std::string>> rankings;
        for (const Submission *sub : subs) {
          const UnitVerdict &v = sub->verdicts[u];
          std::vector<std::string> r = v.ranking;
          if (v.suggestion) r.push_back(*v.suggestion);
          rankings.push_back(std::move(r));
        }
        s.span_rankings.push_back(rankings.empty()
                                      ? unit.candidates
                                      : MergeRankings(rankings, unit.candidates));
        s.agreement.push_back(rankings.size());
      }
    }
    out.sentences.push_back(std::move(s));
  }
  return out;
}

bool AdjudicationState::operator==(const AdjudicationState &other) const {
  return annotators_ == other.annotators_ && effective_ == other.effective_ &&
         TasksFingerprint(tasks_) == TasksFingerprint(other.tasks_);
}

json TaskToJson(const Task &task) {
  json units = json::array();
  for (size_t u = 0; u < task.units.size(); ++u) {
    const TaskUnit &unit = task.units[u];
    json j = {{"index", u},
              {"begin", unit.begin},
              {"end", unit.end},
              {"label", unit.label}};
    if (task.kind == TaskKind::kFineRank) j["candidates"] = unit.candidates;
    units.push_back(std::move(j));
  }
  json j = {{"id", task.id},
            {"kind", ToString(task.kind)},
            {"domain", task.sentence.domain},
            {"tokens", task.sentence.TokenTexts()},
            {"tags", task.sentence.tags},
            {"units", std::move(units)}};
  if (task.kind == TaskKind::kCoarseCorrect) {
    j["choices"] = {"PERSON", "ORGANIZATION", "LOCATION", "MISC", "O"};
  }
  return j;
}

json SubmissionToJson(const Submission &submission) {
  json verdicts = json::array();
  for (const UnitVerdict &v : submission.verdicts) {
    json j = {{"unit", v.unit}};
    if (!v.label.empty()) j["label"] = v.label;
    if (!v.ranking.empty() || v.label.empty()) j["ranking"] = v.ranking;
    if (v.suggestion) j["suggestion"] = *v.suggestion;
    verdicts.push_back(std::move(j));
  }
  return {{"annotator", submission.annotator},
          {"task", submission.task},
          {"verdicts", std::move(verdicts)}};
}

Submission SubmissionFromJson(const json &body) {
  if (!body.is_object()) throw ValidationError("body must be an object");
  Submission s;
  auto annotator = body.find("annotator");
  if (annotator == body.end() || !annotator->is_string()) {
    throw ValidationError("missing string field 'annotator'");
  }
  s.annotator = annotator->get<std::string>();
  auto task = body.find("task");
  if (task == body.end() || !task->is_number_unsigned()) {
    throw ValidationError("missing non-negative integer field 'task'");
  }
  s.task = task->get<size_t>();
  auto verdicts = body.find("verdicts");
  if (verdicts == body.end() || !verdicts->is_array()) {
    throw ValidationError("missing array field 'verdicts'");
  }
  for (const json &v : *verdicts) {
    if (!v.is_object()) throw ValidationError("verdict must be an object");
    UnitVerdict verdict;
    auto unit = v.find("unit");
    if (unit == v.end() || !unit->is_number_unsigned()) {
      throw ValidationError("verdict needs a non-negative integer 'unit'");
    }
    verdict.unit = unit->get<size_t>();
    auto label = v.find("label");
    auto ranking = v.find("ranking");
    if ((label == v.end()) == (ranking == v.end())) {
      throw ValidationError("verdict needs exactly one of 'label', 'ranking'");
    }
    if (label != v.end()) {
      if (!label->is_string()) throw ValidationError("'label' must be a string");
      verdict.label = label->get<std::string>();
    } else {
      if (!ranking->is_array()) throw ValidationError("'ranking' must be a list");
      for (const json &t : *ranking) {
        if (!t.is_string()) throw ValidationError("ranking entries are strings");
        verdict.ranking.push_back(t.get<std::string>());
      }
    }
    auto suggestion = v.find("suggestion");
    if (suggestion != v.end() && !suggestion->is_null()) {
      if (!suggestion->is_string()) {
        throw ValidationError("'suggestion' must be a string");
      }
      verdict.suggestion = suggestion->get<std::string>();
    }
    s.verdicts.push_back(std::move(verdict));
  }
  return s;
}

JudgmentLog::JudgmentLog(std::filesystem::path path,
                         std::string tasks_fingerprint)
    : path_(std::move(path)) {
  const std::string header = LogHeader(tasks_fingerprint);
  std::string content;
  if (std::filesystem::exists(path_)) {
    std::ifstream in(path_, std::ios::binary);
    if (!in) throw Error("cannot read log " + path_.string());
    content.assign(std::istreambuf_iterator<char>(in),
                   std::istreambuf_iterator<char>());
  }
  size_t complete = content.rfind('\n');
  complete = complete == std::string::npos ? 0 : complete + 1;
  if (complete != content.size()) {
    std::filesystem::resize_file(path_, complete);
    content.resize(complete);
  }

  bool need_header = content.empty();
  size_t pos = 0;
  size_t line_no = 0;
  while (pos < content.size()) {
    size_t nl = content.find('\n', pos);
    std::string line = content.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (line_no == 1) {
      if (line.rfind(kLogMagic, 0) != 0) {
        throw FormatError("not a judgment log: " + path_.string(), 1);
      }
      if (line != header) {
        throw FormatError("log " + path_.string() +
                              " was written for a different task set",
                          1);
      }
      continue;
    }
    if (line.empty()) continue;
    try {
      json record = json::parse(line);
      if (!record.is_object()) throw FormatError("log record is not an object");
      records_.push_back(std::move(record));
    } catch (const json::exception &e) {
      throw FormatError(std::string("corrupt log record: ") + e.what(), line_no);
    }
  }

  out_.open(path_, std::ios::binary | std::ios::app);
  if (!out_) throw Error("cannot open log " + path_.string() + " for append");
  if (need_header) {
    out_ << header << '\n';
    out_.flush();
    if (!out_) throw Error("cannot write log header");
  }
}

void JudgmentLog::Append(json record) {
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw Error("log append failed for " + path_.string());
  records_.push_back(std::move(record));
}

std::string UtcTimestamp() {
  using namespace std::chrono;
  auto now = system_clock::now();
  std::time_t t = system_clock::to_time_t(now);
  auto ms = duration_cast<milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02d.%03dZ",
                tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                tm.tm_min, tm.tm_sec, static_cast<int>(ms));
  return buf;
}

AdjudicationService::AdjudicationService(std::vector<Task> tasks,
                                         const std::filesystem::path &log_path,
                                         Clock clock)
    : state_(std::move(tasks)),
      log_(log_path, TasksFingerprint(state_.tasks())),
      clock_(std::move(clock)) {
  size_t n = 0;
  for (const json &record : log_.records()) {
    ++n;
    try {
      const std::string kind = record.at("kind").get<std::string>();
      if (kind == "annotator") {
        state_.RegisterAnnotator(record.at("annotator").get<std::string>());
      } else if (kind == "judgment") {
        state_.Apply(SubmissionFromJson(record));
      } else {
        throw FormatError("unknown record kind '" + kind + "'");
      }
    } catch (const json::exception &e) {
      throw FormatError("log record " + std::to_string(n) + ": " + e.what());
    } catch (const Error &e) {
      throw FormatError("log record " + std::to_string(n) + ": " + e.what());
    }
  }
}

bool AdjudicationService::RegisterAnnotator(const std::string &id) {
  std::unique_lock lock(mu_);
  if (state_.HasAnnotator(id)) return false;
  AdjudicationState probe;
  probe.RegisterAnnotator(id);  // validates the id
  log_.Append({{"seq", log_.size() + 1},
               {"kind", "annotator"},
               {"annotator", id},
               {"received_at", clock_()}});
  state_.RegisterAnnotator(id);
  return true;
}

std::optional<Task> AdjudicationService::NextTask(
    std::string_view annotator) const {
  std::shared_lock lock(mu_);
  std::optional<size_t> id = state_.NextTask(annotator);
  if (!id) return std::nullopt;
  return state_.GetTask(*id);
}

Receipt AdjudicationService::Submit(const Submission &submission) {
  std::unique_lock lock(mu_);
  state_.Validate(submission);
  const Task &task = state_.GetTask(submission.task);
  Receipt receipt{log_.size() + 1, clock_()};
  json verdicts = json::array();
  for (const UnitVerdict &v : submission.verdicts) {
    verdicts.push_back(VerdictToJson(v, task.kind));
  }
  log_.Append({{"seq", receipt.sequence},
               {"kind", "judgment"},
               {"annotator", submission.annotator},
               {"task", submission.task},
               {"verdicts", std::move(verdicts)},
               {"received_at", receipt.received_at}});
  state_.Apply(submission);
  return receipt;
}

json AdjudicationService::Progress() const {
  std::shared_lock lock(mu_);
  json annotators = json::array();
  for (const std::string &id : state_.annotators()) {
    size_t judged = state_.JudgedCount(id);
    annotators.push_back({{"id", id},
                          {"judged", judged},
                          {"remaining", state_.tasks().size() - judged}});
  }
  return {{"tasks", state_.tasks().size()},
          {"judgments", state_.effective_count()},
          {"log_records", log_.size()},
          {"annotators", std::move(annotators)}};
}

AnnotatedCorpus AdjudicationService::ExportGroundTruth(size_t quorum) const {
  std::shared_lock lock(mu_);
  return state_.ExportGroundTruth(quorum);
}

AdjudicationState AdjudicationService::Snapshot() const {
  std::shared_lock lock(mu_);
  return state_;
}

size_t AdjudicationService::log_size() const {
  std::shared_lock lock(mu_);
  return log_.size();
}

}  // namespace kbner
