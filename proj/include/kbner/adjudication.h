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

#ifndef KBNER_ADJUDICATION_H_
#define KBNER_ADJUDICATION_H_

#include <cstddef>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"
#include "kbner/corpus.h"
#include "kbner/evaluation.h"

namespace kbner {

enum class TaskKind { kCoarseCorrect, kFineRank };

std::string_view ToString(TaskKind kind);

// Something an annotator gives a verdict on. Coarse tasks have one unit per
// entity span and one per untagged word token; fine tasks one per span.
struct TaskUnit {
  size_t begin = 0;
  size_t end = 0;
  std::string label;                    // current label, "O" for none
  std::vector<std::string> candidates;  // fine tasks only, served order
};

struct Task {
  size_t id = 0;  // 1-based, file order
  TaskKind kind = TaskKind::kCoarseCorrect;
  AnnotatedSentence sentence;
  std::vector<TaskUnit> units;
};

// (1-based sentence, 0-based span) -> ranked candidate types.
using CandidateSidecar = std::map<UnitKey, std::vector<std::string>>;

// Lines "sentence TAB span TAB type|type|...", '#' comments. Throws
// FormatError.
CandidateSidecar ReadCandidates(std::istream &in);

// Coarse tasks unless `candidates` is given. Throws ValidationError when a
// coarse task carries fine labels or a fine span has no candidates.
std::vector<Task> BuildTasks(const AnnotatedCorpus &corpus,
                             const CandidateSidecar *candidates = nullptr);

std::string TasksFingerprint(const std::vector<Task> &tasks);

struct UnitVerdict {
  size_t unit = 0;
  std::string label;
  std::vector<std::string> ranking;
  std::optional<std::string> suggestion;

  bool operator==(const UnitVerdict &) const = default;
};

struct Submission {
  std::string annotator;
  size_t task = 0;
  std::vector<UnitVerdict> verdicts;

  bool operator==(const Submission &) const = default;
};

struct Receipt {
  size_t sequence = 0;
  std::string received_at;
};

// Pure, replayable service state.
class AdjudicationState {
 public:
  explicit AdjudicationState(std::vector<Task> tasks = {});

  const std::vector<Task> &tasks() const { return tasks_; }
  // Throws NotFoundError.
  const Task &GetTask(size_t id) const;

  // Returns false when already registered.
  bool RegisterAnnotator(const std::string &id);
  bool HasAnnotator(std::string_view id) const;
  const std::vector<std::string> &annotators() const { return annotators_; }

  // Throws NotFoundError (task, annotator) or ValidationError (verdicts).
  void Validate(const Submission &submission) const;
  // Validates, then replaces any earlier verdict of the same annotator.
  void Apply(const Submission &submission);

  // Lowest task id the annotator has not judged. Throws NotFoundError for an
  // unregistered annotator.
  std::optional<size_t> NextTask(std::string_view annotator) const;
  size_t JudgedCount(std::string_view annotator) const;
  size_t effective_count() const { return effective_.size(); }

  // One Judgment per (annotator, unit), from the latest submissions.
  std::vector<Judgment> EffectiveJudgments() const;

  // Merged ground truth in corpus form (task order). Coarse tasks replace
  // unit labels that reach the quorum; fine tasks carry merged rankings.
  // Column 5 holds the per-unit agreement counts.
  AnnotatedCorpus ExportGroundTruth(size_t quorum = 3) const;

  bool operator==(const AdjudicationState &other) const;

 private:
  std::vector<Task> tasks_;
  std::vector<std::string> annotators_;
  std::set<std::string, std::less<>> annotator_set_;
  std::map<std::pair<std::string, size_t>, Submission> effective_;
};

nlohmann::json TaskToJson(const Task &task);
nlohmann::json SubmissionToJson(const Submission &submission);
// Throws ValidationError on a malformed body.
Submission SubmissionFromJson(const nlohmann::json &body);

// Append-only newline-delimited log. The first line pins the task set.
class JudgmentLog {
 public:
  // Opens or creates the log. A torn trailing line (no newline) is cut
  // off; a header for another task set throws FormatError.
  JudgmentLog(std::filesystem::path path, std::string tasks_fingerprint);

  const std::vector<nlohmann::json> &records() const { return records_; }
  size_t size() const { return records_.size(); }

  // Writes and flushes one line.
  void Append(nlohmann::json record);

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::vector<nlohmann::json> records_;
};

std::string UtcTimestamp();

// Thread-safe service: concurrent readers, one writer. Every accepted write
// is appended to the log before it becomes visible in memory, and the state
// is rebuilt from the log on construction.
class AdjudicationService {
 public:
  using Clock = std::function<std::string()>;

  AdjudicationService(std::vector<Task> tasks,
                      const std::filesystem::path &log_path,
                      Clock clock = UtcTimestamp);

  // Logs and registers a new annotator; false when already known. Throws
  // ValidationError on an empty or non-printable id.
  bool RegisterAnnotator(const std::string &id);
  std::optional<Task> NextTask(std::string_view annotator) const;
  Receipt Submit(const Submission &submission);
  nlohmann::json Progress() const;
  AnnotatedCorpus ExportGroundTruth(size_t quorum = 3) const;

  AdjudicationState Snapshot() const;
  size_t log_size() const;

 private:
  mutable std::shared_mutex mu_;
  AdjudicationState state_;
  JudgmentLog log_;
  Clock clock_;
};

}  // namespace kbner

#endif  // KBNER_ADJUDICATION_H_
