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

#ifndef KBNER_ADJUDICATION_HTTP_H_
#define KBNER_ADJUDICATION_HTTP_H_

#include <filesystem>
#include <memory>
#include <optional>
#include <string>

#include "kbner/adjudication.h"

namespace kbner {

// HTTP front end of the adjudication service:
//   GET  /api/tasks/next?annotator=ID
//   POST /api/judgments
//   POST /api/annotators
//   GET  /api/progress
//   GET  /api/export?quorum=3
// plus optional static assets at "/".
class AdjudicationServer {
 public:
  explicit AdjudicationServer(
      AdjudicationService &service,
      std::optional<std::filesystem::path> static_dir = std::nullopt);
  ~AdjudicationServer();

  AdjudicationServer(const AdjudicationServer &) = delete;
  AdjudicationServer &operator=(const AdjudicationServer &) = delete;

  // Binds and serves until Stop(). Returns false when the bind fails.
  bool Listen(const std::string &host, int port);
  // Binds without serving and returns the bound port, -1 on failure. Port 0
  // picks a free one. Call ListenAfterBind() to serve.
  int Bind(const std::string &host, int port);
  bool ListenAfterBind();
  void Stop();
  bool is_running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace kbner

#endif  // KBNER_ADJUDICATION_HTTP_H_
