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

#include "kbner/adjudication_http.h"

#include <sstream>

#include "httplib.h"
#include "kbner/errors.h"

namespace kbner {
namespace {

using nlohmann::json;

void SendJson(httplib::Response &res, int status, const json &body) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void SendError(httplib::Response &res, int status, const std::string &message) {
  SendJson(res, status, {{"error", message}});
}

}  // namespace

struct AdjudicationServer::Impl {
  AdjudicationService &service;
  httplib::Server server;

  explicit Impl(AdjudicationService &s) : service(s) {}

  void Routes() {
    server.Get("/api/tasks/next", [this](const httplib::Request &req,
                                         httplib::Response &res) {
      if (!req.has_param("annotator")) {
        SendError(res, 400, "missing annotator parameter");
        return;
      }
      std::optional<Task> task =
          service.NextTask(req.get_param_value("annotator"));
      if (!task) {
        SendJson(res, 200, {{"task", nullptr}, {"done", true}});
      } else {
        SendJson(res, 200, {{"task", TaskToJson(*task)}, {"done", false}});
      }
    });

    server.Post("/api/judgments", [this](const httplib::Request &req,
                                         httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded()) {
        SendError(res, 400, "body is not valid JSON");
        return;
      }
      Submission submission = SubmissionFromJson(body);
      Receipt receipt = service.Submit(submission);
      SendJson(res, 200,
               {{"sequence", receipt.sequence},
                {"received_at", receipt.received_at},
                {"annotator", submission.annotator},
                {"task", submission.task}});
    });

    server.Post("/api/annotators", [this](const httplib::Request &req,
                                          httplib::Response &res) {
      json body = json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("id") ||
          !body["id"].is_string()) {
        SendError(res, 400, "expected {\"id\": string}");
        return;
      }
      std::string id = body["id"].get<std::string>();
      bool created = service.RegisterAnnotator(id);
      SendJson(res, created ? 201 : 200, {{"id", id}, {"created", created}});
    });

    server.Get("/api/progress",
               [this](const httplib::Request &, httplib::Response &res) {
                 SendJson(res, 200, service.Progress());
               });

    server.Get("/api/export", [this](const httplib::Request &req,
                                     httplib::Response &res) {
      size_t quorum = 3;
      if (req.has_param("quorum")) {
        const std::string text = req.get_param_value("quorum");
        if (text.empty() ||
            text.find_first_not_of("0123456789") != std::string::npos ||
            text.size() > 9 || std::stoul(text) == 0) {
          SendError(res, 400, "quorum must be a positive integer");
          return;
        }
        quorum = std::stoul(text);
      }
      std::ostringstream out;
      WriteCorpus(service.ExportGroundTruth(quorum), out);
      res.status = 200;
      res.set_content(out.str(), "text/tab-separated-values; charset=utf-8");
    });

    server.set_exception_handler([](const httplib::Request &,
                                    httplib::Response &res,
                                    std::exception_ptr ep) {
      try {
        std::rethrow_exception(ep);
      } catch (const NotFoundError &e) {
        SendError(res, 404, e.what());
      } catch (const ValidationError &e) {
        SendError(res, 400, e.what());
      } catch (const std::exception &e) {
        SendError(res, 500, e.what());
      } catch (...) {
        SendError(res, 500, "internal error");
      }
    });
  }
};

AdjudicationServer::AdjudicationServer(
    AdjudicationService &service,
    std::optional<std::filesystem::path> static_dir)
    : impl_(std::make_unique<Impl>(service)) {
  impl_->Routes();
  if (static_dir) {
    if (!impl_->server.set_mount_point("/", static_dir->string())) {
      throw NotFoundError("static directory " + static_dir->string() +
                          " does not exist");
    }
  }
}

AdjudicationServer::~AdjudicationServer() { Stop(); }

bool AdjudicationServer::Listen(const std::string &host, int port) {
  return impl_->server.listen(host, port);
}

int AdjudicationServer::Bind(const std::string &host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool AdjudicationServer::ListenAfterBind() {
  return impl_->server.listen_after_bind();
}

void AdjudicationServer::Stop() {
  if (impl_) impl_->server.stop();
}

bool AdjudicationServer::is_running() const {
  return impl_->server.is_running();
}

}  // namespace kbner
