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

#include <sstream>
#include <thread>

#include "adjudication_fixture.h"
#include "doctest.h"
#include "httplib.h"
#include "kbner/adjudication_http.h"

namespace kbner {
namespace {

using nlohmann::json;
using testing::CoarseTasks;
using testing::Confirm;
using testing::LabelAll;

// Serves `service` on a free local port for the lifetime of the object.
class RunningServer {
 public:
  explicit RunningServer(AdjudicationService &service) : server_(service) {
    port_ = server_.Bind("127.0.0.1", 0);
    REQUIRE(port_ > 0);
    thread_ = std::thread([this] { server_.ListenAfterBind(); });
    for (int i = 0; i < 200 && !server_.is_running(); ++i) {
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    REQUIRE(server_.is_running());
  }
  ~RunningServer() {
    server_.Stop();
    thread_.join();
  }

  httplib::Client Client() const { return httplib::Client("127.0.0.1", port_); }

 private:
  AdjudicationServer server_;
  int port_ = -1;
  std::thread thread_;
};

json Body(const httplib::Result &res) { return json::parse(res->body); }

std::string PostJson(httplib::Client &client, const std::string &path,
                     const json &body, int expected_status) {
  auto res = client.Post(path, body.dump(), "application/json");
  REQUIRE(res);
  CHECK(res->status == expected_status);
  return res->body;
}

TEST_CASE("http api") {
  testing::TempDir dir;
  AdjudicationService service(CoarseTasks(), dir / "log.jsonl");
  RunningServer running(service);
  httplib::Client client = running.Client();

  SUBCASE("annotator registration") {
    json r = json::parse(PostJson(client, "/api/annotators", {{"id", "a"}}, 201));
    CHECK(r["created"] == true);
    r = json::parse(PostJson(client, "/api/annotators", {{"id", "a"}}, 200));
    CHECK(r["created"] == false);
    PostJson(client, "/api/annotators", {{"name", "a"}}, 400);
    PostJson(client, "/api/annotators", {{"id", ""}}, 400);
  }

  SUBCASE("next task") {
    auto missing = client.Get("/api/tasks/next");
    REQUIRE(missing);
    CHECK(missing->status == 400);
    auto unknown = client.Get("/api/tasks/next?annotator=ghost");
    REQUIRE(unknown);
    CHECK(unknown->status == 404);

    service.RegisterAnnotator("a");
    auto res = client.Get("/api/tasks/next?annotator=a");
    REQUIRE(res);
    CHECK(res->status == 200);
    CHECK(res->get_header_value("Content-Type") == "application/json");
    json body = Body(res);
    CHECK(body["done"] == false);
    CHECK(body["task"]["id"] == 1);
    CHECK(body["task"]["units"].size() == 7);

    const AdjudicationState snapshot = service.Snapshot();
    for (const Task &t : snapshot.tasks()) service.Submit(Confirm(t, "a"));
    json done = Body(client.Get("/api/tasks/next?annotator=a"));
    CHECK(done["done"] == true);
    CHECK(done["task"].is_null());
  }

  SUBCASE("judgments") {
    service.RegisterAnnotator("a");
    const Task t = service.Snapshot().GetTask(1);
    json receipt = json::parse(PostJson(
        client, "/api/judgments", SubmissionToJson(LabelAll(t, "a", "PERSON")),
        200));
    CHECK(receipt["sequence"] == 2);
    CHECK(receipt["task"] == 1);
    CHECK(receipt["annotator"] == "a");
    CHECK(receipt["received_at"].get<std::string>().size() == 24);

    json bad = json::parse(PostJson(client, "/api/judgments",
                                    SubmissionToJson(LabelAll(t, "a", "PLACE")),
                                    400));
    CHECK(bad["error"].get<std::string>().find("PLACE") != std::string::npos);
    Submission ghost = LabelAll(t, "ghost", "PERSON");
    PostJson(client, "/api/judgments", SubmissionToJson(ghost), 404);
    Submission no_task = LabelAll(t, "a", "PERSON");
    no_task.task = 99;
    PostJson(client, "/api/judgments", SubmissionToJson(no_task), 404);
    auto garbage = client.Post("/api/judgments", "{nope", "application/json");
    REQUIRE(garbage);
    CHECK(garbage->status == 400);
    CHECK(service.log_size() == 2);

    json progress = Body(client.Get("/api/progress"));
    CHECK(progress["tasks"] == 10);
    CHECK(progress["judgments"] == 1);
    CHECK(progress["log_records"] == 2);
    CHECK(progress["annotators"][0]["id"] == "a");
    CHECK(progress["annotators"][0]["judged"] == 1);
    CHECK(progress["annotators"][0]["remaining"] == 9);
  }

  SUBCASE("export") {
    for (const char *id : {"a", "b", "c"}) {
      service.RegisterAnnotator(id);
      service.Submit(LabelAll(service.Snapshot().GetTask(1), id, "PERSON"));
    }
    auto res = client.Get("/api/export");
    REQUIRE(res);
    CHECK(res->status == 200);
    std::ostringstream expected;
    WriteCorpus(service.ExportGroundTruth(3), expected);
    CHECK(res->body == expected.str());
    std::istringstream in(res->body);
    CHECK(ReadCorpus(in).sentences[0].tags[0] == "B-PERSON");

    auto four = client.Get("/api/export?quorum=4");
    REQUIRE(four);
    std::istringstream in4(four->body);
    AnnotatedCorpus c4 = ReadCorpus(in4);
    CHECK(c4.Meta("quorum") == "4");
    CHECK(c4.sentences[0].tags[0] == "B-ORGANIZATION");

    for (const char *q : {"0", "x", "-1", ""}) {
      auto bad = client.Get(std::string("/api/export?quorum=") + q);
      REQUIRE(bad);
      CHECK(bad->status == 400);
    }
  }

  SUBCASE("unknown routes") {
    auto res = client.Get("/api/nothing");
    REQUIRE(res);
    CHECK(res->status == 404);
  }
}

TEST_CASE("static files are optional") {
  testing::TempDir dir;
  AdjudicationService service(CoarseTasks(), dir / "log.jsonl");
  CHECK_THROWS(AdjudicationServer(service, dir / "missing"));
  std::filesystem::create_directories(dir / "ui");
  testing::WriteFile(dir / "ui" / "index.html", "<p>ok</p>");
  AdjudicationServer server(service, dir / "ui");
  int port = server.Bind("127.0.0.1", 0);
  REQUIRE(port > 0);
  std::thread t([&] { server.ListenAfterBind(); });
  while (!server.is_running()) std::this_thread::sleep_for(std::chrono::milliseconds(5));
  httplib::Client client("127.0.0.1", port);
  auto res = client.Get("/index.html");
  REQUIRE(res);
  CHECK(res->body == "<p>ok</p>");
  server.Stop();
  t.join();
}

}  // namespace
}  // namespace kbner
