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

#include "doctest.h"
#include "json.hpp"
#include "subprocess.h"
#include "test_util.h"

namespace kbner {
namespace {

using testing::DataPath;
using testing::ReadFile;
using testing::RunResult;

RunResult Kbner(const std::vector<std::string> &args, bool keep_stderr = false) {
  return testing::Run(KBNER_BINARY, args, keep_stderr);
}

std::string P(const std::filesystem::path &p) { return p.string(); }

TEST_CASE("usage errors exit with 1") {
  CHECK(Kbner({}).status == 1);
  CHECK(Kbner({"frobnicate"}).status == 1);
  CHECK(Kbner({"reduce-noise", "--in", P(DataPath("golden/corpus.tsv")),
               "--out", "-", "--mode", "xx"})
            .status == 1);
  CHECK(Kbner({"annotate", "--kb", P(DataPath("minikb.jsonl"))}).status == 1);
  CHECK(Kbner({"stats", "--in", "/nonexistent/file.tsv"}).status != 0);
  RunResult help = Kbner({"annotate", "--help"});
  CHECK(help.status == 0);
  for (const char *flag : {"--kb", "--dump", "--out", "--format",
                           "--lang-threshold", "--fold-case", "--jobs"}) {
    CHECK(help.out.find(flag) != std::string::npos);
  }
}

TEST_CASE("format errors exit with 2") {
  testing::TempDir dir;
  testing::WriteFile(dir / "bad.tsv", "#twnertc v1\nd\ta b\tB-X\n");
  RunResult r = Kbner({"stats", "--in", P(dir / "bad.tsv")}, true);
  CHECK(r.status == 2);
  CHECK(r.out.find("line 2") != std::string::npos);
  testing::WriteFile(dir / "map.tsv", "/a/b PLACE\n");
  CHECK(Kbner({"to-cga", "--in", P(DataPath("golden/corpus.tsv")), "--mapping",
               P(dir / "map.tsv"), "--out", "-"})
            .status == 2);
}

TEST_CASE("stats on an empty file") {
  testing::TempDir dir;
  testing::WriteFile(dir / "empty.tsv", "");
  RunResult r = Kbner({"stats", "--in", P(dir / "empty.tsv")});
  CHECK(r.status == 0);
  CHECK(r.out.find("# of Sentences                            0\n") == 0);
}

TEST_CASE("golden pipeline") {
  testing::TempDir dir;
  auto run = [&](std::vector<std::string> args) {
    RunResult r = Kbner(args, true);
    INFO(r.out);
    REQUIRE(r.status == 0);
    return r.out;
  };
  run({"build-gazetteer", "--kb", P(DataPath("minikb.jsonl")), "--out",
       P(dir / "gazetteer.tsv")});
  CHECK(ReadFile(dir / "gazetteer.tsv") ==
        ReadFile(DataPath("golden/gazetteer.tsv")));
  run({"annotate", "--kb", P(DataPath("minikb.jsonl")), "--dump",
       P(DataPath("fixture.dump")), "--out", P(dir / "corpus.tsv")});
  CHECK(ReadFile(dir / "corpus.tsv") == ReadFile(DataPath("golden/corpus.tsv")));
  run({"annotate", "--kb", P(DataPath("minikb.jsonl")), "--dump",
       P(DataPath("fixture.dump")), "--format", "conll", "--jobs", "3", "--out",
       P(dir / "corpus.conll")});
  CHECK(ReadFile(dir / "corpus.conll") ==
        ReadFile(DataPath("golden/corpus.conll")));
  for (const char *mode : {"di", "dd"}) {
    std::string name = std::string("corpus_") + mode + ".tsv";
    run({"reduce-noise", "--in", P(dir / "corpus.tsv"), "--mode", mode, "--out",
         P(dir / name)});
    CHECK(ReadFile(dir / name) == ReadFile(DataPath("golden/" + name)));
  }
  for (const char *suffix : {"", "_di", "_dd"}) {
    std::string in = std::string("corpus") + suffix + ".tsv";
    std::string out = std::string("cga") + suffix + ".tsv";
    run({"to-cga", "--in", P(dir / in), "--mapping",
         P(DataPath("minikb_mapping.tsv")), "--out", P(dir / out)});
    CHECK(ReadFile(dir / out) == ReadFile(DataPath("golden/" + out)));
    for (const std::string &base : {std::string("corpus") + suffix,
                                    std::string("cga") + suffix}) {
      CHECK(Kbner({"stats", "--in", P(dir / (base + ".tsv"))}).out ==
            ReadFile(DataPath("golden/stats_" + base + ".txt")));
    }
  }
  std::string json = run({"stats", "--in", P(dir / "cga.tsv"), "--json"});
  CHECK(json.find("\"label_tokens\"") != std::string::npos);
}

TEST_CASE("sample and eval") {
  testing::TempDir dir;
  const std::string corpus = P(DataPath("golden/cga.tsv"));
  std::string a = Kbner({"sample", "--in", corpus, "--mode", "tc",
                         "--sentences", "4", "--out", "-", "--rest",
                         P(dir / "rest.tsv")})
                      .out;
  CHECK(a == Kbner({"sample", "--in", corpus, "--mode", "tc", "--sentences",
                    "4", "--out", "-"})
                 .out);
  CHECK(a.find("#twnertc v1") == 0);

  RunResult same = Kbner({"eval", "--task", "coarse", "--pred", corpus, "--gt",
                          corpus, "--json"});
  REQUIRE(same.status == 0);
  nlohmann::json report = nlohmann::json::parse(same.out);
  CHECK(report["diff"]["changed"] == 0);
  CHECK(report["coarse"]["average"]["f1"] == 1.0);
  CHECK(Kbner({"eval", "--task", "bogus", "--pred", corpus, "--gt", corpus})
            .status == 1);
  CHECK(Kbner({"eval", "--task", "coarse", "--pred",
               P(DataPath("golden/corpus.tsv")), "--gt", corpus})
            .status == 0);
  CHECK(Kbner({"eval", "--task", "coarse", "--pred",
               P(DataPath("golden/corpus_di.tsv")), "--gt",
               P(DataPath("golden/cga_di.tsv"))})
            .status == 0);
}

}  // namespace
}  // namespace kbner
