#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <doctest.h>

#include "testutil.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run(const std::string& args) {
  const std::string cmd = std::string(MIPE_CLI_BIN) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string output;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) output += buf;
  const int status = pclose(pipe);
  return {WEXITSTATUS(status), output};
}

std::string write_fixture_inputs(const testutil::TempDir& tmp) {
  tmp.file("corpus.txt",
           "koi dusra human being yeh kahe\n"
           "kya aapko samaj aaya\n"
           "market khula hai\n"
           "koi market aaya\n");
  tmp.file("vectors.txt",
           "3 3\n"
           "market 1 0 0\n"
           "bazaar 0.6 0.8 0\n"
           "khula 0 1 0\n");
  tmp.file("dataset.jsonl",
           R"({"id":"1","system":"WAC","candidate":"koee doosra human ye kahe",)"
           R"("references":["koi dusra human being yeh kahe"],"ratings":[9,8]})"
           "\n"
           R"({"id":"2","system":"WAC","candidate":"bazaar khula",)"
           R"("references":["market khula hai"],"ratings":[6,7]})"
           "\n"
           R"({"id":"3","system":"PAC","candidate":"kya aapko samaj",)"
           R"("references":["kya aapko samaj aaya"],"ratings":[4,5]})"
           "\n");
  tmp.file("bs.tsv",
           "name bs orientation higher range 0 1\n"
           "1\t0.9\n2\t0.85\n3\t0.8\n");
  return tmp.path.string();
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("full idf/score/report flow") {
  testutil::TempDir tmp;
  const auto dir = write_fixture_inputs(tmp);

  auto idf = run("idf build --corpus " + dir + "/corpus.txt --out " + dir +
                 "/dict.tsv");
  CHECK(idf.exit_code == 0);
  CHECK(std::filesystem::exists(dir + "/dict.tsv"));

  auto score = run("score --dataset " + dir + "/dataset.jsonl --idf " + dir +
                   "/dict.tsv --embeddings " + dir +
                   "/vectors.txt --metrics bleu,nist,wer,ter "
                   "--external-scores " +
                   dir + "/bs.tsv --out " + dir + "/scores --threads 2");
  CHECK(score.exit_code == 0);
  CHECK(std::filesystem::exists(dir + "/scores/instance_scores.csv"));
  CHECK(std::filesystem::exists(dir + "/scores/ratings.csv"));

  // External metrics only run when named in --metrics.
  auto score_bs = run("score --dataset " + dir + "/dataset.jsonl --idf " + dir +
                      "/dict.tsv --embeddings " + dir +
                      "/vectors.txt --metrics bleu,bs --external-scores " +
                      dir + "/bs.tsv --out " + dir + "/scores_bs");
  CHECK(score_bs.exit_code == 0);

  auto report = run("report --scores " + dir + "/scores");
  CHECK(report.exit_code == 0);
  CHECK(std::filesystem::exists(dir + "/scores/rating_means.csv"));
  CHECK(std::filesystem::exists(dir + "/scores/bucket_correlations.csv"));
  CHECK(std::filesystem::exists(dir + "/scores/variant_correlations.csv"));

  const auto csv = testutil::read_file(dir + "/scores/instance_scores.csv");
  // 3 instances x 4 requested metrics + header
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 13);
  const auto csv_bs = testutil::read_file(dir + "/scores_bs/instance_scores.csv");
  // 3 instances x (bleu, bs) + header
  CHECK(std::count(csv_bs.begin(), csv_bs.end(), '\n') == 7);
}

TEST_CASE("usage errors exit with 1") {
  auto r = run("score --nope");
  CHECK(r.exit_code == 1);
  auto unknown_metric_backend = run("--kernels warp score");
  CHECK(unknown_metric_backend.exit_code != 0);
}

TEST_CASE("data errors exit with 2") {
  testutil::TempDir tmp;
  const auto dir = write_fixture_inputs(tmp);
  tmp.file("bad.jsonl", "{not json\n");

  auto idf = run("idf build --corpus " + dir + "/corpus.txt --out " + dir +
                 "/dict.tsv");
  REQUIRE(idf.exit_code == 0);

  auto r = run("score --dataset " + dir + "/bad.jsonl --idf " + dir +
               "/dict.tsv --embeddings " + dir + "/vectors.txt --out " + dir +
               "/out");
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("error") != std::string::npos);

  auto missing = run("idf build --corpus " + dir + "/nothere.txt --out " + dir +
                     "/d.tsv");
  CHECK(missing.exit_code == 2);

  // Requesting an external metric with no loaded score file is a usage-level
  // mistake but surfaces as an unknown metric.
  auto no_ext = run("score --dataset " + dir + "/dataset.jsonl --idf " + dir +
                    "/dict.tsv --embeddings " + dir +
                    "/vectors.txt --metrics bs --out " + dir + "/out2");
  CHECK(no_ext.exit_code == 2);
  CHECK(no_ext.output.find("unknown metric") != std::string::npos);
}

TEST_CASE("scalar kernels flag works end to end") {
  testutil::TempDir tmp;
  const auto dir = write_fixture_inputs(tmp);
  auto idf = run("idf build --corpus " + dir + "/corpus.txt --out " + dir +
                 "/dict.tsv");
  REQUIRE(idf.exit_code == 0);
  auto r = run("--kernels scalar score --dataset " + dir + "/dataset.jsonl "
               "--idf " + dir + "/dict.tsv --embeddings " + dir +
               "/vectors.txt --metrics bleu --out " + dir + "/scalar_out");
  CHECK(r.exit_code == 0);
}

TEST_CASE("config file feeds the scoring run") {
  testutil::TempDir tmp;
  const auto dir = write_fixture_inputs(tmp);
  tmp.file("cfg.json", R"({"adjustment": {"normalize_mwp": false}})");
  tmp.file("bad_cfg.json", R"({"adjustment": {"epsilon": 0}})");
  auto idf = run("idf build --corpus " + dir + "/corpus.txt --out " + dir +
                 "/dict.tsv");
  REQUIRE(idf.exit_code == 0);

  auto ok = run("score --dataset " + dir + "/dataset.jsonl --idf " + dir +
                "/dict.tsv --embeddings " + dir + "/vectors.txt --config " +
                dir + "/cfg.json --metrics bleu --out " + dir + "/cfg_out");
  CHECK(ok.exit_code == 0);

  auto bad = run("score --dataset " + dir + "/dataset.jsonl --idf " + dir +
                 "/dict.tsv --embeddings " + dir + "/vectors.txt --config " +
                 dir + "/bad_cfg.json --metrics bleu --out " + dir + "/x");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("epsilon") != std::string::npos);
}

}  // TEST_SUITE
