#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "mipe/config.hpp"
#include "mipe/error.hpp"
#include "mipe/harness.hpp"
#include "mipe/idf.hpp"
#include "mipe/kernels.hpp"
#include "mipe/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

void apply_kernel_choice(const std::string& choice) {
  using mipe::kernels::Backend;
  if (choice == "auto") return;
  if (choice == "scalar") mipe::kernels::set_backend(Backend::Scalar);
  else if (choice == "avx2") mipe::kernels::set_backend(Backend::Avx2);
  else if (choice == "neon") mipe::kernels::set_backend(Backend::Neon);
  else throw mipe::Error("unknown kernel backend: " + choice);
}

int run_idf_build(const std::string& corpus_path, const std::string& out_path,
                  double mu_miss) {
  std::ifstream corpus(corpus_path);
  if (!corpus) throw mipe::Error("cannot open corpus: " + corpus_path);
  const auto dict = mipe::idf::IdfDictionary::build(corpus, mu_miss);
  dict.save(out_path);
  std::cout << "built idf dictionary: " << dict.size() << " words over "
            << dict.doc_count() << " sentences -> " << out_path << "\n";
  return kExitOk;
}

int run_score(const std::string& dataset_path, const std::string& idf_path,
              const std::string& embeddings_path,
              const std::vector<std::string>& metric_names,
              const std::vector<std::string>& external_paths,
              const std::string& config_path, const std::string& out_dir,
              unsigned threads) {
  mipe::config::Config cfg = config_path.empty()
                                 ? mipe::config::default_config()
                                 : mipe::config::load_config(config_path);

  mipe::pipeline::Resources res;
  res.costs = cfg.costs;
  res.sws = cfg.sws;
  res.adjustment = cfg.adjustment;
  res.options = cfg.pipeline;
  res.idf = mipe::idf::IdfDictionary::load(idf_path);
  if (cfg.mu_miss) res.idf.set_mu_miss(*cfg.mu_miss);
  res.embeddings = mipe::embedding::EmbeddingStore::load(embeddings_path,
                                                         &std::cerr);
  for (const auto& path : external_paths) {
    auto scores = mipe::metrics::ExternalScores::load(path);
    const std::string name = scores.name;
    if (!res.external.emplace(name, std::move(scores)).second) {
      throw mipe::Error("duplicate external metric '" + name + "'");
    }
  }

  const auto instances = mipe::harness::load_dataset(dataset_path);
  if (instances.empty()) throw mipe::Error("dataset has no instances");

  const auto rows =
      mipe::pipeline::score_dataset(instances, metric_names, res, threads);

  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw mipe::Error("cannot create output directory: " + out_dir);
  mipe::harness::write_instance_scores(rows, out_dir);
  mipe::harness::write_ratings(instances, out_dir);
  std::cout << "scored " << instances.size() << " instances x "
            << metric_names.size() << " metrics -> " << out_dir << "\n";
  return kExitOk;
}

int run_report(const std::string& scores_dir, const std::string& out_dir,
               const std::string& aggregation) {
  mipe::harness::RatingAggregation mode;
  if (aggregation == "duplicate") {
    mode = mipe::harness::RatingAggregation::Duplicate;
  } else if (aggregation == "mean") {
    mode = mipe::harness::RatingAggregation::Mean;
  } else {
    throw CLI::ValidationError("--aggregation must be 'duplicate' or 'mean'");
  }
  auto rows = mipe::harness::read_instance_scores(scores_dir);
  auto ratings = mipe::harness::read_ratings(scores_dir);
  const auto report =
      mipe::harness::build_report(std::move(rows), std::move(ratings), mode);
  mipe::harness::emit_report(report, out_dir.empty() ? scores_dir : out_dir);
  std::cout << "report written to " << (out_dir.empty() ? scores_dir : out_dir)
            << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"MIPE: augments NLG metric scores for code-mixed text and "
               "reports their correlation with human ratings"};
  app.require_subcommand(1);

  std::string kernel_choice = "auto";
  app.add_option("--kernels", kernel_choice,
                 "SIMD backend: auto, scalar, avx2, neon")
      ->default_val("auto");

  auto* idf_cmd = app.add_subcommand("idf", "idf dictionary tools");
  idf_cmd->require_subcommand(1);
  auto* idf_build = idf_cmd->add_subcommand("build",
                                            "build an idf dictionary from a "
                                            "one-sentence-per-line corpus");
  std::string corpus_path, dict_out;
  double mu_miss = 20.0;
  idf_build->add_option("--corpus", corpus_path, "corpus file")->required();
  idf_build->add_option("--out", dict_out, "output dictionary path")->required();
  idf_build->add_option("--mu-miss", mu_miss,
                        "idf value assigned to out-of-corpus words");

  auto* score = app.add_subcommand("score", "score a dataset");
  std::string dataset_path, idf_path, embeddings_path, config_path, score_out;
  std::vector<std::string> metric_names = {"bleu", "nist", "wer", "ter"};
  std::vector<std::string> external_paths;
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  score->add_option("--dataset", dataset_path, "JSON-lines dataset")->required();
  score->add_option("--idf", idf_path, "idf dictionary file")->required();
  score->add_option("--embeddings", embeddings_path,
                    "word2vec-format aligned embeddings")
      ->required();
  score->add_option("--metrics", metric_names,
                    "comma-separated metric names (native: bleu, nist, wer, "
                    "ter; external names come from --external-scores)")
      ->delimiter(',');
  score->add_option("--external-scores", external_paths,
                    "externally computed score file (repeatable)");
  score->add_option("--config", config_path, "JSON config file");
  score->add_option("--out", score_out, "output directory")->required();
  score->add_option("--threads", threads, "worker threads");

  auto* report = app.add_subcommand("report", "aggregate scores into tables");
  std::string scores_dir, report_out;
  std::string aggregation = "duplicate";
  report->add_option("--scores", scores_dir, "directory written by 'score'")
      ->required();
  report->add_option("--out", report_out,
                     "output directory (defaults to --scores)");
  report->add_option("--aggregation", aggregation,
                     "'duplicate' (one observation per rating) or 'mean'");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    apply_kernel_choice(kernel_choice);
    if (idf_build->parsed()) return run_idf_build(corpus_path, dict_out, mu_miss);
    if (score->parsed()) {
      return run_score(dataset_path, idf_path, embeddings_path, metric_names,
                       external_paths, config_path, score_out, threads);
    }
    if (report->parsed()) return run_report(scores_dir, report_out, aggregation);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const mipe::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
