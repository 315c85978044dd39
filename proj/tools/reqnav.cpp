// Copyright 2026 The reqnav Authors
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

#include <iostream>
#include <memory>

#include <CLI11.hpp>

#include "reqnav/bench.hpp"
#include "reqnav/errors.hpp"
#include "reqnav/remote_scorer.hpp"
#include "reqnav/scorer.hpp"

namespace {

int run_command(const std::string &corpus_dir, const reqnav::BenchConfig &config,
                const std::string &report_path) {
    reqnav::Corpus corpus = reqnav::load_corpus(corpus_dir);

    std::unique_ptr<reqnav::Scorer> scorer;
    if (config.scorer_mode == "remote") {
        reqnav::RemoteScorer::Options options;
        options.endpoint = config.endpoint;
        options.timeout_ms = config.timeout_ms;
        options.retries = config.retries;
        options.seed = config.seed;
        scorer = std::make_unique<reqnav::RemoteScorer>(options, corpus.lexicon);
    } else {
        scorer = std::make_unique<reqnav::LexicalScorer>(corpus.lexicon);
    }

    reqnav::BatchResult batch = reqnav::run_batch(corpus, config, *scorer);
    if (!report_path.empty()) {
        reqnav::write_reports(batch, config, report_path);
    }

    const reqnav::ConfusionMatrix &cm = batch.confusion;
    std::cout << "cases: " << cm.total() << "  pass: " << cm.tp + cm.fp
              << "  fail: " << cm.fn + cm.tn << "\n";
    std::cout << "confusion: TP=" << cm.tp << " FN=" << cm.fn << " TN=" << cm.tn
              << " FP=" << cm.fp << "\n";
    auto cell = [](const std::optional<double> &v) {
        return v ? reqnav::format_percent(*v) + "%" : std::string("n/a");
    };
    std::cout << "precision: " << cell(batch.metrics.precision)
              << "  recall: " << cell(batch.metrics.recall)
              << "  specificity: " << cell(batch.metrics.specificity) << "\n";
    if (!report_path.empty()) {
        std::cout << "report: " << report_path << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"requirement-driven GUI test generation engine"};
    app.require_subcommand(1);

    auto *run = app.add_subcommand("run", "run the three-phase pipeline over a corpus");
    std::string corpus_dir;
    std::string report_path;
    std::string case_id;
    std::string trace_dir;
    reqnav::BenchConfig config;
    run->add_option("--corpus", corpus_dir, "corpus directory with manifest.json")
        ->required();
    run->add_option("--case", case_id, "run a single case by id");
    run->add_option("--scorer", config.scorer_mode, "scorer backend")
        ->check(CLI::IsMember({"lexical", "remote"}))
        ->default_val("lexical");
    run->add_option("--endpoint", config.endpoint, "remote scorer base URL");
    run->add_option("--max-steps", config.max_steps, "exploration step budget M")
        ->default_val(5);
    run->add_option("--candidates", config.candidates, "candidate operations k")
        ->default_val(3);
    run->add_option("--eta", config.eta, "number of sub-oracles")->default_val(3);
    run->add_option("--max-rounds", config.max_rounds, "trigger script rounds")
        ->default_val(3);
    run->add_option("--timeout-ms", config.timeout_ms, "remote request timeout")
        ->default_val(5000);
    run->add_option("--retries", config.retries, "remote request retries")->default_val(2);
    run->add_option("--seed", config.seed, "seed for remote retry jitter")->default_val(0);
    run->add_option("--report", report_path, "write JSON report here (plus .md twin)");
    run->add_option("--trace-dir", trace_dir, "write per-case trace files here");

    CLI11_PARSE(app, argc, argv);

    if (!case_id.empty()) {
        config.case_filter = case_id;
    }
    if (!trace_dir.empty()) {
        config.trace_dir = trace_dir;
    }
    if (config.max_steps < 1 || config.candidates < 1 || config.eta < 1 ||
        config.max_rounds < 1) {
        std::cerr << "config error: M, k, eta and max-rounds must be >= 1\n";
        return 2;
    }
    if (config.scorer_mode == "remote" && config.endpoint.empty()) {
        std::cerr << "config error: --endpoint is required with --scorer remote\n";
        return 2;
    }

    try {
        return run_command(corpus_dir, config, report_path);
    } catch (const reqnav::ConfigError &e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const reqnav::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
