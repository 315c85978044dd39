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

#ifndef REQNAV_BENCH_HPP_
#define REQNAV_BENCH_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "reqnav/device.hpp"
#include "reqnav/lexicon.hpp"
#include "reqnav/oracle.hpp"
#include "reqnav/scorer.hpp"

namespace reqnav {

struct BenchCase {
    std::string case_id;
    std::string requirement;
    std::string app_path; // relative to the corpus directory
    bool correct = true;
    std::vector<std::string> mutation_ids; // applied in order for faulty cases
    std::map<std::string, std::string> tags;
};

struct Corpus {
    std::string dir;
    std::vector<BenchCase> cases;
    std::map<std::string, std::vector<Mutation>> mutations; // keyed by app id
    Lexicon lexicon;
};

/// Loads <dir>/manifest.json plus the referenced lexicon and mutations files.
Corpus load_corpus(const std::string &dir);

struct BenchConfig {
    int max_steps = 5;   // M
    int candidates = 3;  // k
    int eta = 3;
    int max_rounds = 3;
    std::string scorer_mode = "lexical"; // "lexical" | "remote"
    std::string endpoint;
    std::uint64_t seed = 0;              // remote retry jitter only
    int timeout_ms = 5000;
    int retries = 2;
    std::optional<std::string> trace_dir;
    std::optional<std::string> case_filter;
};

struct CaseResult {
    std::string case_id;
    std::string app_id;
    std::string variant;
    bool correct = true;
    bool phase1_ok = false;
    bool phase2_ok = false;
    bool phase3_ok = false;
    bool verdict_pass = false;
    Phase failed_phase = Phase::kNone; // exactly one failing phase on failure
    int steps_used = 0;
    std::string error; // first engine error surfaced, if any
    // Wall-clock per phase; kept out of the JSON report for determinism.
    double phase_ms[3] = {0, 0, 0};
    std::map<std::string, std::string> tags;
    std::string trace_path;
};

struct ConfusionMatrix {
    int tp = 0, fn = 0, tn = 0, fp = 0;
    void add(bool correct, bool pass) {
        if (correct) {
            (pass ? tp : fn) += 1;
        } else {
            (pass ? fp : tn) += 1;
        }
    }
    int total() const { return tp + fn + tn + fp; }
};

struct Metrics {
    std::optional<double> precision;   // tp / (tp + fp)
    std::optional<double> recall;      // tp / (tp + fn)
    std::optional<double> specificity; // tn / (tn + fp)
};

Metrics compute_metrics(const ConfusionMatrix &cm);

/// Staged success rates over the correct cases, paper style: phase 2 counts
/// successes among phase-1 survivors, and so on.
struct PhaseRates {
    int correct_total = 0;
    int phase1_ok = 0;
    int phase2_ok = 0; // among phase1_ok
    int phase3_ok = 0; // among phase2_ok
    int end_to_end = 0;
};

PhaseRates compute_phase_rates(const std::vector<CaseResult> &results);

/// One fraction as a percentage with one decimal, round-half-even.
std::string format_percent(double fraction);

/// Runs the full three-phase pipeline for one case. Engine errors are
/// recorded on the result, never thrown.
CaseResult run_case(const BenchCase &bench_case, const Corpus &corpus,
                    const BenchConfig &config, const Scorer &scorer);

struct BatchResult {
    std::vector<CaseResult> results;
    ConfusionMatrix confusion;
    Metrics metrics;
    PhaseRates phase_rates;
};

BatchResult run_batch(const Corpus &corpus, const BenchConfig &config, const Scorer &scorer);

nlohmann::json report_json(const BatchResult &batch, const BenchConfig &config);
std::string report_markdown(const BatchResult &batch, const BenchConfig &config);

/// Writes the JSON report to `path` and a markdown twin next to it
/// (extension swapped to .md). Throws IOError.
void write_reports(const BatchResult &batch, const BenchConfig &config,
                   const std::string &path);

const char *phase_name(Phase phase);

} // namespace reqnav

#endif // REQNAV_BENCH_HPP_
