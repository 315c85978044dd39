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

#include "reqnav/bench.hpp"

#include <cfenv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "reqnav/navigator.hpp"
#include "reqnav/trigger.hpp"

namespace reqnav {

using nlohmann::json;
namespace fs = std::filesystem;

const char *phase_name(Phase phase) {
    switch (phase) {
    case Phase::kPhase1: return "phase1";
    case Phase::kPhase2: return "phase2";
    case Phase::kPhase3: return "phase3";
    case Phase::kNone: break;
    }
    return "none";
}

// --- corpus ---------------------------------------------------------------------

Corpus load_corpus(const std::string &dir) {
    Corpus corpus;
    corpus.dir = dir;
    const fs::path manifest_path = fs::path(dir) / "manifest.json";
    std::ifstream in(manifest_path);
    if (!in) {
        throw ConfigError("cannot open corpus manifest: " + manifest_path.string());
    }
    json manifest;
    try {
        in >> manifest;
    } catch (const json::exception &e) {
        throw ConfigError("manifest: " + std::string(e.what()));
    }
    try {
        if (manifest.contains("lexicon")) {
            corpus.lexicon =
                Lexicon::load((fs::path(dir) / manifest["lexicon"].get<std::string>()).string());
        } else {
            corpus.lexicon = Lexicon::builtin();
        }
        if (manifest.contains("mutations")) {
            corpus.mutations = load_mutations(
                (fs::path(dir) / manifest["mutations"].get<std::string>()).string());
        }
        for (const json &cj : manifest.at("cases")) {
            BenchCase c;
            c.case_id = cj.at("case_id").get<std::string>();
            c.requirement = cj.at("requirement").get<std::string>();
            c.app_path = cj.at("app").get<std::string>();
            c.correct = cj.at("correct").get<bool>();
            if (cj.contains("mutation")) {
                c.mutation_ids.push_back(cj["mutation"].get<std::string>());
            }
            if (cj.contains("mutations")) {
                for (const json &m : cj["mutations"]) {
                    c.mutation_ids.push_back(m.get<std::string>());
                }
            }
            for (auto it = cj.value("tags", json::object()).begin();
                 it != cj.value("tags", json::object()).end(); ++it) {
                c.tags[it.key()] = it.value().get<std::string>();
            }
            if (!c.correct && c.mutation_ids.empty()) {
                throw ConfigError("faulty case " + c.case_id + " names no mutation");
            }
            corpus.cases.push_back(std::move(c));
        }
    } catch (const json::exception &e) {
        throw ConfigError("manifest: " + std::string(e.what()));
    }
    return corpus;
}

// --- metrics --------------------------------------------------------------------

Metrics compute_metrics(const ConfusionMatrix &cm) {
    Metrics m;
    if (cm.tp + cm.fp > 0) {
        m.precision = static_cast<double>(cm.tp) / (cm.tp + cm.fp);
    }
    if (cm.tp + cm.fn > 0) {
        m.recall = static_cast<double>(cm.tp) / (cm.tp + cm.fn);
    }
    if (cm.tn + cm.fp > 0) {
        m.specificity = static_cast<double>(cm.tn) / (cm.tn + cm.fp);
    }
    return m;
}

PhaseRates compute_phase_rates(const std::vector<CaseResult> &results) {
    PhaseRates rates;
    for (const CaseResult &r : results) {
        if (!r.correct) {
            continue;
        }
        rates.correct_total += 1;
        if (r.phase1_ok) {
            rates.phase1_ok += 1;
            if (r.phase2_ok) {
                rates.phase2_ok += 1;
                if (r.phase3_ok) {
                    rates.phase3_ok += 1;
                }
            }
        }
        if (r.verdict_pass) {
            rates.end_to_end += 1;
        }
    }
    return rates;
}

std::string format_percent(double fraction) {
    // Round half to even at one decimal so 81.25% renders as 81.2%.
    double scaled = fraction * 1000.0;
    int rounding_mode = std::fegetround();
    std::fesetround(FE_TONEAREST);
    double rounded = std::nearbyint(scaled);
    std::fesetround(rounding_mode);
    std::ostringstream out;
    out.setf(std::ios::fixed);
    out.precision(1);
    out << rounded / 10.0;
    return out.str();
}

// --- case runner -------------------------------------------------------------------

namespace {

double ms_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                     start)
        .count();
}

} // namespace

CaseResult run_case(const BenchCase &bench_case, const Corpus &corpus,
                    const BenchConfig &config, const Scorer &scorer) {
    CaseResult result;
    result.case_id = bench_case.case_id;
    result.correct = bench_case.correct;
    result.tags = bench_case.tags;

    json trace = json::object();
    trace["case_id"] = bench_case.case_id;
    trace["requirement"] = bench_case.requirement;
    json nav_trace = json::array();

    try {
        AppSpec app = load_app((fs::path(corpus.dir) / bench_case.app_path).string());
        for (const std::string &mutation_id : bench_case.mutation_ids) {
            auto it = corpus.mutations.find(app.app_id);
            const Mutation *found = nullptr;
            if (it != corpus.mutations.end()) {
                for (const Mutation &m : it->second) {
                    if (m.id == mutation_id) {
                        found = &m;
                        break;
                    }
                }
            }
            if (found == nullptr) {
                throw ConfigError("mutation " + mutation_id + " not defined for app " +
                                  app.app_id);
            }
            app = apply_mutation(app, *found);
        }
        result.app_id = app.app_id;
        result.variant = app.variant;
        trace["app_id"] = app.app_id;
        trace["variant"] = app.variant;

        auto shared_app = std::make_shared<const AppSpec>(app);
        DeviceSession session(shared_app);

        // Phase 1: navigation.
        auto t1 = std::chrono::steady_clock::now();
        NavResult nav = navigate(bench_case.requirement, session, config.max_steps,
                                 config.candidates, scorer,
                                 [&nav_trace](const json &line) { nav_trace.push_back(line); });
        result.phase_ms[0] = ms_since(t1);
        result.steps_used = nav.steps_used;
        trace["navigation"] = nav_trace;
        trace["steps_used"] = nav.steps_used;
        result.phase1_ok = nav.entry.has_value();
        if (!result.phase1_ok) {
            result.failed_phase = Phase::kPhase1;
        } else {
            trace["entry_digest"] = *nav.entry_digest;

            // Phase 2: presence check and execution.
            auto t2 = std::chrono::steady_clock::now();
            ExecutionOutcome outcome =
                iterate_until_complete(bench_case.requirement, session, scorer,
                                       config.max_rounds, config.candidates);
            result.phase_ms[1] = ms_since(t2);
            json executed = json::array();
            for (const Operation &op : outcome.executed_ops) {
                executed.push_back(operation_to_json(op));
            }
            trace["executed_ops"] = executed;
            json asserts = json::array();
            for (const AssertionResult &ar : outcome.assertion_results) {
                json aj = assertion_to_json(ar.assertion);
                aj["pass"] = ar.pass;
                asserts.push_back(std::move(aj));
            }
            trace["assertions"] = asserts;
            result.phase2_ok = outcome.presence == PresenceVerdict::kConfirmed;
            if (!result.phase2_ok) {
                result.failed_phase = Phase::kPhase2;
            } else {
                // Phase 3: oracle over a fresh deterministic replay.
                auto t3 = std::chrono::steady_clock::now();
                const std::vector<Operation> &entry_path =
                    nav.history.node(*nav.entry_digest).path;
                StatePair pair = capture_pre_post(*shared_app, entry_path, outcome.executed_ops);
                if (pair.post.digest() != outcome.reached.digest()) {
                    throw ReplayDiverged(outcome.executed_ops.size(),
                                         "captured post state disagrees with execution");
                }
                trace["pre_digest"] = pair.pre.digest();
                trace["post_digest"] = pair.post.digest();
                Verdict verdict;
                try {
                    std::vector<SubOracle> oracle =
                        generate_oracle(bench_case.requirement, pair, config.eta, scorer);
                    verdict = evaluate(oracle, pair);
                } catch (const NoDiffDerivable &e) {
                    verdict.pass = false;
                    verdict.attribution = Phase::kPhase3;
                    result.error = e.what();
                }
                result.phase_ms[2] = ms_since(t3);
                trace["oracle"] = verdict_to_json(verdict);
                result.phase3_ok = verdict.pass;
                if (!result.phase3_ok) {
                    result.failed_phase = Phase::kPhase3;
                }
            }
        }
    } catch (const Error &e) {
        result.error = e.what();
        if (result.failed_phase == Phase::kNone) {
            result.failed_phase = !result.phase1_ok  ? Phase::kPhase1
                                  : !result.phase2_ok ? Phase::kPhase2
                                                      : Phase::kPhase3;
        }
    }

    result.verdict_pass = result.phase1_ok && result.phase2_ok && result.phase3_ok;
    trace["verdict"] = result.verdict_pass ? "pass" : "fail";
    trace["failed_phase"] = phase_name(result.failed_phase);
    if (!result.error.empty()) {
        trace["error"] = result.error;
    }

    if (config.trace_dir) {
        fs::create_directories(*config.trace_dir);
        fs::path path = fs::path(*config.trace_dir) / (bench_case.case_id + ".json");
        std::ofstream out(path);
        if (out) {
            out << trace.dump(2) << '\n';
            result.trace_path = path.string();
        }
    }
    return result;
}

BatchResult run_batch(const Corpus &corpus, const BenchConfig &config, const Scorer &scorer) {
    BatchResult batch;
    for (const BenchCase &bench_case : corpus.cases) {
        if (config.case_filter && bench_case.case_id != *config.case_filter) {
            continue;
        }
        CaseResult result = run_case(bench_case, corpus, config, scorer);
        batch.confusion.add(result.correct, result.verdict_pass);
        batch.results.push_back(std::move(result));
    }
    batch.metrics = compute_metrics(batch.confusion);
    batch.phase_rates = compute_phase_rates(batch.results);
    return batch;
}

// --- reports -------------------------------------------------------------------

namespace {

json metric_json(const std::optional<double> &value) {
    if (!value) {
        return nullptr; // undefined marker, distinct from 0
    }
    json j;
    j["fraction"] = *value;
    j["percent"] = format_percent(*value);
    return j;
}

/// Per-tag confusion matrices for every value of `tag_key`, sorted by value.
std::map<std::string, ConfusionMatrix> split_by_tag(const std::vector<CaseResult> &results,
                                                    const std::string &tag_key) {
    std::map<std::string, ConfusionMatrix> out;
    for (const CaseResult &r : results) {
        auto it = r.tags.find(tag_key);
        if (it != r.tags.end()) {
            out[it->second].add(r.correct, r.verdict_pass);
        }
    }
    return out;
}

json tag_table_json(const std::map<std::string, ConfusionMatrix> &split) {
    json rows = json::array();
    for (const auto &[value, cm] : split) {
        Metrics m = compute_metrics(cm);
        rows.push_back({{"value", value},
                        {"tp", cm.tp},
                        {"fn", cm.fn},
                        {"tn", cm.tn},
                        {"fp", cm.fp},
                        {"precision", metric_json(m.precision)},
                        {"recall", metric_json(m.recall)},
                        {"specificity", metric_json(m.specificity)}});
    }
    return rows;
}

std::string ratio(int num, int den) {
    std::string out = std::to_string(num) + "/" + std::to_string(den);
    if (den > 0) {
        out += " (" + format_percent(static_cast<double>(num) / den) + "%)";
    }
    return out;
}

std::string metric_cell(const std::optional<double> &value) {
    return value ? format_percent(*value) + "%" : "n/a";
}

} // namespace

json report_json(const BatchResult &batch, const BenchConfig &config) {
    json j;
    j["config"] = {{"max_steps", config.max_steps},
                   {"candidates", config.candidates},
                   {"eta", config.eta},
                   {"max_rounds", config.max_rounds},
                   {"scorer", config.scorer_mode}};
    j["cases"] = json::array();
    for (const CaseResult &r : batch.results) {
        json cj = {{"case_id", r.case_id},
                   {"app_id", r.app_id},
                   {"variant", r.variant},
                   {"correct", r.correct},
                   {"phase1_ok", r.phase1_ok},
                   {"phase2_ok", r.phase2_ok},
                   {"phase3_ok", r.phase3_ok},
                   {"verdict", r.verdict_pass ? "pass" : "fail"},
                   {"failed_phase", phase_name(r.failed_phase)},
                   {"steps_used", r.steps_used}};
        if (!r.error.empty()) {
            cj["error"] = r.error;
        }
        if (!r.tags.empty()) {
            cj["tags"] = r.tags;
        }
        j["cases"].push_back(std::move(cj));
    }
    j["confusion_matrix"] = {{"tp", batch.confusion.tp},
                             {"fn", batch.confusion.fn},
                             {"tn", batch.confusion.tn},
                             {"fp", batch.confusion.fp}};
    j["metrics"] = {{"precision", metric_json(batch.metrics.precision)},
                    {"recall", metric_json(batch.metrics.recall)},
                    {"specificity", metric_json(batch.metrics.specificity)}};
    const PhaseRates &pr = batch.phase_rates;
    j["success_rates"] = {{"correct_cases", pr.correct_total},
                          {"phase1", {{"ok", pr.phase1_ok}, {"of", pr.correct_total}}},
                          {"phase2", {{"ok", pr.phase2_ok}, {"of", pr.phase1_ok}}},
                          {"phase3", {{"ok", pr.phase3_ok}, {"of", pr.phase2_ok}}},
                          {"end_to_end", {{"ok", pr.end_to_end}, {"of", pr.correct_total}}}};
    auto by_app = split_by_tag(batch.results, "app");
    if (!by_app.empty()) {
        j["per_app"] = tag_table_json(by_app);
    }
    auto by_category = split_by_tag(batch.results, "category");
    if (!by_category.empty()) {
        j["per_category"] = tag_table_json(by_category);
    }
    return j;
}

std::string report_markdown(const BatchResult &batch, const BenchConfig &config) {
    std::ostringstream out;
    out << "# Benchmark report\n\n";
    out << "Scorer: " << config.scorer_mode << ", M=" << config.max_steps
        << ", k=" << config.candidates << ", eta=" << config.eta
        << ", max rounds=" << config.max_rounds << "\n\n";

    const PhaseRates &pr = batch.phase_rates;
    out << "## Success rate (correct cases)\n\n";
    out << "| Phase 1 | Phase 2 | Phase 3 | End-to-End |\n";
    out << "|---|---|---|---|\n";
    out << "| " << ratio(pr.phase1_ok, pr.correct_total) << " | "
        << ratio(pr.phase2_ok, pr.phase1_ok) << " | " << ratio(pr.phase3_ok, pr.phase2_ok)
        << " | " << ratio(pr.end_to_end, pr.correct_total) << " |\n\n";

    const ConfusionMatrix &cm = batch.confusion;
    out << "## Discrimination\n\n";
    out << "| TP | FN | TN | FP | Precision | Recall | Specificity |\n";
    out << "|---|---|---|---|---|---|---|\n";
    out << "| " << cm.tp << " | " << cm.fn << " | " << cm.tn << " | " << cm.fp << " | "
        << metric_cell(batch.metrics.precision) << " | " << metric_cell(batch.metrics.recall)
        << " | " << metric_cell(batch.metrics.specificity) << " |\n\n";

    auto tag_table = [&out, &batch](const std::string &key, const std::string &title) {
        auto split = split_by_tag(batch.results, key);
        if (split.empty()) {
            return;
        }
        out << "## " << title << "\n\n";
        out << "| " << title << " | TP | FN | TN | FP | Precision | Recall | Specificity |\n";
        out << "|---|---|---|---|---|---|---|---|\n";
        for (const auto &[value, tag_cm] : split) {
            Metrics m = compute_metrics(tag_cm);
            out << "| " << value << " | " << tag_cm.tp << " | " << tag_cm.fn << " | "
                << tag_cm.tn << " | " << tag_cm.fp << " | " << metric_cell(m.precision)
                << " | " << metric_cell(m.recall) << " | " << metric_cell(m.specificity)
                << " |\n";
        }
        out << "\n";
    };
    tag_table("app", "Application");
    tag_table("category", "Category");

    out << "## Cases\n\n";
    out << "| Case | Variant | Correct | P1 | P2 | P3 | Verdict | Failed phase | Steps |\n";
    out << "|---|---|---|---|---|---|---|---|---|\n";
    for (const CaseResult &r : batch.results) {
        out << "| " << r.case_id << " | " << r.variant << " | " << (r.correct ? "yes" : "no")
            << " | " << (r.phase1_ok ? "ok" : "fail") << " | " << (r.phase2_ok ? "ok" : "fail")
            << " | " << (r.phase3_ok ? "ok" : "fail") << " | "
            << (r.verdict_pass ? "pass" : "fail") << " | " << phase_name(r.failed_phase)
            << " | " << r.steps_used << " |\n";
    }
    return out.str();
}

void write_reports(const BatchResult &batch, const BenchConfig &config,
                   const std::string &path) {
    {
        std::ofstream out(path);
        if (!out) {
            throw IOError("cannot write report: " + path);
        }
        out << report_json(batch, config).dump(2) << '\n';
    }
    fs::path md = fs::path(path).replace_extension(".md");
    std::ofstream out(md);
    if (!out) {
        throw IOError("cannot write report: " + md.string());
    }
    out << report_markdown(batch, config);
}

} // namespace reqnav
