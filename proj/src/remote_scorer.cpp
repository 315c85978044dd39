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

#include "reqnav/remote_scorer.hpp"

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <mutex>
#include <random>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "reqnav/errors.hpp"
#include "reqnav/refine.hpp"

namespace reqnav {

using nlohmann::json;

struct RemoteScorer::Impl {
    std::mutex jitter_mutex;
    std::mt19937_64 jitter_rng;
    // Bounds concurrent requests; plain counter + mutex keeps the toolchain
    // requirements modest.
    std::mutex inflight_mutex;
    std::condition_variable inflight_cv;
    int inflight = 0;
};

RemoteScorer::RemoteScorer(Options options, Lexicon lexicon)
    : options_(std::move(options)),
      lexicon_(std::move(lexicon)),
      impl_(std::make_unique<Impl>()) {
    impl_->jitter_rng.seed(options_.seed);
}

RemoteScorer::~RemoteScorer() = default;

json RemoteScorer::post(const std::string &path, const json &body) const {
    {
        std::unique_lock<std::mutex> lock(impl_->inflight_mutex);
        impl_->inflight_cv.wait(lock, [this] {
            return impl_->inflight < options_.max_inflight;
        });
        ++impl_->inflight;
    }
    struct Release {
        Impl *impl;
        ~Release() {
            {
                std::lock_guard<std::mutex> lock(impl->inflight_mutex);
                --impl->inflight;
            }
            impl->inflight_cv.notify_one();
        }
    } release{impl_.get()};

    const std::string payload = body.dump();
    std::string last_error = "unreachable";
    int attempts = 0;
    for (int attempt = 0; attempt <= options_.retries; ++attempt) {
        ++attempts;
        if (attempt > 0) {
            std::uint64_t jitter_ms;
            {
                std::lock_guard<std::mutex> lock(impl_->jitter_mutex);
                jitter_ms = 10 + impl_->jitter_rng() % 40;
            }
            std::this_thread::sleep_for(std::chrono::milliseconds(jitter_ms));
        }
        httplib::Client client(options_.endpoint);
        client.set_connection_timeout(0, options_.timeout_ms * 1000);
        client.set_read_timeout(0, options_.timeout_ms * 1000);
        auto res = client.Post(path, payload, "application/json");
        if (!res) {
            last_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status >= 500) {
            last_error = "server status " + std::to_string(res->status);
            continue;
        }
        if (res->status != 200) {
            throw MalformedReply("unexpected status " + std::to_string(res->status) +
                                 " from " + path);
        }
        try {
            return json::parse(res->body);
        } catch (const json::exception &e) {
            throw MalformedReply(std::string("reply is not JSON: ") + e.what());
        }
    }
    throw ScorerUnavailable(last_error + " (" + options_.endpoint + path + ")", attempts);
}

ExploreResult RemoteScorer::page_explore(const std::string &requirement,
                                         const UIState &state, int k) const {
    json request;
    request["requirement"] = requirement;
    request["page"] = ui_tree_to_json(state.root());
    request["k"] = k;
    json reply = post("/v1/explore", request);

    if (!reply.is_object() || !reply.contains("is_entry") || !reply["is_entry"].is_boolean()) {
        throw MalformedReply("explore reply must carry boolean 'is_entry'");
    }
    ExploreResult result;
    result.is_entry = reply["is_entry"].get<bool>();
    const json candidates = reply.value("candidates", json::array());
    if (!candidates.is_array()) {
        throw MalformedReply("'candidates' must be an array");
    }
    for (const json &cj : candidates) {
        CandidateOp cand;
        try {
            cand.op.selector = selector_from_json(cj.at("selector"));
            cand.op.action = action_from_json(cj.at("action"));
            int level = cj.at("level").get<int>();
            if (level < 1 || level > 5) {
                throw MalformedReply("relevance level out of range: " +
                                     std::to_string(level));
            }
            cand.atomic = RelevanceLevel{level};
            cand.rationale = cj.value("rationale", "");
        } catch (const json::exception &e) {
            throw MalformedReply(std::string("candidate: ") + e.what());
        } catch (const ParseError &e) {
            throw MalformedReply(e.what());
        } catch (const InvalidRegex &e) {
            throw MalformedReply(e.what());
        }
        // Candidates must act on this state; repair hallucinated selectors and
        // drop the ones the refiner cannot save.
        if (resolve_selector(state, cand.op.selector).empty()) {
            try {
                cand.op.selector = refine(cand.op.selector, state);
            } catch (const Unrepairable &) {
                continue;
            }
        }
        if (result.candidates.size() < static_cast<size_t>(std::max(1, k))) {
            result.candidates.push_back(std::move(cand));
        }
    }
    std::stable_sort(result.candidates.begin(), result.candidates.end(),
                     [](const CandidateOp &a, const CandidateOp &b) {
                         return a.atomic.level > b.atomic.level;
                     });
    if (result.is_entry && result.candidates.empty()) {
        throw MalformedReply("entry state reported without usable trigger operations");
    }
    return result;
}

std::optional<json>
RemoteScorer::plan_script_json(const std::string &requirement, const UIState &state,
                               const std::vector<Operation> &trigger_ops) const {
    json request;
    request["requirement"] = requirement;
    request["page"] = ui_tree_to_json(state.root());
    request["trigger_ops"] = json::array();
    for (const Operation &op : trigger_ops) {
        request["trigger_ops"].push_back(operation_to_json(op));
    }
    json reply = post("/v1/script", request);
    if (!reply.is_object() || !reply.contains("steps")) {
        throw MalformedReply("script reply must carry 'steps'");
    }
    return reply["steps"];
}

std::optional<json>
RemoteScorer::plan_oracle_json(const std::string &requirement, const UIState &pre,
                               const UIState &post, const std::vector<Operation> &ops,
                               int eta) const {
    json request;
    request["requirement"] = requirement;
    request["pre"] = ui_tree_to_json(pre.root());
    request["post"] = ui_tree_to_json(post.root());
    request["ops"] = json::array();
    for (const Operation &op : ops) {
        request["ops"].push_back(operation_to_json(op));
    }
    request["eta"] = eta;
    return this->post("/v1/oracle", request);
}

} // namespace reqnav
