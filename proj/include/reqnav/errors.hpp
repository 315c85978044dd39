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

#ifndef REQNAV_ERRORS_HPP_
#define REQNAV_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace reqnav {

/// Base class for all engine errors. Every failure the engine can surface to a
/// caller is a subclass of this, so batch runners can catch one type.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string &what) : std::runtime_error(what) {}
};

// --- ui-model ---------------------------------------------------------------

class InvalidRegex : public Error {
public:
    explicit InvalidRegex(const std::string &pattern)
        : Error("invalid regex: " + pattern) {}
};

// --- device harness ---------------------------------------------------------

class DeviceError : public Error {
public:
    explicit DeviceError(const std::string &what) : Error(what) {}
};

class ParseError : public DeviceError {
public:
    explicit ParseError(const std::string &what) : DeviceError("parse error: " + what) {}
};

class SchemaError : public DeviceError {
public:
    explicit SchemaError(const std::string &field, const std::string &what)
        : DeviceError("schema error at '" + field + "': " + what), field_(field) {}
    const std::string &field() const { return field_; }

private:
    std::string field_;
};

class DanglingStateRef : public DeviceError {
public:
    explicit DanglingStateRef(const std::string &state_id)
        : DeviceError("reference to unknown state: " + state_id) {}
};

/// An operation's selector matched nothing in the current state. Distinct from
/// a matched-but-inert tap, which is a silent no-op.
class SelectorUnresolved : public DeviceError {
public:
    explicit SelectorUnresolved(const std::string &what)
        : DeviceError("selector unresolved: " + what) {}
};

class TargetNotFound : public DeviceError {
public:
    explicit TargetNotFound(const std::string &what)
        : DeviceError("mutation target not found: " + what) {}
};

// --- scorer -----------------------------------------------------------------

class ScorerUnavailable : public Error {
public:
    ScorerUnavailable(const std::string &what, int attempts)
        : Error("scorer unavailable after " + std::to_string(attempts) +
                " attempt(s): " + what),
          attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

class MalformedReply : public Error {
public:
    explicit MalformedReply(const std::string &detail)
        : Error("malformed scorer reply: " + detail) {}
};

class EmptyPath : public Error {
public:
    EmptyPath() : Error("path score of an empty gamma sequence") {}
};

// --- navigator --------------------------------------------------------------

class ReplayDiverged : public Error {
public:
    ReplayDiverged(size_t step_index, const std::string &what)
        : Error("replay diverged at step " + std::to_string(step_index) + ": " + what),
          step_index_(step_index) {}
    size_t step_index() const { return step_index_; }

private:
    size_t step_index_;
};

// --- trigger executor -------------------------------------------------------

class UnplannableRequirement : public Error {
public:
    explicit UnplannableRequirement(const std::string &requirement)
        : Error("no terminal assertion derivable for requirement: " + requirement) {}
};

// --- oracle -----------------------------------------------------------------

/// The pre/post diff is empty and nothing on the post state matches the
/// requirement evidence. Phase 3 is inconclusive; callers count this as fail.
class NoDiffDerivable : public Error {
public:
    NoDiffDerivable() : Error("no sub-oracle derivable from pre/post states") {}
};

// --- selector refiner -------------------------------------------------------

class Unrepairable : public Error {
public:
    explicit Unrepairable(const std::string &what)
        : Error("selector unrepairable: " + what) {}
};

// --- bench ------------------------------------------------------------------

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string &what) : Error("config error: " + what) {}
};

class IOError : public Error {
public:
    explicit IOError(const std::string &what) : Error("io error: " + what) {}
};

} // namespace reqnav

#endif // REQNAV_ERRORS_HPP_
