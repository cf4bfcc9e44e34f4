// Copyright 2026 The cs-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csforge {

// Root of every error thrown by the library. The CLI maps any Error that
// escapes a subcommand to exit code 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public Error {
public:
    using Error::Error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Malformed input record. `line` is 1-based, 0 when not line-oriented.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line = 0)
        : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class DuplicateIdError : public ParseError {
public:
    DuplicateIdError(const std::string& id, std::size_t line)
        : ParseError("duplicate id \"" + id + "\"", line), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

class UnsupportedFormat : public Error {
public:
    using Error::Error;
};

class SilentSignalError : public Error {
public:
    using Error::Error;
};

// Accepting a candidate that fails the consecutive-Spanish-run rule.
class RuleViolation : public Error {
public:
    using Error::Error;
};

class AlreadyDecided : public Error {
public:
    using Error::Error;
};

class NotFound : public Error {
public:
    using Error::Error;
};

class ConflictError : public Error {
public:
    using Error::Error;
};

// Transport failure that survived every retry.
class NetworkError : public Error {
public:
    NetworkError(const std::string& what, int attempts)
        : Error(what + " (after " + std::to_string(attempts) + " attempts)"), attempts_(attempts) {}
    int attempts() const { return attempts_; }

private:
    int attempts_;
};

// Non-success HTTP status. The response body is kept verbatim.
class ServiceError : public Error {
public:
    ServiceError(int status, std::string body)
        : Error("service returned HTTP " + std::to_string(status) + ": " + body),
          status_(status), body_(std::move(body)) {}
    int status() const { return status_; }
    const std::string& body() const { return body_; }

private:
    int status_;
    std::string body_;
};

} // namespace csforge
