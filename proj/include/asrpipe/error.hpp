// include/asrpipe/error.hpp

// Copyright 2026 asrpipe authors
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

#ifndef ASRPIPE_ERROR_HPP
#define ASRPIPE_ERROR_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace asrpipe {

// Root of the library exception hierarchy.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Problems caused by user-supplied inputs (files, configs, arguments).
// The CLI maps these to exit code 2; everything else maps to exit code 1.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(what) {}
};

class IoError : public InputError {
 public:
  explicit IoError(const std::string& what) : InputError(what) {}
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t line)
      : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class SchemaError : public InputError {
 public:
  SchemaError(const std::string& what, std::size_t line)
      : InputError(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DuplicateKeywordError : public InputError {
 public:
  DuplicateKeywordError(const std::string& surface, std::size_t first_line,
                        std::size_t second_line)
      : InputError("duplicate keyword \"" + surface + "\" (lines " +
                   std::to_string(first_line) + " and " + std::to_string(second_line) + ")"),
        surface_(surface) {}
  const std::string& surface() const { return surface_; }

 private:
  std::string surface_;
};

class UnknownCategoryError : public InputError {
 public:
  UnknownCategoryError(const std::string& value, std::size_t line)
      : InputError("unknown keyword category \"" + value + "\" (line " +
                   std::to_string(line) + ")") {}
};

class EmptyReferenceError : public InputError {
 public:
  explicit EmptyReferenceError(const std::string& what = "reference is empty after normalization")
      : InputError(what) {}
};

class EmptyDatasetError : public InputError {
 public:
  explicit EmptyDatasetError(const std::string& what = "dataset has no records")
      : InputError(what) {}
};

class EmptyInputError : public InputError {
 public:
  explicit EmptyInputError(const std::string& what = "empty input") : InputError(what) {}
};

class IdCollisionError : public InputError {
 public:
  explicit IdCollisionError(std::vector<std::string> ids)
      : InputError(format(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string format(const std::vector<std::string>& ids) {
    std::string out = "id collision on merge:";
    for (const auto& id : ids) out += " " + id;
    return out;
  }
  std::vector<std::string> ids_;
};

class MissingAudioError : public InputError {
 public:
  explicit MissingAudioError(std::vector<std::string> ids)
      : InputError(format(ids)), ids_(std::move(ids)) {}
  const std::vector<std::string>& ids() const { return ids_; }

 private:
  static std::string format(const std::vector<std::string>& ids) {
    std::string out = "missing audio for records:";
    for (const auto& id : ids) out += " " + id;
    return out;
  }
  std::vector<std::string> ids_;
};

// A synthesized or stored sample exceeds the 30 s audio cap.
class DurationExceededError : public InputError {
 public:
  explicit DurationExceededError(const std::string& what) : InputError(what) {}
};

// A remote endpoint kept failing after the retry budget was exhausted.
class EndpointError : public Error {
 public:
  EndpointError(const std::string& what, int status, int attempts)
      : Error(what + " (status " + std::to_string(status) + " after " +
              std::to_string(attempts) + " attempts)"),
        status_(status),
        attempts_(attempts) {}
  int status() const { return status_; }
  int attempts() const { return attempts_; }

 private:
  int status_;
  int attempts_;
};

class ExternalSegmenterError : public Error {
 public:
  explicit ExternalSegmenterError(const std::string& detail)
      : Error("external segmenter failure: " + detail) {}
};

}  // namespace asrpipe

#endif  // ASRPIPE_ERROR_HPP
