// Copyright 2026 The qtompc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef QTOMPC_ERROR_HPP
#define QTOMPC_ERROR_HPP

#include <stdexcept>
#include <string>

namespace qtompc {

/// Error categories shared by the C++ core and the C API. Values match the
/// QT_ERR_* constants in qtompc.h.
enum class ErrorCode : int {
    ok = 0,
    invalid_argument = 1,
    numeric_error = 2,
    solver_failure = 3,
    hypothesis_violated = 4,
    degenerate_measurement = 5,
    config_error = 6,
    io_error = 7,
    partial_failure = 8,
    internal_error = 9,
};

const char *error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
   public:
    Error(ErrorCode code, const std::string &what) : std::runtime_error(what), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

   private:
    ErrorCode code_;
};

class InvalidArgument : public Error {
   public:
    explicit InvalidArgument(const std::string &what) : Error(ErrorCode::invalid_argument, what) {}
};

class NumericError : public Error {
   public:
    explicit NumericError(const std::string &what) : Error(ErrorCode::numeric_error, what) {}
};

class HypothesisViolated : public Error {
   public:
    explicit HypothesisViolated(const std::string &what) : Error(ErrorCode::hypothesis_violated, what) {}
};

class DegenerateMeasurement : public Error {
   public:
    explicit DegenerateMeasurement(const std::string &what) : Error(ErrorCode::degenerate_measurement, what) {}
};

class ConfigError : public Error {
   public:
    explicit ConfigError(const std::string &what) : Error(ErrorCode::config_error, what) {}
};

class IoError : public Error {
   public:
    explicit IoError(const std::string &what) : Error(ErrorCode::io_error, what) {}
};

}  // namespace qtompc

#endif
