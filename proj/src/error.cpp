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

#include "qtompc/error.hpp"

namespace qtompc {

const char *error_code_name(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::ok:
            return "ok";
        case ErrorCode::invalid_argument:
            return "invalid-argument";
        case ErrorCode::numeric_error:
            return "numeric-error";
        case ErrorCode::solver_failure:
            return "solver-failure";
        case ErrorCode::hypothesis_violated:
            return "hypothesis-violated";
        case ErrorCode::degenerate_measurement:
            return "degenerate-measurement";
        case ErrorCode::config_error:
            return "config-error";
        case ErrorCode::io_error:
            return "io-error";
        case ErrorCode::partial_failure:
            return "partial-failure";
        case ErrorCode::internal_error:
            return "internal-error";
    }
    return "unknown";
}

}  // namespace qtompc
