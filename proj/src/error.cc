// Copyright 2026 The multicorr Authors
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

#include "multicorr/error.h"

namespace multicorr {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidDimension:
            return "InvalidDimension";
        case ErrorKind::InvalidProbability:
            return "InvalidProbability";
        case ErrorKind::DimensionMismatch:
            return "DimensionMismatch";
        case ErrorKind::NotHermitian:
            return "NotHermitian";
        case ErrorKind::DenseLimitExceeded:
            return "DenseLimitExceeded";
        case ErrorKind::ScanTooLarge:
            return "ScanTooLarge";
        case ErrorKind::InvalidDirection:
            return "InvalidDirection";
        case ErrorKind::ColumnCapExceeded:
            return "ColumnCapExceeded";
        case ErrorKind::SolverNumericalFailure:
            return "SolverNumericalFailure";
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::ParseError:
            return "ParseError";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &message)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message), kind_(kind) {
}

void fail(ErrorKind kind, const std::string &message) {
    throw Error(kind, message);
}

}  // namespace multicorr
