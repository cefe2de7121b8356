// Copyright 2026-present the setsparse authors
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

#include "setsparse/error.h"

namespace setsparse {

std::string_view
ErrorKindName(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::kInvalidArgument:
            return "invalid argument";
        case ErrorKind::kUnknownTerm:
            return "unknown term";
        case ErrorKind::kVocabularyMismatch:
            return "vocabulary mismatch";
        case ErrorKind::kDegenerateProjection:
            return "degenerate projection";
        case ErrorKind::kZeroNorm:
            return "zero norm";
        case ErrorKind::kCptDomain:
            return "pseudo-term domain";
        case ErrorKind::kDuplicateId:
            return "duplicate id";
        case ErrorKind::kUndefinedMetric:
            return "undefined metric";
        case ErrorKind::kParse:
            return "parse error";
        case ErrorKind::kIo:
            return "i/o error";
        case ErrorKind::kCorruptFile:
            return "corrupt file";
        case ErrorKind::kVersionMismatch:
            return "version mismatch";
        case ErrorKind::kInternal:
            return "internal error";
    }
    return "unknown";
}

}  // namespace setsparse
