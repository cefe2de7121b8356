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

#include "setsparse/vocabulary.h"

#include <atomic>
#include <limits>

#include "setsparse/error.h"

namespace setsparse {

namespace {

VocabTag
NextTag() {
    static std::atomic<VocabTag> counter{kUnboundVocab};
    return ++counter;
}

}  // namespace

Vocabulary::Vocabulary(Mode mode) : tag_(NextTag()), mode_(mode) {
}

Vocabulary::Vocabulary(std::vector<std::string> terms, Mode mode)
    : tag_(NextTag()), mode_(Mode::kExtend) {
    terms_.reserve(terms.size());
    for (auto& term : terms) {
        if (lookup_.contains(term)) {
            throw Error(ErrorKind::kDuplicateId, "duplicate vocabulary term '" + term + "'");
        }
        Append(term);
    }
    mode_ = mode;
}

std::optional<TermId>
Vocabulary::Find(std::string_view term) const {
    auto it = lookup_.find(term);
    if (it == lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

TermId
Vocabulary::Resolve(std::string_view term) {
    if (auto id = Find(term)) {
        return *id;
    }
    if (mode_ == Mode::kStrict) {
        throw Error(ErrorKind::kUnknownTerm, "unknown term '" + std::string(term) + "'");
    }
    return Append(term);
}

const std::string&
Vocabulary::Term(TermId id) const {
    if (id >= terms_.size()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "term-id " + std::to_string(id) + " out of range for vocabulary of size " +
                        std::to_string(terms_.size()));
    }
    return terms_[id];
}

TermId
Vocabulary::Append(std::string_view term) {
    if (term.empty()) {
        throw Error(ErrorKind::kInvalidArgument, "empty term string");
    }
    if (terms_.size() >= std::numeric_limits<TermId>::max()) {
        throw Error(ErrorKind::kInternal, "vocabulary exceeds 32-bit term-id space");
    }
    auto id = static_cast<TermId>(terms_.size());
    terms_.emplace_back(term);
    lookup_.emplace(terms_.back(), id);
    return id;
}

}  // namespace setsparse
