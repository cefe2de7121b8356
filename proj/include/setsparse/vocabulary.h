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

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace setsparse {

using TermId = uint32_t;

/// Identifies a Vocabulary instance. Vectors remember the tag of the
/// vocabulary they were built against so that mixing vocabularies is caught.
/// Tag 0 is reserved for "unbound" (e.g. a default-constructed empty vector).
using VocabTag = uint64_t;

inline constexpr VocabTag kUnboundVocab = 0;

/// Bijective mapping between term strings and dense term-ids [0, size()).
///
/// In kExtend mode unknown terms are appended on Resolve(); in kStrict mode
/// they raise kUnknownTerm. Freeze() switches to kStrict permanently. The
/// class is move-only: a copy would share the tag while being free to grow
/// differently.
class Vocabulary {
public:
    enum class Mode { kExtend, kStrict };

    explicit Vocabulary(Mode mode = Mode::kExtend);
    explicit Vocabulary(std::vector<std::string> terms, Mode mode = Mode::kStrict);

    Vocabulary(const Vocabulary&) = delete;
    Vocabulary&
    operator=(const Vocabulary&) = delete;
    Vocabulary(Vocabulary&&) noexcept = default;
    Vocabulary&
    operator=(Vocabulary&&) noexcept = default;

    [[nodiscard]] std::optional<TermId>
    Find(std::string_view term) const;

    /// Returns the id of `term`, adding it first when in extend mode.
    TermId
    Resolve(std::string_view term);

    [[nodiscard]] const std::string&
    Term(TermId id) const;

    [[nodiscard]] size_t
    size() const noexcept {
        return terms_.size();
    }

    [[nodiscard]] const std::vector<std::string>&
    terms() const noexcept {
        return terms_;
    }

    [[nodiscard]] VocabTag
    tag() const noexcept {
        return tag_;
    }

    [[nodiscard]] Mode
    mode() const noexcept {
        return mode_;
    }

    void
    set_mode(Mode mode) noexcept {
        mode_ = mode;
    }

    void
    Freeze() noexcept {
        mode_ = Mode::kStrict;
    }

private:
    TermId
    Append(std::string_view term);

    struct TermHash {
        using is_transparent = void;
        size_t
        operator()(std::string_view s) const noexcept {
            return std::hash<std::string_view>{}(s);
        }
    };

    VocabTag tag_;
    Mode mode_;
    std::vector<std::string> terms_;
    std::unordered_map<std::string, TermId, TermHash, std::equal_to<>> lookup_;
};

}  // namespace setsparse
