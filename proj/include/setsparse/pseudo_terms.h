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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setsparse/sparse_vector.h"
#include "setsparse/vocabulary.h"

namespace setsparse {

inline constexpr size_t kDefaultCptTopM = 5;

/// Separator used when pseudo-terms are rendered as strings ("a∩b").
inline constexpr std::string_view kPseudoTermSeparator = "\xE2\x88\xA9";

struct PseudoTerm {
    TermId left;
    TermId right;
    double weight;

    friend bool
    operator==(const PseudoTerm&, const PseudoTerm&) = default;
};

/// Sparse vector over term pairs (left, right), sorted lexicographically,
/// weights strictly positive.
class PseudoTermVector {
public:
    PseudoTermVector() = default;

    static PseudoTermVector
    FromCanonical(VocabTag tag, std::vector<PseudoTerm> entries);

    [[nodiscard]] std::span<const PseudoTerm>
    entries() const noexcept {
        return entries_;
    }

    [[nodiscard]] size_t
    nnz() const noexcept {
        return entries_.size();
    }

    [[nodiscard]] bool
    empty() const noexcept {
        return entries_.empty();
    }

    [[nodiscard]] VocabTag
    vocab_tag() const noexcept {
        return tag_;
    }

    /// 0 when the pair is absent.
    [[nodiscard]] double
    Get(TermId left, TermId right) const;

    friend bool
    operator==(const PseudoTermVector& a, const PseudoTermVector& b) {
        return a.entries_ == b.entries_;
    }

private:
    PseudoTermVector(VocabTag tag, std::vector<PseudoTerm> entries)
        : tag_(tag), entries_(std::move(entries)) {
    }

    VocabTag tag_ = kUnboundVocab;
    std::vector<PseudoTerm> entries_;
};

/// Outer product of top_m(a) and top_m(b) with weights sqrt(a_i * b_j).
/// Throws kCptDomain on negative weights.
PseudoTermVector
ExpandQuery(const SparseVector& a, const SparseVector& b, size_t m = kDefaultCptTopM);

/// Full D (x) D expansion: nnz(d)^2 pairs with weight sqrt(d_i * d_j).
PseudoTermVector
ExpandDoc(const SparseVector& d);

/// Materialises only the pairs that occur in `restrict_to`.
PseudoTermVector
ExpandDoc(const SparseVector& d, const PseudoTermVector& restrict_to);

/// Sum over shared pairs of q_w * d_w.
double
CptScore(const PseudoTermVector& query, const PseudoTermVector& doc_expansion);

/// (sum_i sqrt(a_i d_i)) * (sum_j sqrt(b_j d_j)); equals CptScore against the
/// full document expansion without materialising it.
double
CptScoreFactorized(const SparseVector& a_top, const SparseVector& b_top, const SparseVector& d);

/// An intersection query ready for retrieval: the atomic vectors (used for
/// candidate generation), their truncations and the expansion.
struct CptQuery {
    SparseVector a;
    SparseVector b;
    SparseVector a_top;
    SparseVector b_top;
    PseudoTermVector expansion;
};

CptQuery
MakeCptQuery(const SparseVector& a, const SparseVector& b, size_t m = kDefaultCptTopM);

std::string
PseudoTermKey(const Vocabulary& vocab, TermId left, TermId right);

/// Splits "a∩b" into its two term strings; nullopt if there is no separator.
std::optional<std::pair<std::string_view, std::string_view>>
SplitPseudoTermKey(std::string_view key);

}  // namespace setsparse
