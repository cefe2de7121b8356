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

#include <span>
#include <string_view>
#include <utility>
#include <vector>

#include "setsparse/vocabulary.h"

namespace setsparse {

/// Weights with magnitude below this are treated as zero and never stored.
inline constexpr double kZeroWeightEpsilon = 1e-12;

struct Entry {
    TermId term;
    double weight;

    friend bool
    operator==(const Entry&, const Entry&) = default;
};

/// Canonical sparse term-weight vector: entries strictly increasing by
/// term-id, no (near-)zero weights. Weights may be negative.
///
/// Immutable once built. A default-constructed vector is empty and unbound;
/// an unbound vector combines with a vector of any vocabulary.
class SparseVector {
public:
    SparseVector() = default;

    /// Canonicalises arbitrary entries: sorts by term-id, sums duplicates and
    /// drops zeros. Term-ids must be < vocab.size().
    static SparseVector
    FromEntries(const Vocabulary& vocab, std::vector<Entry> entries);

    /// Trusted constructor for entries already in canonical form; the
    /// invariants are checked in debug builds only.
    static SparseVector
    FromCanonical(VocabTag tag, std::vector<Entry> entries);

    [[nodiscard]] std::span<const Entry>
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

    /// Weight of `term`, 0 when absent. O(log nnz).
    [[nodiscard]] double
    Get(TermId term) const;

    [[nodiscard]] bool
    Contains(TermId term) const;

    [[nodiscard]] double
    SquaredNorm() const;

    [[nodiscard]] double
    Norm() const;

    [[nodiscard]] bool
    AllNonNegative() const;

    friend bool
    operator==(const SparseVector& a, const SparseVector& b) {
        return a.entries_ == b.entries_;
    }

private:
    SparseVector(VocabTag tag, std::vector<Entry> entries)
        : tag_(tag), entries_(std::move(entries)) {
    }

    VocabTag tag_ = kUnboundVocab;
    std::vector<Entry> entries_;
};

/// Builds a vector from (term, weight) pairs, resolving terms through
/// `vocab` (which extends itself when in extend mode). Duplicate terms are
/// summed; non-finite weights are rejected.
SparseVector
FromPairs(std::span<const std::pair<std::string_view, double>> pairs, Vocabulary& vocab);

SparseVector
FromPairs(std::initializer_list<std::pair<std::string_view, double>> pairs, Vocabulary& vocab);

double
Dot(const SparseVector& a, const SparseVector& b);

SparseVector
Add(const SparseVector& a, const SparseVector& b);

SparseVector
Sub(const SparseVector& a, const SparseVector& b);

SparseVector
Scale(const SparseVector& a, double lambda);

/// a - lambda * b, evaluated per term in a single pass.
SparseVector
SubScaled(const SparseVector& a, const SparseVector& b, double lambda);

/// Elementwise max with missing entries read as 0, so max(-1, missing)
/// yields 0 and the term disappears.
SparseVector
MaxPool(const SparseVector& a, const SparseVector& b);

/// `b` with every entry in the support of `support_of` removed.
SparseVector
MaskRemove(const SparseVector& b, const SparseVector& support_of);

/// (a.b / |b|^2) b. Throws kDegenerateProjection when |b| = 0.
SparseVector
Project(const SparseVector& a, const SparseVector& onto_b);

/// Throws kZeroNorm when either input has zero norm.
double
Cosine(const SparseVector& a, const SparseVector& b);

/// Keeps the m largest weights; ties go to the smaller term-id.
SparseVector
TopM(const SparseVector& a, size_t m);

/// Throws kVocabularyMismatch unless the tags agree (unbound matches all).
VocabTag
CheckSameVocab(const SparseVector& a, const SparseVector& b);

}  // namespace setsparse
