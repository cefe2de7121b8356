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
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "setsparse/pseudo_terms.h"
#include "setsparse/sparse_vector.h"
#include "setsparse/vocabulary.h"

namespace setsparse {

using DocId = uint32_t;

struct Posting {
    DocId doc;
    double weight;

    friend bool
    operator==(const Posting&, const Posting&) = default;
};

struct Hit {
    DocId doc;
    double score;

    friend bool
    operator==(const Hit&, const Hit&) = default;
};

/// Ranked hits: scores nonincreasing, ties by ascending doc-id.
using SearchResult = std::vector<Hit>;

/// Ordering used for every ranked list in the library.
inline bool
RanksBefore(const Hit& x, const Hit& y) {
    return x.score > y.score || (x.score == y.score && x.doc < y.doc);
}

/// Exact sparse dot-product retrieval over per-term posting lists.
///
/// Scoring is term-at-a-time into a full accumulator; there is no dynamic
/// pruning because upper-bound pruning is unsound once query or document
/// weights can be negative. Documents that share no term with the query are
/// never returned, even when k would allow it. Immutable after build and safe
/// to search from many threads.
class InvertedIndex {
public:
    InvertedIndex() = default;

    [[nodiscard]] const Vocabulary&
    vocabulary() const noexcept {
        return *vocab_;
    }

    /// Shared so that query readers can resolve (and extend) terms against
    /// the index vocabulary. Terms appended after build have no postings.
    [[nodiscard]] const std::shared_ptr<Vocabulary>&
    shared_vocabulary() const noexcept {
        return vocab_;
    }

    [[nodiscard]] size_t
    doc_count() const noexcept {
        return doc_names_.size();
    }

    [[nodiscard]] const std::string&
    DocName(DocId doc) const {
        return doc_names_.at(doc);
    }

    [[nodiscard]] std::optional<DocId>
    FindDoc(std::string_view name) const;

    /// Number of term-ids with a posting list (the vocabulary size at build).
    [[nodiscard]] size_t
    posting_list_count() const noexcept {
        return postings_.size();
    }

    [[nodiscard]] std::span<const Posting>
    Postings(TermId term) const;

    /// Weight of `term` in `doc`, 0 when absent.
    [[nodiscard]] double
    DocWeight(TermId term, DocId doc) const;

    [[nodiscard]] bool
    has_negative_weights() const noexcept {
        return has_negative_weights_;
    }

    /// Reconstructs the stored document vectors (forward view), by doc-id.
    [[nodiscard]] std::vector<SparseVector>
    ForwardVectors() const;

    /// Top-k documents by dot(q, d). k >= 1.
    [[nodiscard]] SearchResult
    Search(const SparseVector& query, size_t k) const;

    /// Two-stage intersection retrieval: the top `candidate_pool` documents
    /// for MaxPool(a, b) are rescored with the factorised pseudo-term score.
    /// Candidates whose pseudo-term score is 0 share no pseudo-term with the
    /// query and are dropped, mirroring Search's untouched-document rule.
    [[nodiscard]] SearchResult
    SearchCpt(const CptQuery& query, size_t k, size_t candidate_pool) const;

    /// Little-endian binary format; see docs/formats.md.
    void
    Save(const std::filesystem::path& path) const;

    [[nodiscard]] std::string
    Serialize() const;

    static InvertedIndex
    Load(const std::filesystem::path& path);

    static InvertedIndex
    Deserialize(std::string_view bytes);

    static constexpr uint32_t kFormatVersion = 1;

private:
    friend class IndexBuilder;

    void
    CheckQueryVocab(VocabTag tag) const;

    std::shared_ptr<Vocabulary> vocab_ = std::make_shared<Vocabulary>();
    std::vector<std::string> doc_names_;
    std::unordered_map<std::string, DocId> doc_lookup_;
    std::vector<std::vector<Posting>> postings_;
    bool has_negative_weights_ = false;
};

/// Accumulates documents in insertion order (doc-id = insertion index).
class IndexBuilder {
public:
    explicit IndexBuilder(std::shared_ptr<Vocabulary> vocab);

    /// Throws kDuplicateId for a repeated name; empty vectors are registered
    /// but appear in no posting list.
    DocId
    Add(std::string name, const SparseVector& doc);

    [[nodiscard]] InvertedIndex
    Finish() &&;

private:
    InvertedIndex index_;
};

/// Index over the full document expansion D (x) D, one posting list per
/// materialised term pair. Memory grows with nnz(d)^2 per document, so it is
/// meant for small corpora and as a cross-check of the two-stage path.
class ExpandedCptIndex {
public:
    static ExpandedCptIndex
    Build(const InvertedIndex& base);

    [[nodiscard]] SearchResult
    Search(const CptQuery& query, size_t k) const;

    [[nodiscard]] size_t
    pseudo_term_count() const noexcept {
        return postings_.size();
    }

private:
    static uint64_t
    PairKey(TermId left, TermId right) {
        return (static_cast<uint64_t>(left) << 32) | right;
    }

    VocabTag tag_ = kUnboundVocab;
    size_t doc_count_ = 0;
    std::unordered_map<uint64_t, uint32_t> pair_ids_;
    std::vector<std::vector<Posting>> postings_;
};

/// Sorts `hits` with RanksBefore and keeps the first k.
void
SelectTopK(std::vector<Hit>& hits, size_t k);

}  // namespace setsparse
