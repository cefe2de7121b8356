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
#include <string>
#include <string_view>
#include <vector>

#include "setsparse/sparse_vector.h"
#include "setsparse/vocabulary.h"

namespace setsparse {

struct TokenizeOptions {
    bool drop_stopwords = false;
};

/// Lowercases and splits on whitespace and punctuation (ASCII plus the
/// common Unicode space/punctuation blocks). Case folding covers ASCII and
/// Latin-1; other code points pass through untouched.
std::vector<std::string>
Tokenize(std::string_view text, const TokenizeOptions& options = {});

bool
IsStopword(std::string_view token);

/// Raw term-frequency vector.
SparseVector
EncodeTf(std::span<const std::string> tokens, Vocabulary& vocab);

/// Global statistics for BM25 document weighting.
struct CorpusStats {
    size_t doc_count = 0;
    std::vector<uint32_t> doc_freq;  // indexed by term-id, 0 for unseen terms
    double avg_doc_len = 0.0;

    [[nodiscard]] uint32_t
    DocFreq(TermId term) const {
        return term < doc_freq.size() ? doc_freq[term] : 0;
    }
};

/// Two-pass batch builder: Add() every tokenised document, then Finish().
class CorpusStatsBuilder {
public:
    explicit CorpusStatsBuilder(Vocabulary& vocab) : vocab_(vocab) {
    }

    void
    Add(std::span<const std::string> tokens);

    [[nodiscard]] CorpusStats
    Finish() const;

private:
    Vocabulary& vocab_;
    size_t doc_count_ = 0;
    size_t total_len_ = 0;
    std::vector<uint32_t> doc_freq_;
    std::vector<TermId> scratch_;
};

struct Bm25Params {
    double k1 = 0.9;
    double b = 0.4;
};

/// ln(1 + (N - df + 0.5) / (df + 0.5)); never negative.
double
Bm25Idf(size_t doc_count, uint32_t doc_freq);

/// Per-term BM25 impact weights for one document. Scoring a query with
/// Dot(EncodeTf(query), EncodeBm25Doc(doc)) reproduces Okapi BM25.
SparseVector
EncodeBm25Doc(std::span<const std::string> tokens,
              const CorpusStats& stats,
              Vocabulary& vocab,
              const Bm25Params& params = {});

}  // namespace setsparse
