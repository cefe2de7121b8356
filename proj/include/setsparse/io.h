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

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "setsparse/activations.h"
#include "setsparse/compose.h"
#include "setsparse/eval.h"
#include "setsparse/fusion.h"
#include "setsparse/sparse_vector.h"
#include "setsparse/vocabulary.h"

namespace setsparse {

/// Line-oriented input with "path:line" error context. Memory use is one
/// line at a time.
class LineReader {
public:
    explicit LineReader(const std::filesystem::path& path);

    /// Next line with content (blank lines are skipped); false at EOF.
    bool
    Next(std::string& line);

    [[nodiscard]] size_t
    line_number() const noexcept {
        return line_no_;
    }

    /// Throws kParse with the current location prefixed.
    [[noreturn]] void
    Fail(const std::string& message) const;

private:
    std::filesystem::path path_;
    std::ifstream in_;
    size_t line_no_ = 0;
};

// ---------------------------------------------------------------------------
// Vector JSONL: {"id": "...", "vector": {"term": weight, ...}}

struct VectorRecord {
    std::string id;
    SparseVector vector;
};

/// Streams vector records, resolving terms through `vocab` (extend mode adds
/// unseen terms). Ids must be unique within the file.
class VectorReader {
public:
    VectorReader(const std::filesystem::path& path, Vocabulary& vocab);

    std::optional<VectorRecord>
    Next();

private:
    LineReader lines_;
    Vocabulary& vocab_;
    std::unordered_set<std::string> seen_ids_;
};

std::vector<VectorRecord>
ReadVectors(const std::filesystem::path& path, Vocabulary& vocab);

/// One JSON line, terms in term-id order, weights in shortest round-trip form.
void
WriteVector(std::ostream& out, std::string_view id, const SparseVector& v, const Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Text JSONL for lexical encoding: {"id": "...", "text": "..."}

struct TextRecord {
    std::string id;
    std::string text;
};

std::vector<TextRecord>
ReadTexts(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Compositional query JSONL:
//   {"qid": "q1", "operator": "difference", "method": "disentangled",
//    "a": "qA" | {"term": w, ...}, "b": "qB" | {...},
//    "params": {"lambda": 0.5, "m": 5}}
// "method" and "params" are optional; string sides refer to ids in an atomic
// vector file.

struct QueryDefaults {
    std::optional<ComposeMethod> method_override;
    ComposeParams params;
};

std::vector<CompositionalQuery>
ReadQueries(const std::filesystem::path& path,
            Vocabulary& vocab,
            const std::map<std::string, SparseVector, std::less<>>* atomic_vectors,
            const QueryDefaults& defaults = {});

/// True when the first record of a JSONL file has a "qid" key (query file)
/// rather than an "id" key (vector file).
bool
LooksLikeQueryFile(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Composed query JSONL. Plain vectors use the vector format. Combined
// pseudo-term queries add the atomic sides needed for retrieval:
//   {"id": "q1", "vector": {"a∩b": w, ...},
//    "cpt": {"m": 5, "a": {...}, "b": {...}}}

struct ComposedRecord {
    std::string id;
    ComposedQuery query;
};

void
WriteComposed(std::ostream& out, std::string_view id, const ComposedQuery& q, size_t m,
              const Vocabulary& vocab);

std::vector<ComposedRecord>
ReadComposed(const std::filesystem::path& path, Vocabulary& vocab);

// ---------------------------------------------------------------------------
// Logit grid: tab-separated, first row term strings, one row per position.

LogitMatrix
ReadLogitGrid(const std::filesystem::path& path, Vocabulary& vocab);

// ---------------------------------------------------------------------------
// TREC qrels ("qid 0 docid grade") and runs ("qid Q0 docid rank score tag").

/// Duplicate (qid, doc) lines: the last one wins and a warning is appended.
Qrels
ReadQrels(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

struct RunEntry {
    std::string doc;
    size_t rank;
    double score;
};

struct QueryRun {
    std::string qid;
    std::vector<RunEntry> entries;
};

/// Queries keep first-appearance order.
struct Run {
    std::string tag;
    std::vector<QueryRun> queries;
};

/// Throws kParse on malformed lines or ranks that do not increase per qid.
Run
ReadRun(const std::filesystem::path& path);

/// Writes one query's ranked list with 1-based ranks and 6-decimal scores.
/// Throws kInternal if scores increase down the list.
void
WriteRanked(std::ostream& out, std::string_view qid, std::span<const RankedDoc> ranked,
            std::string_view tag);

void
WriteRun(std::ostream& out, const Run& run);

ScoredRun
ToScoredRun(const QueryRun& q);

std::map<std::string, std::vector<std::string>>
RankingsByQuery(const Run& run);

// ---------------------------------------------------------------------------
// Counterfactual pairs: whitespace separated "query1 query2 doc1 doc2" where
// doc1 is relevant to query1 and doc2 to query2.

std::vector<PairedQueries>
ReadPairs(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Evaluation report JSON.

void
WriteEvalReport(std::ostream& out, const EvalReport& report);

/// Per-query values of `metric` from a report written by WriteEvalReport.
std::map<std::string, double>
ReadPerQueryMetric(const std::filesystem::path& path, std::string_view metric);

/// Opens `path` for writing, throwing kIo on failure.
std::ofstream
OpenForWrite(const std::filesystem::path& path);

}  // namespace setsparse
