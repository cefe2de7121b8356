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

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "setsparse/compose.h"

namespace setsparse {

/// Relevance judgments: qid -> doc name -> grade (>= 0).
class Qrels {
public:
    /// Returns true when an existing judgment was overwritten.
    bool
    Set(const std::string& qid, const std::string& doc, int grade);

    [[nodiscard]] int
    Grade(std::string_view qid, std::string_view doc) const;

    /// Judgments for one query; empty map when the qid is unknown.
    [[nodiscard]] const std::map<std::string, int, std::less<>>&
    ForQuery(std::string_view qid) const;

    [[nodiscard]] size_t
    RelevantCount(std::string_view qid) const;

    [[nodiscard]] std::vector<std::string>
    qids() const;

private:
    std::map<std::string, std::map<std::string, int, std::less<>>, std::less<>> judgments_;
};

/// Graded NDCG with gain = grade and discount log2(rank + 1). Throws
/// kUndefinedMetric when the qid has no positive judgment, kInvalidArgument
/// for k = 0.
double
NdcgAtK(std::span<const std::string> ranking, const Qrels& qrels, std::string_view qid, size_t k);

/// Fraction of the qid's relevant (grade > 0) documents found in the top k.
double
RecallAtK(std::span<const std::string> ranking, const Qrels& qrels, std::string_view qid, size_t k);

enum class MetricKind { kNdcg, kRecall };

struct MetricSpec {
    MetricKind kind;
    size_t k;

    [[nodiscard]] std::string
    Name() const;
};

/// Parses "ndcg@10,recall@100".
std::vector<MetricSpec>
ParseMetricList(std::string_view list);

struct MetricSummary {
    std::string name;
    double mean = 0.0;
    std::map<std::string, double> per_query;
};

struct EvalReport {
    std::vector<MetricSummary> metrics;
    /// Queries in the run without any positive judgment (excluded).
    std::vector<std::string> undefined_qids;
};

/// Evaluates every qid of `rankings` that has positive judgments.
EvalReport
Evaluate(const std::map<std::string, std::vector<std::string>>& rankings,
         const Qrels& qrels,
         std::span<const MetricSpec> metrics);

/// A counterfactual query pair: doc1 is relevant to query1 and is the
/// contrasting (irrelevant) document for query2, and vice versa for doc2.
struct PairedQueries {
    std::string query1;
    std::string query2;
    std::string doc1;
    std::string doc2;
};

using PairScorer = std::function<double(std::string_view qid, std::string_view doc)>;

/// Fraction of pairs where both queries score their own relevant document
/// strictly above the counterfactual one. Ties count as failures.
double
PairwiseAccuracy(std::span<const PairedQueries> pairs, const PairScorer& scorer);

struct InterferenceBin {
    double lo;
    double hi;
    double mean_metric;
    size_t count;
};

struct InterferenceReport {
    std::vector<InterferenceBin> bins;
    std::vector<std::string> warnings;
};

/// Groups difference queries by cosine(a, b) into equal-population bins and
/// averages a per-query metric in each. Equal similarities never straddle a
/// bin boundary, so fewer bins than requested may come back. Queries without
/// a metric value or with a zero-norm side are skipped with a warning.
InterferenceReport
InterferenceBins(std::span<const CompositionalQuery> queries,
                 const std::map<std::string, double>& per_query_metric,
                 size_t n_bins);

}  // namespace setsparse
