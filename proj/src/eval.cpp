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

#include "setsparse/eval.h"

#include <algorithm>
#include <cmath>


#include "setsparse/error.h"

namespace setsparse {

bool
Qrels::Set(const std::string& qid, const std::string& doc, int grade) {
    if (grade < 0) {
        throw Error(ErrorKind::kInvalidArgument, "relevance grades must be >= 0");
    }
    auto& judged = judgments_[qid];
    auto [it, inserted] = judged.insert_or_assign(doc, grade);
    return !inserted;
}

int
Qrels::Grade(std::string_view qid, std::string_view doc) const {
    const auto& judged = ForQuery(qid);
    auto it = judged.find(doc);
    return it == judged.end() ? 0 : it->second;
}

const std::map<std::string, int, std::less<>>&
Qrels::ForQuery(std::string_view qid) const {
    static const std::map<std::string, int, std::less<>> kEmpty;
    auto it = judgments_.find(qid);
    return it == judgments_.end() ? kEmpty : it->second;
}

size_t
Qrels::RelevantCount(std::string_view qid) const {
    const auto& judged = ForQuery(qid);
    return static_cast<size_t>(
        std::count_if(judged.begin(), judged.end(), [](const auto& kv) { return kv.second > 0; }));
}

std::vector<std::string>
Qrels::qids() const {
    std::vector<std::string> out;
    out.reserve(judgments_.size());
    for (const auto& [qid, judged] : judgments_) {
        out.push_back(qid);
    }
    return out;
}

namespace {

void
RequireDefined(const Qrels& qrels, std::string_view qid, size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::kInvalidArgument, "metric cutoff k must be >= 1");
    }
    if (qrels.RelevantCount(qid) == 0) {
        throw Error(ErrorKind::kUndefinedMetric,
                    "query '" + std::string(qid) + "' has no relevant documents");
    }
}

double
Discount(size_t rank) {
    return std::log2(static_cast<double>(rank) + 1.0);
}

}  // namespace

double
NdcgAtK(std::span<const std::string> ranking, const Qrels& qrels, std::string_view qid, size_t k) {
    RequireDefined(qrels, qid, k);
    const auto& judged = qrels.ForQuery(qid);
    double dcg = 0.0;
    size_t depth = std::min(k, ranking.size());
    for (size_t r = 0; r < depth; ++r) {
        auto it = judged.find(ranking[r]);
        if (it != judged.end() && it->second > 0) {
            dcg += it->second / Discount(r + 1);
        }
    }
    std::vector<int> ideal;
    for (const auto& [doc, grade] : judged) {
        if (grade > 0) {
            ideal.push_back(grade);
        }
    }
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double idcg = 0.0;
    for (size_t r = 0; r < std::min(k, ideal.size()); ++r) {
        idcg += ideal[r] / Discount(r + 1);
    }
    return dcg / idcg;
}

double
RecallAtK(std::span<const std::string> ranking, const Qrels& qrels, std::string_view qid, size_t k) {
    RequireDefined(qrels, qid, k);
    const auto& judged = qrels.ForQuery(qid);
    size_t found = 0;
    size_t depth = std::min(k, ranking.size());
    for (size_t r = 0; r < depth; ++r) {
        auto it = judged.find(ranking[r]);
        if (it != judged.end() && it->second > 0) {
            ++found;
        }
    }
    return static_cast<double>(found) / static_cast<double>(qrels.RelevantCount(qid));
}

std::string
MetricSpec::Name() const {
    return std::string(kind == MetricKind::kNdcg ? "ndcg" : "recall") + "@" + std::to_string(k);
}

std::vector<MetricSpec>
ParseMetricList(std::string_view list) {
    std::vector<MetricSpec> out;
    size_t start = 0;
    while (start <= list.size()) {
        size_t end = list.find(',', start);
        if (end == std::string_view::npos) {
            end = list.size();
        }
        std::string_view item = list.substr(start, end - start);
        auto at = item.find('@');
        std::string_view name = item.substr(0, at);
        MetricSpec spec{};
        if (name == "ndcg") {
            spec.kind = MetricKind::kNdcg;
        } else if (name == "recall") {
            spec.kind = MetricKind::kRecall;
        } else {
            throw Error(ErrorKind::kInvalidArgument,
                        "unknown metric '" + std::string(item) + "' (expected ndcg@K or recall@K)");
        }
        if (at == std::string_view::npos || at + 1 == item.size()) {
            throw Error(ErrorKind::kInvalidArgument, "metric '" + std::string(item) + "' needs a cutoff @K");
        }
        std::string digits(item.substr(at + 1));
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }) ||
            digits.size() > 9) {
            throw Error(ErrorKind::kInvalidArgument, "bad cutoff in metric '" + std::string(item) + "'");
        }
        spec.k = std::stoul(digits);
        if (spec.k == 0) {
            throw Error(ErrorKind::kInvalidArgument, "metric cutoff k must be >= 1");
        }
        out.push_back(spec);
        start = end + 1;
    }
    return out;
}

EvalReport
Evaluate(const std::map<std::string, std::vector<std::string>>& rankings,
         const Qrels& qrels,
         std::span<const MetricSpec> metrics) {
    EvalReport report;
    for (const auto& spec : metrics) {
        report.metrics.push_back({spec.Name(), 0.0, {}});
    }
    for (const auto& [qid, ranking] : rankings) {
        if (qrels.RelevantCount(qid) == 0) {
            report.undefined_qids.push_back(qid);
            continue;
        }
        for (size_t m = 0; m < metrics.size(); ++m) {
            double value = metrics[m].kind == MetricKind::kNdcg
                               ? NdcgAtK(ranking, qrels, qid, metrics[m].k)
                               : RecallAtK(ranking, qrels, qid, metrics[m].k);
            report.metrics[m].per_query.emplace(qid, value);
        }
    }
    for (auto& summary : report.metrics) {
        if (!summary.per_query.empty()) {
            double total = 0.0;
            for (const auto& [qid, value] : summary.per_query) {
                total += value;
            }
            summary.mean = total / static_cast<double>(summary.per_query.size());
        }
    }
    return report;
}

double
PairwiseAccuracy(std::span<const PairedQueries> pairs, const PairScorer& scorer) {
    if (pairs.empty()) {
        throw Error(ErrorKind::kUndefinedMetric, "pairwise accuracy over zero pairs");
    }
    size_t correct = 0;
    for (const auto& p : pairs) {
        bool first = scorer(p.query1, p.doc1) > scorer(p.query1, p.doc2);
        bool second = scorer(p.query2, p.doc2) > scorer(p.query2, p.doc1);
        if (first && second) {
            ++correct;
        }
    }
    return static_cast<double>(correct) / static_cast<double>(pairs.size());
}

InterferenceReport
InterferenceBins(std::span<const CompositionalQuery> queries,
                 const std::map<std::string, double>& per_query_metric,
                 size_t n_bins) {
    if (n_bins == 0) {
        throw Error(ErrorKind::kInvalidArgument, "number of bins must be >= 1");
    }
    InterferenceReport report;
    struct Item {
        double similarity;
        std::string qid;
        double metric;
    };
    std::vector<Item> items;
    for (const auto& q : queries) {
        if (q.op != SetOperator::kDifference || !q.b.has_value()) {
            throw Error(ErrorKind::kInvalidArgument,
                        "interference analysis needs difference queries; '" + q.qid + "' is " +
                            std::string(ToString(q.op)));
        }
        auto metric = per_query_metric.find(q.qid);
        if (metric == per_query_metric.end()) {
            report.warnings.push_back("no metric value for query '" + q.qid + "'; skipped");
            continue;
        }
        if (q.a.empty() || q.b->empty()) {
            report.warnings.push_back("query '" + q.qid + "' has an empty side; skipped");
            continue;
        }
        items.push_back({Cosine(q.a, *q.b), q.qid, metric->second});
    }
    if (items.empty()) {
        return report;
    }
    if (items.size() < n_bins) {
        report.warnings.push_back("only " + std::to_string(items.size()) + " queries for " +
                                  std::to_string(n_bins) + " bins; using " +
                                  std::to_string(items.size()));
        n_bins = items.size();
    }
    std::sort(items.begin(), items.end(), [](const Item& x, const Item& y) {
        return x.similarity < y.similarity || (x.similarity == y.similarity && x.qid < y.qid);
    });
    size_t n = items.size();
    size_t start = 0;
    for (size_t i = 0; i < n_bins && start < n; ++i) {
        size_t end = i + 1 == n_bins ? n : std::max(start + 1, (i + 1) * n / n_bins);
        while (end < n && items[end].similarity == items[end - 1].similarity) {
            ++end;
        }
        double total = 0.0;
        for (size_t j = start; j < end; ++j) {
            total += items[j].metric;
        }
        report.bins.push_back({items[start].similarity, items[end - 1].similarity,
                               total / static_cast<double>(end - start), end - start});
        start = end;
    }
    return report;
}

}  // namespace setsparse
