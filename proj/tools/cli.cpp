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


#include "cli.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <thread>
#include <unordered_map>
#include <variant>
#include <vector>

#include <fmt/format.h>
#include <spdlog/cfg/env.h>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "setsparse/activations.h"
#include "setsparse/compose.h"
#include "setsparse/error.h"
#include "setsparse/eval.h"
#include "setsparse/fusion.h"
#include "setsparse/inverted_index.h"
#include "setsparse/io.h"
#include "setsparse/lexical.h"

namespace setsparse::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kVectorFormat =
    "Vector JSONL: one object per line, {\"id\": \"d1\", \"vector\": {\"term\": 1.5, ...}}.\n"
    "Ids are unique per file; weights are finite JSON numbers.\n";

constexpr const char* kQueryFormat =
    "Query JSONL: {\"qid\": \"q1\", \"operator\": \"difference\", \"method\": \"disentangled\",\n"
    "  \"a\": \"atomicA\" | {\"term\": w}, \"b\": \"atomicB\" | {...}, \"params\": {\"lambda\": 0.5, \"m\": 5}}\n"
    "operator: atomic | difference | union | intersection (b omitted only for atomic).\n"
    "method: atomic | subtract | ignore | disentangled | orthogonal | nrf (difference),\n"
    "  add | maxpool (union), add | maxpool | cpt (intersection).\n"
    "Defaults: difference -> disentangled, union -> maxpool, intersection -> cpt.\n"
    "String sides name ids in the --vectors file; \"method\" and \"params\" are optional.\n";

constexpr const char* kRunFormat =
    "Run (TREC): \"qid Q0 docid rank score tag\", rank from 1, score with 6 decimals.\n";

constexpr const char* kQrelsFormat =
    "Qrels (TREC): \"qid 0 docid grade\", integer grade >= 0; grade > 0 is relevant.\n"
    "A repeated (qid, docid) keeps the last grade and logs a warning.\n";

constexpr const char* kExitCodes =
    "Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.\n"
    "Log level: SPDLOG_LEVEL=debug|info|warn|error|off (default info, on stderr).\n";

/// Output target: a file path or "-" for stdout.
class Output {
public:
    explicit Output(const std::string& path) {
        if (path != "-") {
            file_ = OpenForWrite(path);
        }
    }

    std::ostream&
    stream() {
        return file_ ? static_cast<std::ostream&>(*file_) : std::cout;
    }

    void
    Close(const std::string& path) {
        stream().flush();
        if (!stream()) {
            throw Error(ErrorKind::kIo, "failed writing '" + path + "'");
        }
        if (file_) {
            file_->close();
        }
    }

private:
    std::optional<std::ofstream> file_;
};

using AtomicMap = std::map<std::string, SparseVector, std::less<>>;

AtomicMap
ReadAtomicMap(const std::string& path, Vocabulary& vocab) {
    AtomicMap out;
    if (path.empty()) {
        return out;
    }
    VectorReader reader(path, vocab);
    while (auto record = reader.Next()) {
        out.emplace(std::move(record->id), std::move(record->vector));
    }
    return out;
}

QueryDefaults
MakeDefaults(const std::string& method, double lambda, size_t m) {
    QueryDefaults defaults;
    if (!method.empty()) {
        defaults.method_override = ParseComposeMethod(method);
    }
    defaults.params.lambda = lambda;
    defaults.params.m = m;
    return defaults;
}

// ---------------------------------------------------------------------------

struct EncodeArgs {
    std::string input;
    std::string out;
    bool tf = false;
    bool bm25 = false;
    bool stopwords = false;
    double k1 = 0.9;
    double b = 0.4;
};

void
AddEncode(CLI::App& app, EncodeArgs& args) {
    auto* sub = app.add_subcommand("encode", "Encode raw text into lexical sparse vectors");
    sub->add_option("--input", args.input, "Text JSONL: {\"id\": \"d1\", \"text\": \"...\"} per line")
        ->required();
    sub->add_option("--out", args.out, "Output vector JSONL ('-' for stdout)")->required();
    auto* group = sub->add_option_group("weighting", "Exactly one weighting scheme");
    group->add_flag("--tf", args.tf, "Raw term frequencies (use for queries)");
    group->add_flag("--bm25", args.bm25,
                    "BM25 document impacts; dot(tf query, doc) equals Okapi BM25");
    group->require_option(1);
    sub->add_option("--k1", args.k1, "BM25 k1")->capture_default_str()->check(CLI::NonNegativeNumber);
    sub->add_option("--b", args.b, "BM25 b")->capture_default_str()->check(CLI::Range(0.0, 1.0));
    sub->add_flag("--stopwords", args.stopwords, "Drop a small English stopword list");
    sub->footer(std::string("Tokenisation lowercases and splits on whitespace and punctuation.\n") +
                kVectorFormat + kExitCodes);
}

void
RunEncode(const EncodeArgs& args) {
    auto texts = ReadTexts(args.input);
    Vocabulary vocab;
    TokenizeOptions options{args.stopwords};
    std::vector<std::vector<std::string>> tokens;
    tokens.reserve(texts.size());
    for (const auto& t : texts) {
        tokens.push_back(Tokenize(t.text, options));
    }
    std::optional<CorpusStats> stats;
    if (args.bm25) {
        CorpusStatsBuilder builder(vocab);
        for (const auto& t : tokens) {
            builder.Add(t);
        }
        stats = builder.Finish();
    }
    Output out(args.out);
    for (size_t i = 0; i < texts.size(); ++i) {
        auto v = args.bm25 ? EncodeBm25Doc(tokens[i], *stats, vocab, {args.k1, args.b})
                           : EncodeTf(tokens[i], vocab);
        WriteVector(out.stream(), texts[i].id, v, vocab);
    }
    out.Close(args.out);
    spdlog::info("encoded {} records, {} terms", texts.size(), vocab.size());
}

// ---------------------------------------------------------------------------

struct ActivateArgs {
    std::vector<std::string> logits;
    std::string out;
    std::string activation = "snrelu";
    double epsilon = 0.25;
    std::string neg_formula = "corrected";
    std::string aggregation = "sum";
};

void
AddActivate(CLI::App& app, ActivateArgs& args) {
    auto* sub = app.add_subcommand("activate", "Turn logit grids into sparse vectors");
    sub->add_option("--logits", args.logits, "Logit grid files (one vector each, id = file stem)")
        ->required()
        ->expected(1, -1);
    sub->add_option("--out", args.out, "Output vector JSONL ('-' for stdout)")->required();
    sub->add_option("--activation", args.activation, "splade (nonnegative) or snrelu (signed)")
        ->capture_default_str()
        ->check(CLI::IsMember({"splade", "snrelu"}));
    sub->add_option("--epsilon", args.epsilon, "SNReLU dead-zone half width")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--neg-formula", args.neg_formula,
                    "corrected: -log(1+ReLU(-x-eps)), odd; literal: -log(1+ReLU(-x+eps))")
        ->capture_default_str()
        ->check(CLI::IsMember({"corrected", "literal"}));
    sub->add_option("--aggregation", args.aggregation,
                    "SNReLU pooling over positions: sum (max pos + min neg) or absmax")
        ->capture_default_str()
        ->check(CLI::IsMember({"sum", "absmax"}));
    sub->footer(std::string("Logit grid: tab-separated, first row term strings, then one row per\n"
                            "input position with one finite value per term.\n") +
                kVectorFormat + kExitCodes);
}

void
RunActivate(const ActivateArgs& args) {
    ActivationConfig cfg;
    cfg.epsilon = args.epsilon;
    cfg.neg_formula = args.neg_formula == "literal" ? NegFormula::kLiteral : NegFormula::kCorrected;
    if (args.activation == "splade") {
        cfg.aggregation = Aggregation::kSpladeMax;
    } else {
        cfg.aggregation = args.aggregation == "absmax" ? Aggregation::kAbsMax : Aggregation::kSum;
    }
    Vocabulary vocab;
    std::vector<std::pair<std::string, SparseVector>> vectors;
    std::unordered_set<std::string> ids;
    for (const auto& path : args.logits) {
        std::string id = fs::path(path).stem().string();
        if (!ids.insert(id).second) {
            throw Error(ErrorKind::kDuplicateId, "two logit grids share the id '" + id + "'");
        }
        vectors.emplace_back(id, Activate(ReadLogitGrid(path, vocab), cfg));
    }
    Output out(args.out);
    for (const auto& [id, v] : vectors) {
        WriteVector(out.stream(), id, v, vocab);
    }
    out.Close(args.out);
}

// ---------------------------------------------------------------------------

struct IndexArgs {
    std::string vectors;
    std::string out;
};

void
AddIndex(CLI::App& app, IndexArgs& args) {
    auto* sub = app.add_subcommand("index", "Build an inverted index from document vectors");
    sub->add_option("--vectors", args.vectors, "Document vector JSONL")->required();
    sub->add_option("--out", args.out, "Index file to write")->required();
    sub->footer(std::string(kVectorFormat) +
                "Doc-ids follow file order. The index file is a checksummed binary format\n"
                "(see docs/formats.md).\n" +
                kExitCodes);
}

void
RunIndex(const IndexArgs& args) {
    auto vocab = std::make_shared<Vocabulary>();
    IndexBuilder builder(vocab);
    VectorReader reader(args.vectors, *vocab);
    size_t n = 0;
    while (auto record = reader.Next()) {
        builder.Add(std::move(record->id), record->vector);
        ++n;
    }
    auto index = std::move(builder).Finish();
    index.Save(args.out);
    spdlog::info("indexed {} documents over {} terms", n, vocab->size());
}

// ---------------------------------------------------------------------------

struct ComposeArgs {
    std::string queries;
    std::string vectors;
    std::string method;
    double lambda = 0.5;
    size_t m = kDefaultCptTopM;
    std::string out;
};

void
AddQueryOptions(CLI::App* sub, std::string& vectors, std::string& method, double& lambda, size_t& m) {
    sub->add_option("--vectors", vectors, "Atomic vector JSONL referenced by string sides");
    sub->add_option("--method", method, "Override the method of every non-atomic query")
        ->check(CLI::IsMember(
            {"subtract", "ignore", "disentangled", "orthogonal", "nrf", "add", "maxpool", "cpt"}));
    sub->add_option("--lambda", lambda, "NRF weight on b when a query gives none")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    sub->add_option("--m", m, "CPT per-side truncation when a query gives none")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
}

void
AddCompose(CLI::App& app, ComposeArgs& args) {
    auto* sub = app.add_subcommand("compose", "Compose set-operator queries into query vectors");
    sub->add_option("--queries", args.queries, "Compositional query JSONL")->required();
    AddQueryOptions(sub, args.vectors, args.method, args.lambda, args.m);
    sub->add_option("--out", args.out, "Composed vector JSONL ('-' for stdout)")->required();
    sub->footer(std::string(kQueryFormat) + kVectorFormat +
                "Intersection via cpt writes the pseudo-terms as \"a\xE2\x88\xA9" "b\" keys plus a\n"
                "\"cpt\": {\"m\", \"a\", \"b\"} field that search uses for retrieval.\n" +
                kExitCodes);
}

void
RunCompose(const ComposeArgs& args) {
    Vocabulary vocab;
    auto atomic = ReadAtomicMap(args.vectors, vocab);
    auto queries = ReadQueries(args.queries, vocab, args.vectors.empty() ? nullptr : &atomic,
                               MakeDefaults(args.method, args.lambda, args.m));
    std::vector<ComposedQuery> composed;
    composed.reserve(queries.size());
    for (const auto& q : queries) {
        composed.push_back(Compose(q));
    }
    Output out(args.out);
    for (size_t i = 0; i < queries.size(); ++i) {
        WriteComposed(out.stream(), queries[i].qid, composed[i], queries[i].params.m, vocab);
    }
    out.Close(args.out);
}

// ---------------------------------------------------------------------------

struct SearchArgs {
    std::string index;
    std::string queries;
    std::string vectors;
    std::string method;
    double lambda = 0.5;
    size_t m = kDefaultCptTopM;
    size_t k = 1000;
    size_t candidate_pool = 1000;
    size_t threads = 0;
    bool cpt_full = false;
    std::string tag = "setsparse";
    std::string out;
};

void
AddSearch(CLI::App& app, SearchArgs& args) {
    auto* sub = app.add_subcommand("search", "Retrieve the top-k documents for each query");
    sub->add_option("--index", args.index, "Index file from 'index'")->required();
    sub->add_option("--queries", args.queries,
                    "Composed vector JSONL, or a compositional query JSONL (detected by \"qid\")")
        ->required();
    AddQueryOptions(sub, args.vectors, args.method, args.lambda, args.m);
    sub->add_option("--k", args.k, "Documents per query")->capture_default_str()->check(CLI::PositiveNumber);
    sub->add_option("--candidate-pool", args.candidate_pool,
                    "CPT first-stage pool size (max-pooled atomic query)")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_flag("--cpt-full", args.cpt_full,
                  "Score CPT queries against a full pseudo-term index instead of rescoring a "
                  "candidate pool (memory grows with nnz(d)^2)");
    sub->add_option("--threads", args.threads, "Worker threads, 0 = available cores; output is identical")
        ->capture_default_str();
    sub->add_option("--tag", args.tag, "Run tag column")->capture_default_str();
    sub->add_option("--out", args.out, "Run file ('-' for stdout)")->required();
    sub->footer(std::string("Scores are exact dot products. Ties break by ascending doc-id (file order\n"
                            "at index time). Documents sharing no term with the query are never\n"
                            "returned, so a query may yield fewer than k lines. Query terms unknown to\n"
                            "the index contribute nothing.\n") +
                kRunFormat + kQueryFormat + kExitCodes);
}

struct SearchJob {
    std::string qid;
    ComposedQuery query;
};

void
RunSearch(const SearchArgs& args) {
    auto index = InvertedIndex::Load(args.index);
    auto& vocab = *index.shared_vocabulary();
    vocab.set_mode(Vocabulary::Mode::kExtend);

    std::vector<SearchJob> jobs;
    if (LooksLikeQueryFile(args.queries)) {
        auto atomic = ReadAtomicMap(args.vectors, vocab);
        auto queries = ReadQueries(args.queries, vocab, args.vectors.empty() ? nullptr : &atomic,
                                   MakeDefaults(args.method, args.lambda, args.m));
        for (const auto& q : queries) {
            jobs.push_back({q.qid, Compose(q)});
        }
    } else {
        for (auto& record : ReadComposed(args.queries, vocab)) {
            jobs.push_back({std::move(record.id), std::move(record.query)});
        }
    }
    vocab.Freeze();

    std::optional<ExpandedCptIndex> expanded;
    if (args.cpt_full && std::any_of(jobs.begin(), jobs.end(), [](const SearchJob& j) {
            return std::holds_alternative<CptQuery>(j.query);
        })) {
        expanded = ExpandedCptIndex::Build(index);
        spdlog::info("pseudo-term index: {} posting lists", expanded->pseudo_term_count());
    }

    std::vector<SearchResult> results(jobs.size());
    std::vector<std::exception_ptr> failures(jobs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (size_t i = next++; i < jobs.size(); i = next++) {
            try {
                const auto& q = jobs[i].query;
                if (const auto* v = std::get_if<SparseVector>(&q)) {
                    results[i] = index.Search(*v, args.k);
                } else if (expanded) {
                    results[i] = expanded->Search(std::get<CptQuery>(q), args.k);
                } else {
                    results[i] = index.SearchCpt(std::get<CptQuery>(q), args.k, args.candidate_pool);
                }
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    size_t n_threads = args.threads == 0 ? std::max(1u, std::thread::hardware_concurrency())
                                         : args.threads;
    n_threads = std::min(n_threads, std::max<size_t>(jobs.size(), 1));
    std::vector<std::thread> pool;
    for (size_t t = 1; t < n_threads; ++t) {
        pool.emplace_back(worker);
    }
    worker();
    for (auto& t : pool) {
        t.join();
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    Output out(args.out);
    for (size_t i = 0; i < jobs.size(); ++i) {
        std::vector<RankedDoc> ranked;
        ranked.reserve(results[i].size());
        for (const auto& hit : results[i]) {
            ranked.push_back({index.DocName(hit.doc), hit.score});
        }
        WriteRanked(out.stream(), jobs[i].qid, ranked, args.tag);
    }
    out.Close(args.out);
    spdlog::info("searched {} queries over {} documents", jobs.size(), index.doc_count());
}

// ---------------------------------------------------------------------------

struct FuseArgs {
    std::string run_a;
    std::string run_b;
    std::string op = "plus";
    bool scaled = false;
    size_t k = 0;
    std::string tag = "fused";
    std::string out;
};

void
AddFuse(CLI::App& app, FuseArgs& args) {
    auto* sub = app.add_subcommand("fuse", "Combine two runs of atomic queries document by document");
    sub->add_option("--run-a", args.run_a, "Run for the first atomic query")->required();
    sub->add_option("--run-b", args.run_b, "Run for the second atomic query")->required();
    sub->add_option("--op", args.op, "plus | times | minus (a op b)")
        ->capture_default_str()
        ->check(CLI::IsMember({"plus", "times", "minus", "+", "*", "-"}));
    sub->add_flag("--scaled", args.scaled, "Min-max scale each query's scores to [0,1] first");
    sub->add_option("--k", args.k, "Keep the top k per query, 0 = all")->capture_default_str();
    sub->add_option("--tag", args.tag, "Run tag column")->capture_default_str();
    sub->add_option("--out", args.out, "Fused run ('-' for stdout)")->required();
    sub->footer(std::string("Queries are paired by qid. A document missing from one run contributes 0\n"
                            "from that side; a qid present in only one run is fused with an empty run.\n"
                            "Ties break by ascending doc name.\n") +
                kRunFormat + kExitCodes);
}

void
RunFuse(const FuseArgs& args) {
    auto run_a = ReadRun(args.run_a);
    auto run_b = ReadRun(args.run_b);
    auto op = ParseFuseOp(args.op);
    std::map<std::string, const QueryRun*> b_by_qid;
    for (const auto& q : run_b.queries) {
        b_by_qid.emplace(q.qid, &q);
    }
    std::vector<std::pair<ScoredRun, ScoredRun>> pairs;
    for (const auto& q : run_a.queries) {
        auto it = b_by_qid.find(q.qid);
        if (it == b_by_qid.end()) {
            spdlog::warn("qid '{}' only in {}", q.qid, args.run_a);
            pairs.emplace_back(ToScoredRun(q), ScoredRun{q.qid, {}});
        } else {
            pairs.emplace_back(ToScoredRun(q), ToScoredRun(*it->second));
            b_by_qid.erase(it);
        }
    }
    for (const auto& q : run_b.queries) {
        if (b_by_qid.count(q.qid) != 0) {
            spdlog::warn("qid '{}' only in {}", q.qid, args.run_b);
            pairs.emplace_back(ScoredRun{q.qid, {}}, ToScoredRun(q));
        }
    }
    Output out(args.out);
    for (const auto& [a, b] : pairs) {
        auto fused = Fuse(a, b, op, args.scaled);
        for (const auto& w : fused.warnings) {
            spdlog::warn("{}: {}", fused.run.qid, w);
        }
        auto ranked = Rank(fused.run);
        if (args.k != 0 && ranked.size() > args.k) {
            ranked.resize(args.k);
        }
        WriteRanked(out.stream(), fused.run.qid, ranked, args.tag);
    }
    out.Close(args.out);
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string run;
    std::string qrels;
    std::string metrics = "ndcg@10,recall@100";
    std::string out;
};

void
AddEval(CLI::App& app, EvalArgs& args) {
    auto* sub = app.add_subcommand("eval", "Score a run against relevance judgments");
    sub->add_option("--run", args.run, "Run file")->required();
    sub->add_option("--qrels", args.qrels, "Qrels file")->required();
    sub->add_option("--metrics", args.metrics, "Comma-separated ndcg@K and recall@K")
        ->capture_default_str();
    sub->add_option("--out", args.out, "JSON report with per-query values (optional)");
    sub->footer(std::string(
                    "NDCG uses gain = grade and discount log2(rank + 1). Queries of the run without\n"
                    "any positive judgment are skipped and listed under \"undefined_qids\".\n"
                    "A summary table (metric, mean, queries) goes to stdout.\n"
                    "Report JSON: {\"metrics\": [{\"name\", \"mean\", \"queries\", \"per_query\": {qid: v}}],\n"
                    "  \"undefined_qids\": [...]}\n") +
                kRunFormat + kQrelsFormat + kExitCodes);
}

void
RunEval(const EvalArgs& args) {
    auto metrics = ParseMetricList(args.metrics);
    std::vector<std::string> warnings;
    auto qrels = ReadQrels(args.qrels, &warnings);
    for (const auto& w : warnings) {
        spdlog::warn("{}", w);
    }
    auto run = ReadRun(args.run);
    auto report = Evaluate(RankingsByQuery(run), qrels, metrics);
    for (const auto& qid : report.undefined_qids) {
        spdlog::warn("query '{}' has no relevant documents; skipped", qid);
    }
    if (!args.out.empty()) {
        Output out(args.out);
        WriteEvalReport(out.stream(), report);
        out.Close(args.out);
    }
    std::cout << "metric\tmean\tqueries\n";
    for (const auto& m : report.metrics) {
        std::cout << fmt::format("{}\t{:.4f}\t{}\n", m.name, m.mean, m.per_query.size());
    }
}

// ---------------------------------------------------------------------------

struct PairwiseArgs {
    std::string pairs;
    std::string scores;
};

void
AddPairwise(CLI::App& app, PairwiseArgs& args) {
    auto* sub = app.add_subcommand("pairwise", "Pairwise accuracy over counterfactual query pairs");
    sub->add_option("--pairs", args.pairs, "Pairs file")->required();
    sub->add_option("--scores", args.scores, "Run file holding the query-document scores")->required();
    sub->footer(std::string("Pairs file: whitespace separated \"query1 query2 doc1 doc2\" per line, where doc1\n"
                            "is relevant to query1 and doc2 to query2. A pair counts when query1 scores\n"
                            "doc1 above doc2 and query2 scores doc2 above doc1; ties fail. A document\n"
                            "absent from a query's run scores below every retrieved one.\n") +
                kRunFormat + kExitCodes);
}

void
RunPairwise(const PairwiseArgs& args) {
    auto pairs = ReadPairs(args.pairs);
    auto run = ReadRun(args.scores);
    std::map<std::string, ScoredRun, std::less<>> scores;
    for (const auto& q : run.queries) {
        scores.emplace(q.qid, ToScoredRun(q));
    }
    auto scorer = [&](std::string_view qid, std::string_view doc) {
        auto q = scores.find(qid);
        if (q == scores.end()) {
            return -std::numeric_limits<double>::infinity();
        }
        auto d = q->second.scores.find(std::string(doc));
        return d == q->second.scores.end() ? -std::numeric_limits<double>::infinity() : d->second;
    };
    double accuracy = PairwiseAccuracy(pairs, scorer);
    std::cout << fmt::format("pairwise_accuracy\t{:.4f}\tpairs\t{}\n", accuracy, pairs.size());
}

// ---------------------------------------------------------------------------

struct InterferenceArgs {
    std::string queries;
    std::string vectors;
    std::string per_query_metrics;
    std::string metric = "ndcg@10";
    size_t bins = 4;
};

void
AddInterference(CLI::App& app, InterferenceArgs& args) {
    auto* sub = app.add_subcommand("analyze-interference",
                                   "Bin difference queries by cosine(a, b) and average a metric");
    sub->add_option("--queries", args.queries, "Compositional query JSONL")->required();
    sub->add_option("--vectors", args.vectors, "Atomic vector JSONL referenced by string sides");
    sub->add_option("--per-query-metrics", args.per_query_metrics, "Report JSON from 'eval --out'")
        ->required();
    sub->add_option("--metric", args.metric, "Metric name inside the report")->capture_default_str();
    sub->add_option("--bins", args.bins, "Number of equal-population bins")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->footer(std::string("Only difference queries are analysed; others are skipped. Prints one row per\n"
                            "bin: bin, lo, hi, count, mean. Equal similarities never straddle two bins,\n"
                            "so fewer bins than requested may be printed.\n") +
                kQueryFormat + kExitCodes);
}

void
RunInterference(const InterferenceArgs& args) {
    Vocabulary vocab;
    auto atomic = ReadAtomicMap(args.vectors, vocab);
    auto queries = ReadQueries(args.queries, vocab, args.vectors.empty() ? nullptr : &atomic);
    std::vector<CompositionalQuery> difference;
    for (auto& q : queries) {
        if (q.op == SetOperator::kDifference) {
            difference.push_back(std::move(q));
        }
    }
    if (difference.size() < queries.size()) {
        spdlog::info("skipped {} non-difference queries", queries.size() - difference.size());
    }
    auto metric = ReadPerQueryMetric(args.per_query_metrics, args.metric);
    auto report = InterferenceBins(difference, metric, args.bins);
    for (const auto& w : report.warnings) {
        spdlog::warn("{}", w);
    }
    std::cout << "bin\tlo\thi\tcount\tmean_" << args.metric << '\n';
    for (size_t i = 0; i < report.bins.size(); ++i) {
        const auto& b = report.bins[i];
        std::cout << fmt::format("{}\t{:.4f}\t{:.4f}\t{}\t{:.4f}\n", i + 1, b.lo, b.hi, b.count,
                                 b.mean_metric);
    }
}

void
SetUpLogging() {
    auto logger = std::make_shared<spdlog::logger>("setsparse",
                                                   std::make_shared<spdlog::sinks::stderr_sink_st>());
    logger->set_pattern("[%l] %v");
    spdlog::set_default_logger(logger);
    spdlog::set_level(spdlog::level::info);
    spdlog::cfg::load_env_levels();
}

}  // namespace

int
RunCli(int argc, const char* const* argv) {
    SetUpLogging();
    CLI::App app{"Sparse-vector retrieval for set-compositional and negated queries"};
    app.name("setsparse");
    app.set_version_flag("--version", "setsparse 0.1.0");
    app.require_subcommand(1);
    app.footer(kExitCodes);

    EncodeArgs encode;
    ActivateArgs activate;
    IndexArgs index;
    ComposeArgs compose;
    SearchArgs search;
    FuseArgs fuse;
    EvalArgs eval;
    PairwiseArgs pairwise;
    InterferenceArgs interference;
    AddEncode(app, encode);
    AddActivate(app, activate);
    AddIndex(app, index);
    AddCompose(app, compose);
    AddSearch(app, search);
    AddFuse(app, fuse);
    AddEval(app, eval);
    AddPairwise(app, pairwise);
    AddInterference(app, interference);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        const auto& sub = app.get_subcommands().front()->get_name();
        if (sub == "encode") {
            RunEncode(encode);
        } else if (sub == "activate") {
            RunActivate(activate);
        } else if (sub == "index") {
            RunIndex(index);
        } else if (sub == "compose") {
            RunCompose(compose);
        } else if (sub == "search") {
            RunSearch(search);
        } else if (sub == "fuse") {
            RunFuse(fuse);
        } else if (sub == "eval") {
            RunEval(eval);
        } else if (sub == "pairwise") {
            RunPairwise(pairwise);
        } else {
            RunInterference(interference);
        }
    } catch (const Error& e) {
        spdlog::error("{} ({})", e.what(), ErrorKindName(e.kind()));
        return e.kind() == ErrorKind::kInternal ? kExitInternal : kExitData;
    } catch (const std::exception& e) {
        spdlog::error("internal error: {}", e.what());
        return kExitInternal;
    }
    return kExitOk;
}

int
RunCli(const std::vector<std::string>& args) {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("setsparse");
    for (const auto& a : args) {
        argv.push_back(a.c_str());
    }
    return RunCli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace setsparse::cli
