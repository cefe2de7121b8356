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

#include "setsparse/io.h"

#include <charconv>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "json.hpp"
#include "setsparse/error.h"

namespace setsparse {

using json = nlohmann::ordered_json;
using ordered_json = nlohmann::ordered_json;

namespace {

std::vector<std::string_view>
SplitWhitespace(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) {
            ++i;
        }
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') {
            ++i;
        }
        if (i > start) {
            out.push_back(line.substr(start, i - start));
        }
    }
    return out;
}

std::vector<std::string_view>
SplitTabs(std::string_view line) {
    if (!line.empty() && line.back() == '\r') {
        line.remove_suffix(1);
    }
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

std::optional<double>
ParseDouble(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
        return std::nullopt;
    }
    return v;
}

std::optional<long long>
ParseInt(std::string_view s) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

json
ParseJsonLine(const LineReader& reader, const std::string& line) {
    json value;
    try {
        value = json::parse(line);
    } catch (const json::parse_error& e) {
        reader.Fail(std::string("invalid JSON: ") + e.what());
    }
    if (!value.is_object()) {
        reader.Fail("expected a JSON object");
    }
    return value;
}

std::string
RequireString(const LineReader& reader, const json& obj, const char* key) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) {
        reader.Fail(std::string("missing string field \"") + key + "\"");
    }
    return it->get<std::string>();
}

SparseVector
ParseTermMap(const LineReader& reader, const json& obj, Vocabulary& vocab, const char* what) {
    if (!obj.is_object()) {
        reader.Fail(std::string("\"") + what + "\" must be an object of term weights");
    }
    std::vector<std::pair<std::string, double>> owned;
    owned.reserve(obj.size());
    for (const auto& [term, weight] : obj.items()) {
        if (!weight.is_number()) {
            reader.Fail("non-numeric weight for term '" + term + "'");
        }
        double w = weight.get<double>();
        if (!std::isfinite(w)) {
            reader.Fail("non-finite weight for term '" + term + "'");
        }
        owned.emplace_back(term, w);
    }
    std::vector<std::pair<std::string_view, double>> pairs(owned.begin(), owned.end());
    try {
        return FromPairs(pairs, vocab);
    } catch (const Error& e) {
        reader.Fail(e.what());
    }
}

ordered_json
TermMap(const SparseVector& v, const Vocabulary& vocab) {
    ordered_json map = ordered_json::object();
    for (const auto& e : v.entries()) {
        map[vocab.Term(e.term)] = e.weight;
    }
    return map;
}

void
WriteJsonLine(std::ostream& out, const ordered_json& value) {
    try {
        out << value.dump() << '\n';
    } catch (const ordered_json::type_error& e) {
        throw Error(ErrorKind::kInvalidArgument, std::string("cannot encode record: ") + e.what());
    }
}

std::string
FormatScore(double score) {
    std::string s = fmt::format("{:.6f}", score);
    if (s == "-0.000000") {
        s = "0.000000";
    }
    return s;
}

}  // namespace

LineReader::LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
    if (!in_) {
        throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
    }
}

bool
LineReader::Next(std::string& line) {
    while (std::getline(in_, line)) {
        ++line_no_;
        if (line.find_first_not_of(" \t\r") != std::string::npos) {
            return true;
        }
    }
    if (in_.bad()) {
        throw Error(ErrorKind::kIo, "failed reading '" + path_.string() + "'");
    }
    return false;
}

void
LineReader::Fail(const std::string& message) const {
    throw Error(ErrorKind::kParse, path_.string() + ":" + std::to_string(line_no_) + ": " + message);
}

VectorReader::VectorReader(const std::filesystem::path& path, Vocabulary& vocab)
    : lines_(path), vocab_(vocab) {
}

std::optional<VectorRecord>
VectorReader::Next() {
    std::string line;
    if (!lines_.Next(line)) {
        return std::nullopt;
    }
    json obj = ParseJsonLine(lines_, line);
    VectorRecord record;
    record.id = RequireString(lines_, obj, "id");
    if (!seen_ids_.insert(record.id).second) {
        lines_.Fail("duplicate id '" + record.id + "'");
    }
    auto vec = obj.find("vector");
    if (vec == obj.end()) {
        lines_.Fail("missing field \"vector\"");
    }
    record.vector = ParseTermMap(lines_, *vec, vocab_, "vector");
    return record;
}

std::vector<VectorRecord>
ReadVectors(const std::filesystem::path& path, Vocabulary& vocab) {
    VectorReader reader(path, vocab);
    std::vector<VectorRecord> out;
    while (auto record = reader.Next()) {
        out.push_back(std::move(*record));
    }
    return out;
}

void
WriteVector(std::ostream& out, std::string_view id, const SparseVector& v, const Vocabulary& vocab) {
    ordered_json obj;
    obj["id"] = id;
    obj["vector"] = TermMap(v, vocab);
    WriteJsonLine(out, obj);
}

std::vector<TextRecord>
ReadTexts(const std::filesystem::path& path) {
    LineReader lines(path);
    std::vector<TextRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (lines.Next(line)) {
        json obj = ParseJsonLine(lines, line);
        TextRecord record{RequireString(lines, obj, "id"), RequireString(lines, obj, "text")};
        if (!seen.insert(record.id).second) {
            lines.Fail("duplicate id '" + record.id + "'");
        }
        out.push_back(std::move(record));
    }
    return out;
}

std::vector<CompositionalQuery>
ReadQueries(const std::filesystem::path& path,
            Vocabulary& vocab,
            const std::map<std::string, SparseVector, std::less<>>* atomic_vectors,
            const QueryDefaults& defaults) {
    LineReader lines(path);
    std::vector<CompositionalQuery> out;
    std::unordered_set<std::string> seen;
    std::string line;
    auto side = [&](const json& obj, const char* key) -> std::optional<SparseVector> {
        auto it = obj.find(key);
        if (it == obj.end() || it->is_null()) {
            return std::nullopt;
        }
        if (it->is_string()) {
            auto ref = it->get<std::string>();
            if (atomic_vectors == nullptr) {
                lines.Fail(std::string("\"") + key + "\" refers to '" + ref +
                           "' but no atomic vector file was given");
            }
            auto found = atomic_vectors->find(ref);
            if (found == atomic_vectors->end()) {
                lines.Fail("unknown atomic vector id '" + ref + "'");
            }
            return found->second;
        }
        return ParseTermMap(lines, *it, vocab, key);
    };
    while (lines.Next(line)) {
        json obj = ParseJsonLine(lines, line);
        CompositionalQuery q;
        q.qid = RequireString(lines, obj, "qid");
        if (!seen.insert(q.qid).second) {
            lines.Fail("duplicate qid '" + q.qid + "'");
        }
        try {
            q.op = ParseSetOperator(RequireString(lines, obj, "operator"));
            if (obj.contains("method")) {
                q.method = ParseComposeMethod(RequireString(lines, obj, "method"));
            } else {
                q.method = DefaultMethod(q.op);
            }
            if (defaults.method_override && q.op != SetOperator::kAtomic) {
                q.method = *defaults.method_override;
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::kParse) {
                throw;
            }
            lines.Fail(e.what());
        }
        auto a = side(obj, "a");
        if (!a) {
            lines.Fail("missing field \"a\"");
        }
        q.a = std::move(*a);
        q.b = side(obj, "b");
        q.params = defaults.params;
        if (auto params = obj.find("params"); params != obj.end()) {
            if (!params->is_object()) {
                lines.Fail("\"params\" must be an object");
            }
            if (auto lambda = params->find("lambda"); lambda != params->end()) {
                if (!lambda->is_number()) {
                    lines.Fail("\"lambda\" must be a number");
                }
                q.params.lambda = lambda->get<double>();
            }
            if (auto m = params->find("m"); m != params->end()) {
                if (!m->is_number_unsigned() || m->get<uint64_t>() == 0) {
                    lines.Fail("\"m\" must be a positive integer");
                }
                q.params.m = m->get<size_t>();
            }
        }
        try {
            Validate(q);
        } catch (const Error& e) {
            lines.Fail(e.what());
        }
        out.push_back(std::move(q));
    }
    return out;
}

bool
LooksLikeQueryFile(const std::filesystem::path& path) {
    LineReader lines(path);
    std::string line;
    if (!lines.Next(line)) {
        return false;
    }
    return ParseJsonLine(lines, line).contains("qid");
}

void
WriteComposed(std::ostream& out, std::string_view id, const ComposedQuery& q, size_t m,
              const Vocabulary& vocab) {
    if (const auto* v = std::get_if<SparseVector>(&q)) {
        WriteVector(out, id, *v, vocab);
        return;
    }
    const auto& cpt = std::get<CptQuery>(q);
    ordered_json obj;
    obj["id"] = id;
    ordered_json pairs = ordered_json::object();
    for (const auto& p : cpt.expansion.entries()) {
        pairs[PseudoTermKey(vocab, p.left, p.right)] = p.weight;
    }
    obj["vector"] = std::move(pairs);
    obj["cpt"] = {{"m", m}, {"a", TermMap(cpt.a, vocab)}, {"b", TermMap(cpt.b, vocab)}};
    WriteJsonLine(out, obj);
}

std::vector<ComposedRecord>
ReadComposed(const std::filesystem::path& path, Vocabulary& vocab) {
    LineReader lines(path);
    std::vector<ComposedRecord> out;
    std::unordered_set<std::string> seen;
    std::string line;
    while (lines.Next(line)) {
        json obj = ParseJsonLine(lines, line);
        ComposedRecord record;
        record.id = RequireString(lines, obj, "id");
        if (!seen.insert(record.id).second) {
            lines.Fail("duplicate id '" + record.id + "'");
        }
        if (auto cpt = obj.find("cpt"); cpt != obj.end()) {
            if (!cpt->is_object() || !cpt->contains("a") || !cpt->contains("b")) {
                lines.Fail("\"cpt\" needs \"a\" and \"b\" term maps");
            }
            size_t m = kDefaultCptTopM;
            if (auto mv = cpt->find("m"); mv != cpt->end()) {
                if (!mv->is_number_unsigned() || mv->get<uint64_t>() == 0) {
                    lines.Fail("\"m\" must be a positive integer");
                }
                m = mv->get<size_t>();
            }
            auto a = ParseTermMap(lines, cpt->at("a"), vocab, "a");
            auto b = ParseTermMap(lines, cpt->at("b"), vocab, "b");
            try {
                record.query = MakeCptQuery(a, b, m);
            } catch (const Error& e) {
                lines.Fail(e.what());
            }
        } else {
            auto vec = obj.find("vector");
            if (vec == obj.end()) {
                lines.Fail("missing field \"vector\"");
            }
            record.query = ParseTermMap(lines, *vec, vocab, "vector");
        }
        out.push_back(std::move(record));
    }
    return out;
}

LogitMatrix
ReadLogitGrid(const std::filesystem::path& path, Vocabulary& vocab) {
    LineReader lines(path);
    std::string line;
    if (!lines.Next(line)) {
        lines.Fail("empty logit grid (expected a header row of terms)");
    }
    std::vector<TermId> columns;
    for (auto term : SplitTabs(line)) {
        if (term.empty()) {
            lines.Fail("empty term in header row");
        }
        try {
            columns.push_back(vocab.Resolve(term));
        } catch (const Error& e) {
            lines.Fail(e.what());
        }
    }
    std::vector<double> values;
    size_t rows = 0;
    while (lines.Next(line)) {
        auto cells = SplitTabs(line);
        if (cells.size() != columns.size()) {
            lines.Fail("row has " + std::to_string(cells.size()) + " values, header has " +
                       std::to_string(columns.size()) + " terms");
        }
        for (auto cell : cells) {
            auto v = ParseDouble(cell);
            if (!v) {
                lines.Fail("invalid logit value '" + std::string(cell) + "'");
            }
            values.push_back(*v);
        }
        ++rows;
    }
    if (rows == 0) {
        lines.Fail("logit grid has no position rows");
    }
    try {
        return LogitMatrix(vocab, std::move(columns), rows, std::move(values));
    } catch (const Error& e) {
        lines.Fail(e.what());
    }
}

Qrels
ReadQrels(const std::filesystem::path& path, std::vector<std::string>* warnings) {
    LineReader lines(path);
    Qrels qrels;
    std::string line;
    while (lines.Next(line)) {
        auto fields = SplitWhitespace(line);
        if (fields.size() != 4) {
            lines.Fail("expected 'qid 0 docid grade'");
        }
        auto grade = ParseInt(fields[3]);
        if (!grade || *grade < 0 || *grade > std::numeric_limits<int>::max()) {
            lines.Fail("grade must be a nonnegative integer, got '" + std::string(fields[3]) + "'");
        }
        std::string qid(fields[0]);
        std::string doc(fields[2]);
        if (qrels.Set(qid, doc, static_cast<int>(*grade)) && warnings != nullptr) {
            warnings->push_back(path.string() + ":" + std::to_string(lines.line_number()) +
                                ": duplicate judgment for (" + qid + ", " + doc + "); last wins");
        }
    }
    return qrels;
}

Run
ReadRun(const std::filesystem::path& path) {
    LineReader lines(path);
    Run run;
    std::unordered_map<std::string, size_t> index;
    std::string line;
    while (lines.Next(line)) {
        auto fields = SplitWhitespace(line);
        if (fields.size() != 6) {
            lines.Fail("expected 'qid Q0 docid rank score tag'");
        }
        auto rank = ParseInt(fields[3]);
        if (!rank || *rank < 1) {
            lines.Fail("rank must be a positive integer, got '" + std::string(fields[3]) + "'");
        }
        auto score = ParseDouble(fields[4]);
        if (!score) {
            lines.Fail("invalid score '" + std::string(fields[4]) + "'");
        }
        if (run.tag.empty()) {
            run.tag = std::string(fields[5]);
        }
        std::string qid(fields[0]);
        auto [it, inserted] = index.emplace(qid, run.queries.size());
        if (inserted) {
            run.queries.push_back({qid, {}});
        }
        auto& entries = run.queries[it->second].entries;
        if (!entries.empty() && static_cast<size_t>(*rank) <= entries.back().rank) {
            lines.Fail("ranks for query '" + qid + "' are not increasing");
        }
        entries.push_back({std::string(fields[2]), static_cast<size_t>(*rank), *score});
    }
    return run;
}

void
WriteRanked(std::ostream& out, std::string_view qid, std::span<const RankedDoc> ranked,
            std::string_view tag) {
    for (size_t i = 1; i < ranked.size(); ++i) {
        if (ranked[i].score > ranked[i - 1].score) {
            throw Error(ErrorKind::kInternal,
                        "run for query '" + std::string(qid) + "' is not sorted by score");
        }
    }
    for (size_t i = 0; i < ranked.size(); ++i) {
        out << qid << " Q0 " << ranked[i].doc << ' ' << (i + 1) << ' ' << FormatScore(ranked[i].score)
            << ' ' << tag << '\n';
    }
}

void
WriteRun(std::ostream& out, const Run& run) {
    for (const auto& q : run.queries) {
        std::vector<RankedDoc> ranked;
        ranked.reserve(q.entries.size());
        for (const auto& e : q.entries) {
            ranked.push_back({e.doc, e.score});
        }
        WriteRanked(out, q.qid, ranked, run.tag);
    }
}

ScoredRun
ToScoredRun(const QueryRun& q) {
    ScoredRun out{q.qid, {}};
    for (const auto& e : q.entries) {
        if (!out.scores.emplace(e.doc, e.score).second) {
            throw Error(ErrorKind::kParse,
                        "run lists document '" + e.doc + "' twice for query '" + q.qid + "'");
        }
    }
    return out;
}

std::map<std::string, std::vector<std::string>>
RankingsByQuery(const Run& run) {
    std::map<std::string, std::vector<std::string>> out;
    for (const auto& q : run.queries) {
        auto& ranking = out[q.qid];
        for (const auto& e : q.entries) {
            ranking.push_back(e.doc);
        }
    }
    return out;
}

std::vector<PairedQueries>
ReadPairs(const std::filesystem::path& path) {
    LineReader lines(path);
    std::vector<PairedQueries> out;
    std::string line;
    while (lines.Next(line)) {
        auto fields = SplitWhitespace(line);
        if (fields.size() != 4) {
            lines.Fail("expected 'query1 query2 doc1 doc2'");
        }
        out.push_back({std::string(fields[0]), std::string(fields[1]), std::string(fields[2]),
                       std::string(fields[3])});
    }
    return out;
}

void
WriteEvalReport(std::ostream& out, const EvalReport& report) {
    ordered_json root;
    ordered_json metrics = ordered_json::array();
    for (const auto& m : report.metrics) {
        ordered_json per_query = ordered_json::object();
        for (const auto& [qid, value] : m.per_query) {
            per_query[qid] = value;
        }
        metrics.push_back({{"name", m.name},
                           {"mean", m.mean},
                           {"queries", m.per_query.size()},
                           {"per_query", std::move(per_query)}});
    }
    root["metrics"] = std::move(metrics);
    root["undefined_qids"] = report.undefined_qids;
    out << root.dump(2) << '\n';
}

std::map<std::string, double>
ReadPerQueryMetric(const std::filesystem::path& path, std::string_view metric) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "'");
    }
    json root;
    try {
        root = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::kParse, path.string() + ": invalid JSON: " + e.what());
    }
    if (!root.is_object() || !root.contains("metrics") || !root["metrics"].is_array()) {
        throw Error(ErrorKind::kParse, path.string() + ": not an evaluation report");
    }
    for (const auto& m : root["metrics"]) {
        if (m.value("name", "") != metric) {
            continue;
        }
        std::map<std::string, double> out;
        for (const auto& [qid, value] : m.at("per_query").items()) {
            if (!value.is_number()) {
                throw Error(ErrorKind::kParse, path.string() + ": non-numeric value for '" + qid + "'");
            }
            out.emplace(qid, value.get<double>());
        }
        return out;
    }
    throw Error(ErrorKind::kInvalidArgument,
                path.string() + ": report has no metric '" + std::string(metric) + "'");
}

std::ofstream
OpenForWrite(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
    }
    return out;
}

}  // namespace setsparse
