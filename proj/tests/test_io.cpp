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


#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "setsparse/error.h"
#include "setsparse/io.h"
#include "test_util.h"

namespace setsparse {
namespace {

namespace fs = std::filesystem;

class IoTest : public ::testing::Test {
protected:
    void
    SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("setsparse_io_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
    }

    void
    TearDown() override {
        fs::remove_all(dir_);
    }

    fs::path
    Write(const std::string& name, const std::string& content) {
        auto path = dir_ / name;
        std::ofstream(path) << content;
        return path;
    }

    static ErrorKind
    KindOf(const std::function<void()>& fn, std::string* message = nullptr) {
        try {
            fn();
        } catch (const Error& e) {
            if (message != nullptr) {
                *message = e.what();
            }
            return e.kind();
        }
        return ErrorKind::kInternal;
    }

    fs::path dir_;
};

TEST_F(IoTest, ReadVectors) {
    auto path = Write("v.jsonl",
                      "{\"id\":\"qA\",\"vector\":{\"birds\":1.0,\"colombia\":1.0}}\n"
                      "\n"
                      "{\"id\":\"d0\",\"vector\":{}}\n");
    Vocabulary vocab;
    auto records = ReadVectors(path, vocab);
    ASSERT_EQ(records.size(), 2u);
    EXPECT_EQ(records[0].id, "qA");
    EXPECT_EQ(records[0].vector.nnz(), 2u);
    EXPECT_EQ(*vocab.Find("birds"), 0u);
    EXPECT_TRUE(records[1].vector.empty());
}

TEST_F(IoTest, VectorErrorsCarryLineNumbers) {
    Vocabulary vocab;
    std::string message;
    auto bad = Write("bad.jsonl",
                     "{\"id\":\"a\",\"vector\":{\"x\":1}}\n{\"id\":\"b\",\"vector\":{\"x\":\"heavy\"}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadVectors(bad, vocab); }, &message), ErrorKind::kParse);
    EXPECT_NE(message.find("bad.jsonl:2:"), std::string::npos) << message;
    EXPECT_NE(message.find("non-numeric"), std::string::npos) << message;

    auto dup = Write("dup.jsonl", "{\"id\":\"a\",\"vector\":{}}\n{\"id\":\"a\",\"vector\":{}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadVectors(dup, vocab); }, &message), ErrorKind::kParse);
    EXPECT_NE(message.find("duplicate"), std::string::npos);

    auto junk = Write("junk.jsonl", "{\"id\":\"a\",\"vector\":{}}\n{not json\n");
    EXPECT_EQ(KindOf([&] { (void)ReadVectors(junk, vocab); }, &message), ErrorKind::kParse);
    EXPECT_NE(message.find(":2:"), std::string::npos);

    auto no_id = Write("noid.jsonl", "{\"vector\":{}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadVectors(no_id, vocab); }), ErrorKind::kParse);
    EXPECT_EQ(KindOf([&] { (void)ReadVectors(dir_ / "missing.jsonl", vocab); }), ErrorKind::kIo);
}

TEST_F(IoTest, VectorRoundTripIsExact) {
    std::mt19937_64 rng(77);
    Vocabulary vocab = testing::MakeVocab(200);
    std::ostringstream out;
    std::vector<SparseVector> written;
    std::uniform_real_distribution<double> mantissa(-1.0, 1.0);
    std::uniform_int_distribution<int> exponent(-300, 300);
    for (int i = 0; i < 200; ++i) {
        auto v = testing::RandomVector(rng, vocab, 20, testing::Weights::kSigned);
        std::vector<Entry> entries(v.entries().begin(), v.entries().end());
        for (auto& e : entries) {
            e.weight = std::ldexp(mantissa(rng), exponent(rng) % 60);
        }
        entries.push_back({199, 0.1});
        written.push_back(SparseVector::FromEntries(vocab, entries));
        WriteVector(out, "r" + std::to_string(i), written.back(), vocab);
    }
    auto path = Write("round.jsonl", out.str());
    Vocabulary fresh;
    auto read = ReadVectors(path, fresh);
    ASSERT_EQ(read.size(), written.size());
    for (size_t i = 0; i < read.size(); ++i) {
        ASSERT_EQ(read[i].vector.nnz(), written[i].nnz());
        for (const auto& e : written[i].entries()) {
            auto id = fresh.Find(vocab.Term(e.term));
            ASSERT_TRUE(id.has_value());
            ASSERT_EQ(read[i].vector.Get(*id), e.weight);
        }
    }
}

TEST_F(IoTest, UnicodeTermsPassThrough) {
    Vocabulary vocab;
    auto v = FromPairs({{"\xC3\xB1" "and\xC3\xBA", 1.5}, {"a\"b", 2.0}}, vocab);
    std::ostringstream out;
    WriteVector(out, "u", v, vocab);
    auto path = Write("u.jsonl", out.str());
    Vocabulary fresh;
    auto read = ReadVectors(path, fresh);
    ASSERT_EQ(read.size(), 1u);
    EXPECT_EQ(read[0].vector.Get(*fresh.Find("\xC3\xB1" "and\xC3\xBA")), 1.5);
    EXPECT_EQ(read[0].vector.Get(*fresh.Find("a\"b")), 2.0);
}

TEST_F(IoTest, Qrels) {
    auto path = Write("qrels.txt", "q1 0 d7 1\nq1 0 d8 0\nq1 0 d7 2\n");
    std::vector<std::string> warnings;
    auto qrels = ReadQrels(path, &warnings);
    EXPECT_EQ(qrels.Grade("q1", "d7"), 2);
    EXPECT_EQ(qrels.Grade("q1", "d8"), 0);
    ASSERT_EQ(warnings.size(), 1u);
    EXPECT_NE(warnings[0].find(":3:"), std::string::npos);

    auto bad = Write("bad.txt", "q1 0 d7 x\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQrels(bad); }), ErrorKind::kParse);
    auto negative = Write("neg.txt", "q1 0 d7 -1\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQrels(negative); }), ErrorKind::kParse);
    auto short_line = Write("short.txt", "q1 d7 1\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQrels(short_line); }), ErrorKind::kParse);
}

TEST_F(IoTest, RunRoundTripAtEmittedPrecision) {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> score(0.0, 100.0);
    std::ostringstream out;
    std::vector<std::vector<RankedDoc>> written;
    for (int q = 0; q < 20; ++q) {
        std::vector<RankedDoc> docs;
        for (int d = 0; d < 30; ++d) {
            docs.push_back({"doc" + std::to_string(d), score(rng)});
        }
        std::sort(docs.begin(), docs.end(),
                  [](const RankedDoc& x, const RankedDoc& y) { return x.score > y.score; });
        WriteRanked(out, "q" + std::to_string(q), docs, "tag");
        written.push_back(docs);
    }
    auto path = Write("run.txt", out.str());
    auto run = ReadRun(path);
    EXPECT_EQ(run.tag, "tag");
    ASSERT_EQ(run.queries.size(), written.size());
    for (size_t q = 0; q < written.size(); ++q) {
        ASSERT_EQ(run.queries[q].entries.size(), written[q].size());
        for (size_t i = 0; i < written[q].size(); ++i) {
            const auto& e = run.queries[q].entries[i];
            EXPECT_EQ(e.rank, i + 1);
            EXPECT_EQ(e.doc, written[q][i].doc);
            EXPECT_NEAR(e.score, written[q][i].score, 5e-7 + 1e-15 * std::abs(e.score));
        }
    }
    std::ostringstream again;
    WriteRun(again, run);
    EXPECT_EQ(again.str(), out.str());
}

TEST_F(IoTest, RunValidation) {
    auto backwards = Write("back.txt", "q1 Q0 d1 2 1.0 t\nq1 Q0 d2 1 0.5 t\n");
    EXPECT_EQ(KindOf([&] { (void)ReadRun(backwards); }), ErrorKind::kParse);
    auto bad_score = Write("score.txt", "q1 Q0 d1 1 high t\n");
    EXPECT_EQ(KindOf([&] { (void)ReadRun(bad_score); }), ErrorKind::kParse);
    std::ostringstream out;
    std::vector<RankedDoc> rising = {{"a", 1.0}, {"b", 2.0}};
    EXPECT_EQ(KindOf([&] { WriteRanked(out, "q", rising, "t"); }), ErrorKind::kInternal);

    std::vector<RankedDoc> negative_zero = {{"a", -0.0000001}};
    WriteRanked(out, "q", negative_zero, "t");
    EXPECT_EQ(out.str(), "q Q0 a 1 0.000000 t\n");
}

TEST_F(IoTest, QueriesWithReferencesAndInlineVectors) {
    auto vectors = Write("atomic.jsonl",
                         "{\"id\":\"qA\",\"vector\":{\"birds\":1,\"colombia\":1}}\n"
                         "{\"id\":\"qB\",\"vector\":{\"birds\":1,\"venezuela\":1}}\n");
    auto queries = Write(
        "queries.jsonl",
        "{\"qid\":\"d\",\"operator\":\"difference\",\"a\":\"qA\",\"b\":\"qB\"}\n"
        "{\"qid\":\"n\",\"operator\":\"difference\",\"method\":\"nrf\",\"a\":\"qA\",\"b\":{\"x\":2},"
        "\"params\":{\"lambda\":0.25}}\n"
        "{\"qid\":\"i\",\"operator\":\"intersection\",\"a\":\"qA\",\"b\":\"qB\",\"params\":{\"m\":1}}\n"
        "{\"qid\":\"t\",\"operator\":\"atomic\",\"a\":{\"birds\":3}}\n");
    Vocabulary vocab;
    std::map<std::string, SparseVector, std::less<>> atomic;
    for (auto& r : ReadVectors(vectors, vocab)) {
        atomic.emplace(r.id, r.vector);
    }
    auto qs = ReadQueries(queries, vocab, &atomic);
    ASSERT_EQ(qs.size(), 4u);
    EXPECT_EQ(qs[0].method, ComposeMethod::kDisentangled);
    EXPECT_EQ(qs[0].a, atomic.at("qA"));
    EXPECT_EQ(qs[1].method, ComposeMethod::kNrf);
    EXPECT_EQ(qs[1].params.lambda, 0.25);
    EXPECT_EQ(qs[1].b->Get(*vocab.Find("x")), 2.0);
    EXPECT_EQ(qs[2].method, ComposeMethod::kCpt);
    EXPECT_EQ(qs[2].params.m, 1u);
    EXPECT_EQ(qs[3].op, SetOperator::kAtomic);
    EXPECT_FALSE(qs[3].b.has_value());

    QueryDefaults defaults;
    defaults.method_override = ComposeMethod::kSubtract;
    defaults.params.lambda = 0.9;
    std::string message;
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(queries, vocab, &atomic, defaults); }, &message),
              ErrorKind::kParse);
    EXPECT_NE(message.find(":3:"), std::string::npos) << message;

    EXPECT_TRUE(LooksLikeQueryFile(queries));
    EXPECT_FALSE(LooksLikeQueryFile(vectors));
}

TEST_F(IoTest, QueryErrors) {
    Vocabulary vocab;
    auto missing_b = Write("mb.jsonl", "{\"qid\":\"q\",\"operator\":\"union\",\"a\":{\"x\":1}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(missing_b, vocab, nullptr); }), ErrorKind::kParse);
    auto unknown_ref = Write("ur.jsonl", "{\"qid\":\"q\",\"operator\":\"atomic\",\"a\":\"zz\"}\n");
    std::map<std::string, SparseVector, std::less<>> empty;
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(unknown_ref, vocab, &empty); }), ErrorKind::kParse);
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(unknown_ref, vocab, nullptr); }), ErrorKind::kParse);
    auto bad_op = Write("op.jsonl", "{\"qid\":\"q\",\"operator\":\"xor\",\"a\":{}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(bad_op, vocab, nullptr); }), ErrorKind::kParse);
    auto bad_m = Write("m.jsonl",
                       "{\"qid\":\"q\",\"operator\":\"intersection\",\"a\":{},\"b\":{},\"params\":{\"m\":0}}\n");
    EXPECT_EQ(KindOf([&] { (void)ReadQueries(bad_m, vocab, nullptr); }), ErrorKind::kParse);
}

TEST_F(IoTest, ComposedRoundTrip) {
    Vocabulary vocab;
    auto a = FromPairs({{"colombia", 1}, {"birds", 4}}, vocab);
    auto b = FromPairs({{"venezuela", 9}, {"birds", 1}}, vocab);
    std::ostringstream out;
    WriteComposed(out, "plain", Sub(a, b), 5, vocab);
    WriteComposed(out, "cpt", MakeCptQuery(a, b, 1), 1, vocab);
    auto path = Write("composed.jsonl", out.str());
    EXPECT_NE(out.str().find("birds\xE2\x88\xA9venezuela"), std::string::npos);

    Vocabulary fresh;
    auto records = ReadComposed(path, fresh);
    ASSERT_EQ(records.size(), 2u);
    const auto& plain = std::get<SparseVector>(records[0].query);
    EXPECT_EQ(plain.Get(*fresh.Find("venezuela")), -9.0);
    const auto& cpt = std::get<CptQuery>(records[1].query);
    EXPECT_EQ(cpt.a_top.nnz(), 1u);
    EXPECT_EQ(cpt.b_top.nnz(), 1u);
    ASSERT_EQ(cpt.expansion.nnz(), 1u);
    EXPECT_EQ(cpt.expansion.entries()[0].weight, 6.0);
    EXPECT_EQ(cpt.a.nnz(), 2u);
    // pseudo-term keys never leak into the vocabulary
    EXPECT_EQ(fresh.size(), 3u);
}

TEST_F(IoTest, LogitGrid) {
    auto path = Write("grid.tsv", "birds\tcolombia\n0.5\t-1\n2\t0\n");
    Vocabulary vocab;
    auto m = ReadLogitGrid(path, vocab);
    EXPECT_EQ(m.rows(), 2u);
    EXPECT_EQ(m.cols(), 2u);
    EXPECT_EQ(m.at(1, 0), 2.0);
    EXPECT_EQ(m.at(0, 1), -1.0);
    auto ragged = Write("ragged.tsv", "a\tb\n1\n");
    EXPECT_EQ(KindOf([&] { (void)ReadLogitGrid(ragged, vocab); }), ErrorKind::kParse);
    auto words = Write("words.tsv", "a\n1\nx\n");
    EXPECT_EQ(KindOf([&] { (void)ReadLogitGrid(words, vocab); }), ErrorKind::kParse);
    auto header_only = Write("header.tsv", "a\tb\n");
    EXPECT_EQ(KindOf([&] { (void)ReadLogitGrid(header_only, vocab); }), ErrorKind::kParse);
}

TEST_F(IoTest, TextsPairsAndReports) {
    auto texts = Write("t.jsonl", "{\"id\":\"t1\",\"text\":\"Birds of Colombia\"}\n");
    auto records = ReadTexts(texts);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].text, "Birds of Colombia");

    auto pairs = Write("p.txt", "q1 q2 d1 d2\n\nq3 q4 d3 d4\n");
    auto parsed = ReadPairs(pairs);
    ASSERT_EQ(parsed.size(), 2u);
    EXPECT_EQ(parsed[1].doc2, "d4");
    auto bad_pairs = Write("bp.txt", "q1 q2 d1\n");
    EXPECT_EQ(KindOf([&] { (void)ReadPairs(bad_pairs); }), ErrorKind::kParse);

    EvalReport report;
    report.metrics.push_back({"ndcg@10", 0.5, {{"q1", 0.25}, {"q2", 0.75}}});
    report.undefined_qids = {"q3"};
    std::ostringstream out;
    WriteEvalReport(out, report);
    auto path = Write("report.json", out.str());
    auto values = ReadPerQueryMetric(path, "ndcg@10");
    EXPECT_EQ(values, (std::map<std::string, double>{{"q1", 0.25}, {"q2", 0.75}}));
    EXPECT_EQ(KindOf([&] { (void)ReadPerQueryMetric(path, "recall@5"); }), ErrorKind::kInvalidArgument);
}

}  // namespace
}  // namespace setsparse
