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

#include <algorithm>
#include <filesystem>
#include <random>
#include <thread>

#include "setsparse/error.h"
#include "setsparse/inverted_index.h"
#include "test_util.h"

namespace setsparse {
namespace {

using testing::MakeVocab;
using testing::RandomVector;
using testing::Weights;

InvertedIndex
Build(const std::shared_ptr<Vocabulary>& vocab, const std::vector<SparseVector>& docs) {
    IndexBuilder builder(vocab);
    char name[32];
    for (size_t i = 0; i < docs.size(); ++i) {
        std::snprintf(name, sizeof(name), "d%05zu", i);
        builder.Add(name, docs[i]);
    }
    return std::move(builder).Finish();
}

/// Oracle: score every document, drop those sharing no term with the query,
/// order by (score desc, doc-id asc).
SearchResult
BruteForce(const std::vector<SparseVector>& docs, const SparseVector& q, size_t k) {
    SearchResult all;
    for (DocId d = 0; d < docs.size(); ++d) {
        bool shares = false;
        for (const auto& e : q.entries()) {
            shares = shares || docs[d].Contains(e.term);
        }
        if (shares) {
            all.push_back({d, Dot(q, docs[d])});
        }
    }
    std::stable_sort(all.begin(), all.end(),
                     [](const Hit& x, const Hit& y) { return x.score > y.score; });
    if (all.size() > k) {
        all.resize(k);
    }
    return all;
}

class ThreeDocs : public ::testing::Test {
protected:
    std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>();
    std::vector<SparseVector> docs = {
        FromPairs({{"colombia", 1}}, *vocab),
        FromPairs({{"colombia", 1}, {"venezuela", 1}}, *vocab),
        FromPairs({{"venezuela", 1}}, *vocab),
    };
    InvertedIndex index = Build(vocab, docs);
    SparseVector query = FromPairs({{"colombia", 1}, {"venezuela", -1}}, *vocab);
};

TEST_F(ThreeDocs, SignedQueryRanking) {
    auto hits = index.Search(query, 10);
    ASSERT_EQ(hits.size(), 3u);
    EXPECT_EQ(hits[0], (Hit{0, 1.0}));
    EXPECT_EQ(hits[1], (Hit{1, 0.0}));
    EXPECT_EQ(hits[2], (Hit{2, -1.0}));
    auto top1 = index.Search(query, 1);
    ASSERT_EQ(top1.size(), 1u);
    EXPECT_EQ(index.DocName(top1[0].doc), "d00000");
    EXPECT_TRUE(index.Search(SparseVector(), 5).empty());
    EXPECT_THROW((void)index.Search(query, 0), Error);
}

TEST_F(ThreeDocs, VocabularyMismatch) {
    Vocabulary other;
    auto foreign = FromPairs({{"colombia", 1}}, other);
    try {
        (void)index.Search(foreign, 3);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kVocabularyMismatch);
    }
}

TEST(IndexBuildTest, PostingLists) {
    auto vocab = std::make_shared<Vocabulary>();
    std::vector<SparseVector> docs = {
        FromPairs({{"a", 1}, {"b", 2}}, *vocab),
        FromPairs({{"b", 1}, {"c", 3}}, *vocab),
        FromPairs({{"a", 5}, {"d", 1}}, *vocab),
        SparseVector(),
    };
    auto index = Build(vocab, docs);
    EXPECT_EQ(index.posting_list_count(), 4u);
    EXPECT_EQ(index.doc_count(), 4u);
    EXPECT_EQ(index.Postings(*vocab->Find("a")).size(), 2u);
    EXPECT_EQ(index.Postings(*vocab->Find("b")).size(), 2u);
    EXPECT_EQ(index.Postings(*vocab->Find("c")).size(), 1u);
    EXPECT_EQ(index.Postings(*vocab->Find("d")).size(), 1u);
    EXPECT_EQ(index.DocWeight(*vocab->Find("c"), 1), 3.0);
    EXPECT_EQ(index.DocWeight(*vocab->Find("c"), 0), 0.0);
    EXPECT_TRUE(index.Postings(999).empty());
    EXPECT_EQ(index.FindDoc("d00003"), std::optional<DocId>(3));
    auto forward = index.ForwardVectors();
    ASSERT_EQ(forward.size(), docs.size());
    for (size_t i = 0; i < docs.size(); ++i) {
        EXPECT_EQ(forward[i], docs[i]);
    }
}

TEST(IndexBuildTest, EmptyCorpusAndDuplicates) {
    auto vocab = std::make_shared<Vocabulary>();
    auto q = FromPairs({{"a", 1}}, *vocab);
    auto empty = Build(vocab, {});
    EXPECT_TRUE(empty.Search(q, 10).empty());

    IndexBuilder builder(vocab);
    builder.Add("x", q);
    try {
        builder.Add("x", q);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kDuplicateId);
    }
}

TEST(IndexSearchTest, MatchesBruteForce) {
    std::mt19937_64 rng(42);
    for (int corpus = 0; corpus < 30; ++corpus) {
        auto vocab = std::make_shared<Vocabulary>(MakeVocab(50));
        std::vector<SparseVector> docs;
        for (int i = 0; i < 200; ++i) {
            docs.push_back(RandomVector(rng, *vocab, 8, Weights::kSignedSmallInt));
        }
        auto index = Build(vocab, docs);
        for (int qn = 0; qn < 20; ++qn) {
            auto q = RandomVector(rng, *vocab, 6, Weights::kSigned);
            size_t k = 1 + rng() % 60;
            ASSERT_EQ(index.Search(q, k), BruteForce(docs, q, k));
        }
    }
}

TEST(IndexSearchTest, ConcurrentSearchesAgree) {
    std::mt19937_64 rng(17);
    auto vocab = std::make_shared<Vocabulary>(MakeVocab(100));
    std::vector<SparseVector> docs;
    for (int i = 0; i < 500; ++i) {
        docs.push_back(RandomVector(rng, *vocab, 10, Weights::kPositive));
    }
    auto index = Build(vocab, docs);
    std::vector<SparseVector> queries;
    for (int i = 0; i < 64; ++i) {
        queries.push_back(RandomVector(rng, *vocab, 5, Weights::kSigned, 1));
    }
    std::vector<SearchResult> serial;
    for (const auto& q : queries) {
        serial.push_back(index.Search(q, 20));
    }
    std::vector<SearchResult> parallel(queries.size());
    std::vector<std::thread> threads;
    for (size_t t = 0; t < 4; ++t) {
        threads.emplace_back([&, t] {
            for (size_t i = t; i < queries.size(); i += 4) {
                parallel[i] = index.Search(queries[i], 20);
            }
        });
    }
    for (auto& th : threads) {
        th.join();
    }
    EXPECT_EQ(serial, parallel);
}

class CptCorpus : public ::testing::Test {
protected:
    std::shared_ptr<Vocabulary> vocab = std::make_shared<Vocabulary>();
    std::vector<SparseVector> docs = {
        FromPairs({{"andes", 1}}, *vocab),
        FromPairs({{"colombia", 1}}, *vocab),
        FromPairs({{"birds", 1}, {"colombia", 1}, {"venezuela", 1}}, *vocab),
        FromPairs({{"venezuela", 1}}, *vocab),
        FromPairs({{"colombia", 2}, {"andes", 1}}, *vocab),
    };
    InvertedIndex index = Build(vocab, docs);
    CptQuery q = MakeCptQuery(FromPairs({{"colombia", 1}}, *vocab),
                              FromPairs({{"venezuela", 1}}, *vocab), 5);
};

TEST_F(CptCorpus, BothSidesFirst) {
    auto hits = index.SearchCpt(q, 10, 10);
    ASSERT_EQ(hits.size(), 1u);
    EXPECT_EQ(hits[0].doc, 2u);
    EXPECT_EQ(hits[0].score, 1.0);
    EXPECT_TRUE(index.SearchCpt(MakeCptQuery(SparseVector(), q.b, 5), 10, 10).empty());
    auto full = ExpandedCptIndex::Build(index);
    EXPECT_EQ(full.Search(q, 10), hits);
}

TEST_F(CptCorpus, NegativeCorpusIsRejected) {
    auto neg = Build(vocab, {FromPairs({{"colombia", -1}}, *vocab)});
    try {
        (void)neg.SearchCpt(q, 10, 10);
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kCptDomain);
    }
    EXPECT_THROW((void)ExpandedCptIndex::Build(neg), Error);
}

// A pool covering the corpus must equal exhaustive pseudo-term scoring.
TEST(CptSearchTest, FullPoolIsExhaustive) {
    std::mt19937_64 rng(23);
    for (int corpus = 0; corpus < 20; ++corpus) {
        auto vocab = std::make_shared<Vocabulary>(MakeVocab(30));
        std::vector<SparseVector> docs;
        for (int i = 0; i < 150; ++i) {
            docs.push_back(RandomVector(rng, *vocab, 6, Weights::kPositive));
        }
        auto index = Build(vocab, docs);
        auto expanded = ExpandedCptIndex::Build(index);
        for (int qn = 0; qn < 10; ++qn) {
            auto a = RandomVector(rng, *vocab, 8, Weights::kPositive, 1);
            auto b = RandomVector(rng, *vocab, 8, Weights::kPositive, 1);
            auto q = MakeCptQuery(a, b, 3);
            SearchResult expected;
            for (DocId d = 0; d < docs.size(); ++d) {
                double s = CptScoreFactorized(q.a_top, q.b_top, docs[d]);
                if (s != 0.0) {
                    expected.push_back({d, s});
                }
            }
            SelectTopK(expected, 25);
            auto got = index.SearchCpt(q, 25, docs.size());
            ASSERT_EQ(got.size(), expected.size());
            for (size_t i = 0; i < got.size(); ++i) {
                ASSERT_EQ(got[i].doc, expected[i].doc);
                ASSERT_EQ(got[i].score, expected[i].score);
            }
            auto via_pairs = expanded.Search(q, 25);
            ASSERT_EQ(via_pairs.size(), expected.size());
            for (size_t i = 0; i < via_pairs.size(); ++i) {
                ASSERT_NEAR(via_pairs[i].score, expected[i].score, 1e-9 * expected[i].score);
            }
        }
    }
}

class Persistence : public ::testing::Test {
protected:
    void
    SetUp() override {
        std::mt19937_64 rng(1);
        auto vocab = std::make_shared<Vocabulary>(MakeVocab(40));
        for (int i = 0; i < 120; ++i) {
            docs.push_back(RandomVector(rng, *vocab, 10, Weights::kSigned));
        }
        index = Build(vocab, docs);
        bytes = index.Serialize();
    }

    static ErrorKind
    LoadKind(const std::string& data) {
        try {
            (void)InvertedIndex::Deserialize(data);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::kInternal;
    }

    std::vector<SparseVector> docs;
    InvertedIndex index;
    std::string bytes;
};

TEST_F(Persistence, RoundTripIsExact) {
    auto loaded = InvertedIndex::Deserialize(bytes);
    EXPECT_EQ(loaded.Serialize(), bytes);
    EXPECT_EQ(loaded.doc_count(), index.doc_count());
    EXPECT_EQ(loaded.vocabulary().terms(), index.vocabulary().terms());
    auto reloaded_docs = loaded.ForwardVectors();
    auto original_docs = index.ForwardVectors();
    for (size_t i = 0; i < docs.size(); ++i) {
        ASSERT_EQ(reloaded_docs[i].entries().size(), original_docs[i].entries().size());
        for (size_t j = 0; j < reloaded_docs[i].nnz(); ++j) {
            ASSERT_EQ(reloaded_docs[i].entries()[j], original_docs[i].entries()[j]);
        }
    }

    auto path = std::filesystem::temp_directory_path() / "setsparse_persist_test.idx";
    index.Save(path);
    auto from_file = InvertedIndex::Load(path);
    EXPECT_EQ(from_file.Serialize(), bytes);
    std::filesystem::remove(path);
}

TEST_F(Persistence, DetectsDamage) {
    EXPECT_EQ(LoadKind("garbage"), ErrorKind::kCorruptFile);
    EXPECT_EQ(LoadKind(bytes.substr(0, bytes.size() / 2)), ErrorKind::kCorruptFile);
    for (size_t pos : {size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
        auto flipped = bytes;
        flipped[pos] = static_cast<char>(flipped[pos] ^ 0x5A);
        EXPECT_EQ(LoadKind(flipped), ErrorKind::kCorruptFile) << "byte " << pos;
    }
    auto future = bytes;
    future[8] = 2;  // version field follows the 8-byte magic
    EXPECT_EQ(LoadKind(future), ErrorKind::kVersionMismatch);
    EXPECT_EQ(LoadKind(bytes + "x"), ErrorKind::kCorruptFile);
    try {
        (void)InvertedIndex::Load("/nonexistent/dir/index.bin");
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kIo);
    }
}

}  // namespace
}  // namespace setsparse
