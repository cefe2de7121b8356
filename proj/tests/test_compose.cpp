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
#include <random>

#include "setsparse/compose.h"
#include "setsparse/error.h"
#include "test_util.h"

namespace setsparse {
namespace {

using testing::Dense;
using testing::DenseDot;
using testing::MakeVocab;
using testing::RandomVector;
using testing::Weights;

class BirdsCompose : public ::testing::Test {
protected:
    Vocabulary vocab;
    SparseVector a = FromPairs({{"birds", 1}, {"fly", 1}, {"colombia", 1}, {"andes", 1}}, vocab);
    SparseVector b = FromPairs({{"birds", 1}, {"fly", 1}, {"venezuela", 1}, {"andes", 1}}, vocab);

    SparseVector
    V(std::initializer_list<std::pair<std::string_view, double>> pairs) {
        return FromPairs(pairs, vocab);
    }
};

TEST_F(BirdsCompose, Subtract) {
    EXPECT_EQ(DifferenceSubtract(a, b), V({{"colombia", 1}, {"venezuela", -1}}));
    EXPECT_EQ(DifferenceSubtract(a, SparseVector()), a);
    EXPECT_TRUE(DifferenceSubtract(a, a).empty());
}

TEST_F(BirdsCompose, Ignore) {
    EXPECT_EQ(DifferenceIgnore(a, b), a);
    EXPECT_EQ(DifferenceIgnore(a, SparseVector()), a);
    EXPECT_TRUE(DifferenceIgnore(SparseVector(), b).empty());
}

TEST_F(BirdsCompose, Disentangled) {
    EXPECT_EQ(DifferenceDisentangled(a, b),
              V({{"colombia", 1}, {"venezuela", -1}, {"birds", 1}, {"fly", 1}, {"andes", 1}}));
    auto x = V({{"p", 2}});
    auto y = V({{"q", 3}});
    EXPECT_EQ(DifferenceDisentangled(x, y), Sub(x, y));
    EXPECT_EQ(DifferenceDisentangled(a, V({{"birds", 5}, {"fly", 2}})), a);
}

TEST_F(BirdsCompose, Orthogonal) {
    EXPECT_EQ(DifferenceOrthogonal(a, b),
              V({{"birds", 0.25}, {"fly", 0.25}, {"colombia", 1}, {"andes", 0.25}, {"venezuela", -0.75}}));
    auto x = V({{"p", 2}});
    auto y = V({{"q", 3}});
    EXPECT_EQ(DifferenceOrthogonal(x, y), x);
    EXPECT_TRUE(DifferenceOrthogonal(a, a).empty());
    try {
        (void)DifferenceOrthogonal(a, SparseVector());
        FAIL() << "expected an error";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::kDegenerateProjection);
    }
}

TEST_F(BirdsCompose, Nrf) {
    EXPECT_EQ(DifferenceNrf(a, b, 0.0), a);
    EXPECT_EQ(DifferenceNrf(a, b, 1.0), DifferenceSubtract(a, b));
    EXPECT_EQ(DifferenceNrf(a, b, 0.5),
              V({{"birds", 0.5}, {"fly", 0.5}, {"colombia", 1}, {"andes", 0.5}, {"venezuela", -0.5}}));
    EXPECT_THROW((void)DifferenceNrf(a, b, -0.1), Error);
    EXPECT_THROW((void)DifferenceNrf(a, b, NAN), Error);
}

TEST_F(BirdsCompose, UnionAndIntersection) {
    EXPECT_EQ(UnionAdd(a, b),
              V({{"birds", 2}, {"fly", 2}, {"colombia", 1}, {"venezuela", 1}, {"andes", 2}}));
    EXPECT_EQ(UnionMaxPool(a, b),
              V({{"birds", 1}, {"fly", 1}, {"colombia", 1}, {"venezuela", 1}, {"andes", 1}}));
    EXPECT_EQ(UnionAdd(a, SparseVector()), a);
    EXPECT_EQ(IntersectionAdd(a, b), UnionAdd(a, b));
    EXPECT_EQ(IntersectionMaxPool(a, b), UnionMaxPool(a, b));
}

TEST_F(BirdsCompose, DispatchAndValidation) {
    CompositionalQuery q{"q", SetOperator::kDifference, ComposeMethod::kDisentangled, a, b, {}};
    EXPECT_EQ(std::get<SparseVector>(Compose(q)), DifferenceDisentangled(a, b));
    q.method = ComposeMethod::kNrf;
    q.params.lambda = 1.0;
    EXPECT_EQ(std::get<SparseVector>(Compose(q)), Sub(a, b));

    q.method = ComposeMethod::kCpt;
    EXPECT_THROW((void)Compose(q), Error);

    CompositionalQuery inter{"i", SetOperator::kIntersection, ComposeMethod::kCpt, a, b, {0.5, 2}};
    const auto& cpt = std::get<CptQuery>(Compose(inter));
    EXPECT_EQ(cpt.a_top.nnz(), 2u);
    EXPECT_EQ(cpt.expansion.nnz(), 4u);

    CompositionalQuery atomic{"x", SetOperator::kAtomic, ComposeMethod::kAtomic, a, std::nullopt, {}};
    EXPECT_EQ(std::get<SparseVector>(Compose(atomic)), a);
    atomic.b = b;
    EXPECT_THROW(Validate(atomic), Error);
    CompositionalQuery missing_b{"y", SetOperator::kUnion, ComposeMethod::kAdd, a, std::nullopt, {}};
    EXPECT_THROW(Validate(missing_b), Error);
}

TEST(ComposeNamesTest, RoundTrip) {
    for (auto m : {ComposeMethod::kAtomic, ComposeMethod::kSubtract, ComposeMethod::kIgnore,
                   ComposeMethod::kDisentangled, ComposeMethod::kOrthogonal, ComposeMethod::kNrf,
                   ComposeMethod::kAdd, ComposeMethod::kMaxPool, ComposeMethod::kCpt}) {
        EXPECT_EQ(ParseComposeMethod(ToString(m)), m);
    }
    for (auto op : {SetOperator::kAtomic, SetOperator::kDifference, SetOperator::kUnion,
                    SetOperator::kIntersection}) {
        EXPECT_EQ(ParseSetOperator(ToString(op)), op);
        EXPECT_TRUE(IsValidCombination(op, DefaultMethod(op)));
    }
    EXPECT_EQ(DefaultMethod(SetOperator::kDifference), ComposeMethod::kDisentangled);
    EXPECT_EQ(DefaultMethod(SetOperator::kUnion), ComposeMethod::kMaxPool);
    EXPECT_EQ(DefaultMethod(SetOperator::kIntersection), ComposeMethod::kCpt);
    EXPECT_THROW((void)ParseComposeMethod("negate"), Error);
    EXPECT_THROW((void)ParseSetOperator("xor"), Error);
    EXPECT_FALSE(IsValidCombination(SetOperator::kUnion, ComposeMethod::kCpt));
    EXPECT_FALSE(IsValidCombination(SetOperator::kDifference, ComposeMethod::kAdd));
}

class ComposeProperties : public ::testing::Test {
protected:
    static constexpr size_t kTerms = 80;
    Vocabulary vocab = MakeVocab(kTerms);
    std::mt19937_64 rng{99};
};

TEST_F(ComposeProperties, DisentangledPreservesSupport) {
    for (int trial = 0; trial < 500; ++trial) {
        auto a = RandomVector(rng, vocab, 30, Weights::kSigned);
        auto b = RandomVector(rng, vocab, 30, Weights::kSigned);
        auto r = DifferenceDisentangled(a, b);
        for (TermId i = 0; i < kTerms; ++i) {
            double ai = a.Get(i);
            double bi = b.Get(i);
            double expected = ai != 0.0 ? ai : (bi != 0.0 ? -bi : 0.0);
            ASSERT_EQ(r.Get(i), expected);
        }
    }
}

TEST_F(ComposeProperties, OrthogonalResultIsOrthogonal) {
    for (int trial = 0; trial < 500; ++trial) {
        auto a = RandomVector(rng, vocab, 50, Weights::kSigned);
        auto b = RandomVector(rng, vocab, 50, Weights::kSigned, 1);
        auto r = DifferenceOrthogonal(a, b);
        ASSERT_LE(std::abs(Dot(r, b)), 1e-9 * std::max(a.Norm() * b.Norm(), 1e-300) + 1e-300);
    }
}

TEST_F(ComposeProperties, NrfEndpoints) {
    for (int trial = 0; trial < 300; ++trial) {
        auto a = RandomVector(rng, vocab, 40, Weights::kSigned);
        auto b = RandomVector(rng, vocab, 40, Weights::kSigned);
        ASSERT_EQ(DifferenceNrf(a, b, 0.0), a);
        ASSERT_EQ(DifferenceNrf(a, b, 1.0), DifferenceSubtract(a, b));
    }
}

// Against nonnegative documents, disentangled negation never scores above
// ignoring the negation, and scores strictly lower exactly when the document
// has weight on a term that only B mentions.
TEST_F(ComposeProperties, DisentangledPenaltyGuarantee) {
    for (int trial = 0; trial < 2000; ++trial) {
        auto a = RandomVector(rng, vocab, 20, Weights::kSmallInt);
        auto b = RandomVector(rng, vocab, 20, Weights::kSmallInt);
        auto d = RandomVector(rng, vocab, 20, Weights::kSmallInt);
        double dis = Dot(DifferenceDisentangled(a, b), d);
        double ign = Dot(DifferenceIgnore(a, b), d);
        bool touches_b_only = false;
        for (const auto& e : d.entries()) {
            if (b.Contains(e.term) && !a.Contains(e.term)) {
                touches_b_only = true;
            }
        }
        ASSERT_LE(dis, ign);
        ASSERT_EQ(dis < ign, touches_b_only);
    }
}

TEST_F(ComposeProperties, OutputsAreCanonical) {
    for (int trial = 0; trial < 200; ++trial) {
        auto a = RandomVector(rng, vocab, 30, Weights::kSigned);
        auto b = RandomVector(rng, vocab, 30, Weights::kSigned, 1);
        for (auto m : {ComposeMethod::kSubtract, ComposeMethod::kIgnore, ComposeMethod::kDisentangled,
                       ComposeMethod::kOrthogonal, ComposeMethod::kNrf}) {
            CompositionalQuery q{"q", SetOperator::kDifference, m, a, b, {}};
            ASSERT_TRUE(testing::IsCanonical(std::get<SparseVector>(Compose(q))));
        }
    }
}

}  // namespace
}  // namespace setsparse
