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

#include "setsparse/sparse_vector.h"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "setsparse/error.h"

namespace setsparse {

namespace {

bool
IsZero(double w) {
    return std::abs(w) < kZeroWeightEpsilon;
}

// Walks the union of both supports in term-id order and stores combine(wa, wb)
// with missing entries read as 0.
template <typename Combine>
SparseVector
MergeUnion(const SparseVector& a, const SparseVector& b, Combine combine) {
    VocabTag tag = CheckSameVocab(a, b);
    auto ea = a.entries();
    auto eb = b.entries();
    std::vector<Entry> out;
    out.reserve(ea.size() + eb.size());
    size_t i = 0;
    size_t j = 0;
    while (i < ea.size() || j < eb.size()) {
        TermId term;
        double w;
        if (j == eb.size() || (i < ea.size() && ea[i].term < eb[j].term)) {
            term = ea[i].term;
            w = combine(ea[i].weight, 0.0);
            ++i;
        } else if (i == ea.size() || eb[j].term < ea[i].term) {
            term = eb[j].term;
            w = combine(0.0, eb[j].weight);
            ++j;
        } else {
            term = ea[i].term;
            w = combine(ea[i].weight, eb[j].weight);
            ++i;
            ++j;
        }
        if (!IsZero(w)) {
            out.push_back({term, w});
        }
    }
    return SparseVector::FromCanonical(tag, std::move(out));
}

}  // namespace

SparseVector
SparseVector::FromEntries(const Vocabulary& vocab, std::vector<Entry> entries) {
    for (const auto& e : entries) {
        if (e.term >= vocab.size()) {
            throw Error(ErrorKind::kInvalidArgument,
                        "term-id " + std::to_string(e.term) + " outside vocabulary of size " +
                            std::to_string(vocab.size()));
        }
        if (!std::isfinite(e.weight)) {
            throw Error(ErrorKind::kInvalidArgument,
                        "non-finite weight for term '" + vocab.Term(e.term) + "'");
        }
    }
    std::stable_sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
        return x.term < y.term;
    });
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (size_t i = 0; i < entries.size();) {
        TermId term = entries[i].term;
        double sum = 0.0;
        for (; i < entries.size() && entries[i].term == term; ++i) {
            sum += entries[i].weight;
        }
        if (!IsZero(sum)) {
            out.push_back({term, sum});
        }
    }
    return {vocab.tag(), std::move(out)};
}

SparseVector
SparseVector::FromCanonical(VocabTag tag, std::vector<Entry> entries) {
#ifndef NDEBUG
    for (size_t i = 0; i < entries.size(); ++i) {
        assert(!IsZero(entries[i].weight));
        assert(i == 0 || entries[i - 1].term < entries[i].term);
    }
#endif
    return {tag, std::move(entries)};
}

double
SparseVector::Get(TermId term) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), term,
                               [](const Entry& e, TermId t) { return e.term < t; });
    if (it == entries_.end() || it->term != term) {
        return 0.0;
    }
    return it->weight;
}

bool
SparseVector::Contains(TermId term) const {
    return Get(term) != 0.0;
}

double
SparseVector::SquaredNorm() const {
    double sum = 0.0;
    for (const auto& e : entries_) {
        sum += e.weight * e.weight;
    }
    return sum;
}

double
SparseVector::Norm() const {
    return std::sqrt(SquaredNorm());
}

bool
SparseVector::AllNonNegative() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.weight > 0.0; });
}

SparseVector
FromPairs(std::span<const std::pair<std::string_view, double>> pairs, Vocabulary& vocab) {
    std::vector<Entry> entries;
    entries.reserve(pairs.size());
    for (const auto& [term, weight] : pairs) {
        if (!std::isfinite(weight)) {
            throw Error(ErrorKind::kInvalidArgument,
                        "non-finite weight for term '" + std::string(term) + "'");
        }
        entries.push_back({vocab.Resolve(term), weight});
    }
    return SparseVector::FromEntries(vocab, std::move(entries));
}

SparseVector
FromPairs(std::initializer_list<std::pair<std::string_view, double>> pairs, Vocabulary& vocab) {
    return FromPairs(std::span<const std::pair<std::string_view, double>>(pairs.begin(), pairs.size()),
                     vocab);
}

VocabTag
CheckSameVocab(const SparseVector& a, const SparseVector& b) {
    if (a.vocab_tag() == kUnboundVocab) {
        return b.vocab_tag();
    }
    if (b.vocab_tag() == kUnboundVocab || a.vocab_tag() == b.vocab_tag()) {
        return a.vocab_tag();
    }
    throw Error(ErrorKind::kVocabularyMismatch, "vectors belong to different vocabularies");
}

double
Dot(const SparseVector& a, const SparseVector& b) {
    CheckSameVocab(a, b);
    auto ea = a.entries();
    auto eb = b.entries();
    double sum = 0.0;
    size_t i = 0;
    size_t j = 0;
    while (i < ea.size() && j < eb.size()) {
        if (ea[i].term == eb[j].term) {
            sum += ea[i].weight * eb[j].weight;
            ++i;
            ++j;
        } else if (ea[i].term < eb[j].term) {
            ++i;
        } else {
            ++j;
        }
    }
    return sum;
}

SparseVector
Add(const SparseVector& a, const SparseVector& b) {
    return MergeUnion(a, b, [](double x, double y) { return x + y; });
}

SparseVector
Sub(const SparseVector& a, const SparseVector& b) {
    return MergeUnion(a, b, [](double x, double y) { return x - y; });
}

SparseVector
SubScaled(const SparseVector& a, const SparseVector& b, double lambda) {
    return MergeUnion(a, b, [lambda](double x, double y) { return x - lambda * y; });
}

SparseVector
Scale(const SparseVector& a, double lambda) {
    std::vector<Entry> out;
    out.reserve(a.nnz());
    for (const auto& e : a.entries()) {
        double w = lambda * e.weight;
        if (!IsZero(w)) {
            out.push_back({e.term, w});
        }
    }
    return SparseVector::FromCanonical(a.vocab_tag(), std::move(out));
}

SparseVector
MaxPool(const SparseVector& a, const SparseVector& b) {
    return MergeUnion(a, b, [](double x, double y) { return std::max(x, y); });
}

SparseVector
MaskRemove(const SparseVector& b, const SparseVector& support_of) {
    VocabTag tag = CheckSameVocab(b, support_of);
    std::vector<Entry> out;
    out.reserve(b.nnz());
    auto mask = support_of.entries();
    size_t j = 0;
    for (const auto& e : b.entries()) {
        while (j < mask.size() && mask[j].term < e.term) {
            ++j;
        }
        if (j < mask.size() && mask[j].term == e.term) {
            continue;
        }
        out.push_back(e);
    }
    return SparseVector::FromCanonical(tag, std::move(out));
}

SparseVector
Project(const SparseVector& a, const SparseVector& onto_b) {
    CheckSameVocab(a, onto_b);
    double denom = onto_b.SquaredNorm();
    if (denom == 0.0) {
        throw Error(ErrorKind::kDegenerateProjection, "projection onto a zero-norm vector");
    }
    return Scale(onto_b, Dot(a, onto_b) / denom);
}

double
Cosine(const SparseVector& a, const SparseVector& b) {
    CheckSameVocab(a, b);
    double na = a.Norm();
    double nb = b.Norm();
    if (na == 0.0 || nb == 0.0) {
        throw Error(ErrorKind::kZeroNorm, "cosine of a zero-norm vector");
    }
    return std::clamp(Dot(a, b) / (na * nb), -1.0, 1.0);
}

SparseVector
TopM(const SparseVector& a, size_t m) {
    if (m == 0) {
        throw Error(ErrorKind::kInvalidArgument, "top-m requires m >= 1");
    }
    if (m >= a.nnz()) {
        return a;
    }
    std::vector<Entry> picked(a.entries().begin(), a.entries().end());
    std::nth_element(picked.begin(), picked.begin() + static_cast<ptrdiff_t>(m), picked.end(),
                     [](const Entry& x, const Entry& y) {
                         return x.weight > y.weight || (x.weight == y.weight && x.term < y.term);
                     });
    picked.resize(m);
    std::sort(picked.begin(), picked.end(),
              [](const Entry& x, const Entry& y) { return x.term < y.term; });
    return SparseVector::FromCanonical(a.vocab_tag(), std::move(picked));
}

}  // namespace setsparse
