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

#include "setsparse/pseudo_terms.h"

#include <algorithm>
#include <cassert>
#include <cmath>

#include "setsparse/error.h"

namespace setsparse {

namespace {

void
RequireNonNegative(const SparseVector& v, std::string_view what) {
    if (!v.AllNonNegative()) {
        throw Error(ErrorKind::kCptDomain,
                    "combined pseudo-terms need nonnegative weights (" + std::string(what) + ")");
    }
}

bool
PairLess(const PseudoTerm& x, const PseudoTerm& y) {
    return x.left < y.left || (x.left == y.left && x.right < y.right);
}

}  // namespace

PseudoTermVector
PseudoTermVector::FromCanonical(VocabTag tag, std::vector<PseudoTerm> entries) {
#ifndef NDEBUG
    for (size_t i = 0; i < entries.size(); ++i) {
        assert(entries[i].weight > 0.0);
        assert(i == 0 || PairLess(entries[i - 1], entries[i]));
    }
#endif
    return {tag, std::move(entries)};
}

double
PseudoTermVector::Get(TermId left, TermId right) const {
    PseudoTerm probe{left, right, 0.0};
    auto it = std::lower_bound(entries_.begin(), entries_.end(), probe, PairLess);
    if (it == entries_.end() || it->left != left || it->right != right) {
        return 0.0;
    }
    return it->weight;
}

PseudoTermVector
ExpandQuery(const SparseVector& a, const SparseVector& b, size_t m) {
    VocabTag tag = CheckSameVocab(a, b);
    RequireNonNegative(a, "query A");
    RequireNonNegative(b, "query B");
    SparseVector a_top = TopM(a, m);
    SparseVector b_top = TopM(b, m);
    std::vector<PseudoTerm> out;
    out.reserve(a_top.nnz() * b_top.nnz());
    for (const auto& ea : a_top.entries()) {
        for (const auto& eb : b_top.entries()) {
            out.push_back({ea.term, eb.term, std::sqrt(ea.weight * eb.weight)});
        }
    }
    return PseudoTermVector::FromCanonical(tag, std::move(out));
}

PseudoTermVector
ExpandDoc(const SparseVector& d) {
    RequireNonNegative(d, "document");
    auto entries = d.entries();
    std::vector<PseudoTerm> out;
    out.reserve(entries.size() * entries.size());
    for (const auto& ei : entries) {
        for (const auto& ej : entries) {
            out.push_back({ei.term, ej.term, std::sqrt(ei.weight * ej.weight)});
        }
    }
    return PseudoTermVector::FromCanonical(d.vocab_tag(), std::move(out));
}

PseudoTermVector
ExpandDoc(const SparseVector& d, const PseudoTermVector& restrict_to) {
    RequireNonNegative(d, "document");
    if (d.vocab_tag() != kUnboundVocab && restrict_to.vocab_tag() != kUnboundVocab &&
        d.vocab_tag() != restrict_to.vocab_tag()) {
        throw Error(ErrorKind::kVocabularyMismatch, "vectors belong to different vocabularies");
    }
    std::vector<PseudoTerm> out;
    for (const auto& p : restrict_to.entries()) {
        double wi = d.Get(p.left);
        double wj = d.Get(p.right);
        if (wi > 0.0 && wj > 0.0) {
            out.push_back({p.left, p.right, std::sqrt(wi * wj)});
        }
    }
    return PseudoTermVector::FromCanonical(d.vocab_tag(), std::move(out));
}

double
CptScore(const PseudoTermVector& query, const PseudoTermVector& doc_expansion) {
    if (query.vocab_tag() != kUnboundVocab && doc_expansion.vocab_tag() != kUnboundVocab &&
        query.vocab_tag() != doc_expansion.vocab_tag()) {
        throw Error(ErrorKind::kVocabularyMismatch, "vectors belong to different vocabularies");
    }
    auto q = query.entries();
    auto d = doc_expansion.entries();
    double sum = 0.0;
    size_t i = 0;
    size_t j = 0;
    while (i < q.size() && j < d.size()) {
        if (PairLess(q[i], d[j])) {
            ++i;
        } else if (PairLess(d[j], q[i])) {
            ++j;
        } else {
            sum += q[i].weight * d[j].weight;
            ++i;
            ++j;
        }
    }
    return sum;
}

double
CptScoreFactorized(const SparseVector& a_top, const SparseVector& b_top, const SparseVector& d) {
    CheckSameVocab(a_top, d);
    CheckSameVocab(b_top, d);
    RequireNonNegative(a_top, "query A");
    RequireNonNegative(b_top, "query B");
    RequireNonNegative(d, "document");
    auto side = [&d](const SparseVector& q) {
        double sum = 0.0;
        for (const auto& e : q.entries()) {
            double w = d.Get(e.term);
            if (w > 0.0) {
                sum += std::sqrt(e.weight * w);
            }
        }
        return sum;
    };
    double left = side(a_top);
    if (left == 0.0) {
        return 0.0;
    }
    return left * side(b_top);
}

CptQuery
MakeCptQuery(const SparseVector& a, const SparseVector& b, size_t m) {
    CptQuery q;
    q.expansion = ExpandQuery(a, b, m);
    q.a = a;
    q.b = b;
    q.a_top = TopM(a, m);
    q.b_top = TopM(b, m);
    return q;
}

std::string
PseudoTermKey(const Vocabulary& vocab, TermId left, TermId right) {
    std::string key = vocab.Term(left);
    key += kPseudoTermSeparator;
    key += vocab.Term(right);
    return key;
}

std::optional<std::pair<std::string_view, std::string_view>>
SplitPseudoTermKey(std::string_view key) {
    auto pos = key.find(kPseudoTermSeparator);
    if (pos == std::string_view::npos) {
        return std::nullopt;
    }
    return std::make_pair(key.substr(0, pos), key.substr(pos + kPseudoTermSeparator.size()));
}

}  // namespace setsparse
