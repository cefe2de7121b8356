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

#include "setsparse/activations.h"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_set>

#include "setsparse/error.h"

namespace setsparse {

LogitMatrix::LogitMatrix(const Vocabulary& vocab,
                         std::vector<TermId> columns,
                         size_t rows,
                         std::vector<double> values)
    : tag_(vocab.tag()), columns_(std::move(columns)), rows_(rows), values_(std::move(values)) {
    if (rows_ == 0) {
        throw Error(ErrorKind::kInvalidArgument, "logit matrix needs at least one row");
    }
    if (values_.size() != rows_ * columns_.size()) {
        throw Error(ErrorKind::kInvalidArgument,
                    "logit matrix is not rectangular: " + std::to_string(values_.size()) +
                        " values for " + std::to_string(rows_) + " x " +
                        std::to_string(columns_.size()));
    }
    std::unordered_set<TermId> seen;
    for (TermId term : columns_) {
        if (term >= vocab.size()) {
            throw Error(ErrorKind::kInvalidArgument, "logit column term-id outside vocabulary");
        }
        if (!seen.insert(term).second) {
            throw Error(ErrorKind::kDuplicateId,
                        "logit matrix repeats column '" + vocab.Term(term) + "'");
        }
    }
    for (double v : values_) {
        if (!std::isfinite(v)) {
            throw Error(ErrorKind::kInvalidArgument, "logit matrix contains a non-finite value");
        }
    }
}

LogitMatrix
LogitMatrix::Negated() const {
    LogitMatrix copy = *this;
    for (double& v : copy.values_) {
        v = -v;
    }
    return copy;
}

namespace {

SparseVector
ColumnsToVector(const LogitMatrix& logits, std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.term < b.term; });
    std::erase_if(entries, [](const Entry& e) { return std::abs(e.weight) < kZeroWeightEpsilon; });
    return SparseVector::FromCanonical(logits.vocab_tag(), std::move(entries));
}

}  // namespace

SparseVector
SpladeActivate(const LogitMatrix& logits) {
    std::vector<Entry> entries;
    for (size_t c = 0; c < logits.cols(); ++c) {
        double best = 0.0;
        for (size_t r = 0; r < logits.rows(); ++r) {
            best = std::max(best, std::log1p(std::max(logits.at(r, c), 0.0)));
        }
        entries.push_back({logits.columns()[c], best});
    }
    return ColumnsToVector(logits, std::move(entries));
}

double
SnreluPos(double x, double epsilon) {
    return std::log1p(std::max(x - epsilon, 0.0));
}

double
SnreluNeg(double x, double epsilon, NegFormula formula) {
    double shifted = formula == NegFormula::kCorrected ? -x - epsilon : -x + epsilon;
    return -std::log1p(std::max(shifted, 0.0));
}

double
AggregateSigned(double max_pos, double min_neg, Aggregation aggregation) {
    switch (aggregation) {
        case Aggregation::kAbsMax:
            return std::abs(max_pos) >= std::abs(min_neg) ? max_pos : min_neg;
        case Aggregation::kSum:
            return max_pos + min_neg;
        case Aggregation::kSpladeMax:
            break;
    }
    throw Error(ErrorKind::kInvalidArgument, "signed aggregation must be absmax or sum");
}

SparseVector
SnreluActivate(const LogitMatrix& logits, const ActivationConfig& cfg) {
    if (cfg.epsilon < 0.0 || !std::isfinite(cfg.epsilon)) {
        throw Error(ErrorKind::kInvalidArgument, "epsilon must be a finite value >= 0");
    }
    if (cfg.aggregation == Aggregation::kSpladeMax) {
        throw Error(ErrorKind::kInvalidArgument, "signed aggregation must be absmax or sum");
    }
    std::vector<Entry> entries;
    for (size_t c = 0; c < logits.cols(); ++c) {
        double max_pos = 0.0;
        double min_neg = 0.0;
        for (size_t r = 0; r < logits.rows(); ++r) {
            double x = logits.at(r, c);
            max_pos = std::max(max_pos, SnreluPos(x, cfg.epsilon));
            min_neg = std::min(min_neg, SnreluNeg(x, cfg.epsilon, cfg.neg_formula));
        }
        entries.push_back({logits.columns()[c], AggregateSigned(max_pos, min_neg, cfg.aggregation)});
    }
    return ColumnsToVector(logits, std::move(entries));
}

SparseVector
Activate(const LogitMatrix& logits, const ActivationConfig& cfg) {
    if (cfg.aggregation == Aggregation::kSpladeMax) {
        return SpladeActivate(logits);
    }
    return SnreluActivate(logits, cfg);
}

}  // namespace setsparse
