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

#include <span>
#include <vector>

#include "setsparse/sparse_vector.h"
#include "setsparse/vocabulary.h"

namespace setsparse {

/// Raw MLM-head scores: one row per input position, one column per
/// vocabulary term. Column c carries term-id columns()[c].
class LogitMatrix {
public:
    /// `values` is row-major, rows * columns.size() long, all finite.
    LogitMatrix(const Vocabulary& vocab,
                std::vector<TermId> columns,
                size_t rows,
                std::vector<double> values);

    [[nodiscard]] size_t
    rows() const noexcept {
        return rows_;
    }

    [[nodiscard]] size_t
    cols() const noexcept {
        return columns_.size();
    }

    [[nodiscard]] std::span<const TermId>
    columns() const noexcept {
        return columns_;
    }

    [[nodiscard]] double
    at(size_t row, size_t col) const {
        return values_[row * columns_.size() + col];
    }

    [[nodiscard]] VocabTag
    vocab_tag() const noexcept {
        return tag_;
    }

    [[nodiscard]] LogitMatrix
    Negated() const;

private:
    VocabTag tag_;
    std::vector<TermId> columns_;
    size_t rows_;
    std::vector<double> values_;
};

enum class NegFormula {
    kCorrected,  // -log(1 + ReLU(-x - eps)): odd, zero on [-eps, eps]
    kLiteral,    // -log(1 + ReLU(-x + eps))
};

enum class Aggregation {
    kSpladeMax,
    kAbsMax,
    kSum,
};

struct ActivationConfig {
    double epsilon = 0.25;
    NegFormula neg_formula = NegFormula::kCorrected;
    Aggregation aggregation = Aggregation::kSum;
};

/// w_j = max_i log(1 + ReLU(out_ij)).
SparseVector
SpladeActivate(const LogitMatrix& logits);

double
SnreluPos(double x, double epsilon);

double
SnreluNeg(double x, double epsilon, NegFormula formula = NegFormula::kCorrected);

/// Combines the per-position positive and negative parts of one column.
/// `max_pos` is max_i pos_ij (>= 0), `min_neg` is min_i neg_ij (<= 0).
double
AggregateSigned(double max_pos, double min_neg, Aggregation aggregation);

/// Signed activation; cfg.aggregation must be kAbsMax or kSum.
SparseVector
SnreluActivate(const LogitMatrix& logits, const ActivationConfig& cfg);

/// Dispatches on cfg.aggregation: kSpladeMax runs SpladeActivate.
SparseVector
Activate(const LogitMatrix& logits, const ActivationConfig& cfg);

}  // namespace setsparse
