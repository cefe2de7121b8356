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

#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "setsparse/pseudo_terms.h"
#include "setsparse/sparse_vector.h"

namespace setsparse {

enum class SetOperator { kAtomic, kDifference, kUnion, kIntersection };

enum class ComposeMethod {
    kAtomic,
    kSubtract,
    kIgnore,
    kDisentangled,
    kOrthogonal,
    kNrf,
    kAdd,
    kMaxPool,
    kCpt,
};

std::string_view
ToString(SetOperator op);

std::string_view
ToString(ComposeMethod method);

/// Parses the CLI vocabulary; throws kInvalidArgument on unknown names.
SetOperator
ParseSetOperator(std::string_view name);

ComposeMethod
ParseComposeMethod(std::string_view name);

/// True when `method` is a valid way to realise `op`:
///   atomic       -> atomic
///   difference   -> subtract | ignore | disentangled | orthogonal | nrf
///   union        -> add | maxpool
///   intersection -> add | maxpool | cpt
bool
IsValidCombination(SetOperator op, ComposeMethod method);

/// The method used when a query does not name one.
ComposeMethod
DefaultMethod(SetOperator op);

struct ComposeParams {
    double lambda = 0.5;
    size_t m = kDefaultCptTopM;
};

struct CompositionalQuery {
    std::string qid;
    SetOperator op = SetOperator::kAtomic;
    ComposeMethod method = ComposeMethod::kAtomic;
    SparseVector a;
    std::optional<SparseVector> b;
    ComposeParams params;
};

using ComposedQuery = std::variant<SparseVector, CptQuery>;

/// Checks the invariants of a query: b present iff the operator is not
/// atomic, and the method is valid for the operator.
void
Validate(const CompositionalQuery& q);

ComposedQuery
Compose(const CompositionalQuery& q);

// Set difference.
SparseVector
DifferenceSubtract(const SparseVector& a, const SparseVector& b);

SparseVector
DifferenceIgnore(const SparseVector& a, const SparseVector& b);

/// a - (b with a's support masked out): a's entries are kept verbatim and
/// only terms unique to b are penalised.
SparseVector
DifferenceDisentangled(const SparseVector& a, const SparseVector& b);

/// a minus its projection onto b; throws kDegenerateProjection for |b| = 0.
SparseVector
DifferenceOrthogonal(const SparseVector& a, const SparseVector& b);

/// Rocchio-style negative feedback a - lambda * b, lambda >= 0.
SparseVector
DifferenceNrf(const SparseVector& a, const SparseVector& b, double lambda);

// Union and intersection. The add/maxpool variants share their math; both
// names exist so that runs are labelled by the intended operator.
SparseVector
UnionAdd(const SparseVector& a, const SparseVector& b);

SparseVector
UnionMaxPool(const SparseVector& a, const SparseVector& b);

SparseVector
IntersectionAdd(const SparseVector& a, const SparseVector& b);

SparseVector
IntersectionMaxPool(const SparseVector& a, const SparseVector& b);

CptQuery
IntersectionCpt(const SparseVector& a, const SparseVector& b, size_t m = kDefaultCptTopM);

}  // namespace setsparse
