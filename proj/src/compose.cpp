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

#include "setsparse/compose.h"

#include <array>
#include <cmath>

#include "setsparse/error.h"

namespace setsparse {

namespace {

constexpr std::array<std::pair<SetOperator, std::string_view>, 4> kOperatorNames = {{
    {SetOperator::kAtomic, "atomic"},
    {SetOperator::kDifference, "difference"},
    {SetOperator::kUnion, "union"},
    {SetOperator::kIntersection, "intersection"},
}};

constexpr std::array<std::pair<ComposeMethod, std::string_view>, 9> kMethodNames = {{
    {ComposeMethod::kAtomic, "atomic"},
    {ComposeMethod::kSubtract, "subtract"},
    {ComposeMethod::kIgnore, "ignore"},
    {ComposeMethod::kDisentangled, "disentangled"},
    {ComposeMethod::kOrthogonal, "orthogonal"},
    {ComposeMethod::kNrf, "nrf"},
    {ComposeMethod::kAdd, "add"},
    {ComposeMethod::kMaxPool, "maxpool"},
    {ComposeMethod::kCpt, "cpt"},
}};

}  // namespace

std::string_view
ToString(SetOperator op) {
    for (const auto& [value, name] : kOperatorNames) {
        if (value == op) {
            return name;
        }
    }
    return "?";
}

std::string_view
ToString(ComposeMethod method) {
    for (const auto& [value, name] : kMethodNames) {
        if (value == method) {
            return name;
        }
    }
    return "?";
}

SetOperator
ParseSetOperator(std::string_view name) {
    for (const auto& [value, known] : kOperatorNames) {
        if (known == name) {
            return value;
        }
    }
    throw Error(ErrorKind::kInvalidArgument,
                "unknown set operator '" + std::string(name) +
                    "' (expected atomic, difference, union or intersection)");
}

ComposeMethod
ParseComposeMethod(std::string_view name) {
    for (const auto& [value, known] : kMethodNames) {
        if (known == name) {
            return value;
        }
    }
    throw Error(ErrorKind::kInvalidArgument,
                "unknown method '" + std::string(name) +
                    "' (expected subtract, ignore, disentangled, orthogonal, nrf, add, maxpool, "
                    "cpt or atomic)");
}

bool
IsValidCombination(SetOperator op, ComposeMethod method) {
    using M = ComposeMethod;
    switch (op) {
        case SetOperator::kAtomic:
            return method == M::kAtomic;
        case SetOperator::kDifference:
            return method == M::kSubtract || method == M::kIgnore || method == M::kDisentangled ||
                   method == M::kOrthogonal || method == M::kNrf;
        case SetOperator::kUnion:
            return method == M::kAdd || method == M::kMaxPool;
        case SetOperator::kIntersection:
            return method == M::kAdd || method == M::kMaxPool || method == M::kCpt;
    }
    return false;
}

ComposeMethod
DefaultMethod(SetOperator op) {
    switch (op) {
        case SetOperator::kAtomic:
            return ComposeMethod::kAtomic;
        case SetOperator::kDifference:
            return ComposeMethod::kDisentangled;
        case SetOperator::kUnion:
            return ComposeMethod::kMaxPool;
        case SetOperator::kIntersection:
            return ComposeMethod::kCpt;
    }
    return ComposeMethod::kAtomic;
}

void
Validate(const CompositionalQuery& q) {
    std::string where = q.qid.empty() ? std::string("query") : "query '" + q.qid + "'";
    if (q.op == SetOperator::kAtomic && q.b.has_value()) {
        throw Error(ErrorKind::kInvalidArgument, where + ": atomic queries take no B vector");
    }
    if (q.op != SetOperator::kAtomic && !q.b.has_value()) {
        throw Error(ErrorKind::kInvalidArgument,
                    where + ": operator '" + std::string(ToString(q.op)) + "' needs a B vector");
    }
    if (!IsValidCombination(q.op, q.method)) {
        throw Error(ErrorKind::kInvalidArgument,
                    where + ": method '" + std::string(ToString(q.method)) +
                        "' is not defined for operator '" + std::string(ToString(q.op)) + "'");
    }
    if (q.params.m == 0) {
        throw Error(ErrorKind::kInvalidArgument, where + ": m must be >= 1");
    }
}

ComposedQuery
Compose(const CompositionalQuery& q) {
    Validate(q);
    if (q.op == SetOperator::kAtomic) {
        return q.a;
    }
    const SparseVector& a = q.a;
    const SparseVector& b = *q.b;
    bool is_union = q.op == SetOperator::kUnion;
    switch (q.method) {
        case ComposeMethod::kSubtract:
            return DifferenceSubtract(a, b);
        case ComposeMethod::kIgnore:
            return DifferenceIgnore(a, b);
        case ComposeMethod::kDisentangled:
            return DifferenceDisentangled(a, b);
        case ComposeMethod::kOrthogonal:
            return DifferenceOrthogonal(a, b);
        case ComposeMethod::kNrf:
            return DifferenceNrf(a, b, q.params.lambda);
        case ComposeMethod::kAdd:
            return is_union ? UnionAdd(a, b) : IntersectionAdd(a, b);
        case ComposeMethod::kMaxPool:
            return is_union ? UnionMaxPool(a, b) : IntersectionMaxPool(a, b);
        case ComposeMethod::kCpt:
            return IntersectionCpt(a, b, q.params.m);
        case ComposeMethod::kAtomic:
            break;
    }
    throw Error(ErrorKind::kInternal, "unreachable compose dispatch");
}

SparseVector
DifferenceSubtract(const SparseVector& a, const SparseVector& b) {
    return Sub(a, b);
}

SparseVector
DifferenceIgnore(const SparseVector& a, const SparseVector& b) {
    CheckSameVocab(a, b);
    return a;
}

SparseVector
DifferenceDisentangled(const SparseVector& a, const SparseVector& b) {
    return Sub(a, MaskRemove(b, a));
}

SparseVector
DifferenceOrthogonal(const SparseVector& a, const SparseVector& b) {
    return Sub(a, Project(a, b));
}

SparseVector
DifferenceNrf(const SparseVector& a, const SparseVector& b, double lambda) {
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::kInvalidArgument, "NRF lambda must be a finite value >= 0");
    }
    return SubScaled(a, b, lambda);
}

SparseVector
UnionAdd(const SparseVector& a, const SparseVector& b) {
    return Add(a, b);
}

SparseVector
UnionMaxPool(const SparseVector& a, const SparseVector& b) {
    return MaxPool(a, b);
}

SparseVector
IntersectionAdd(const SparseVector& a, const SparseVector& b) {
    return Add(a, b);
}

SparseVector
IntersectionMaxPool(const SparseVector& a, const SparseVector& b) {
    return MaxPool(a, b);
}

CptQuery
IntersectionCpt(const SparseVector& a, const SparseVector& b, size_t m) {
    return MakeCptQuery(a, b, m);
}

}  // namespace setsparse
