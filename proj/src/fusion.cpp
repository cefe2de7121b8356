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

#include "setsparse/fusion.h"

#include <algorithm>

#include "setsparse/error.h"

namespace setsparse {

std::string_view
ToString(FuseOp op) {
    switch (op) {
        case FuseOp::kPlus:
            return "plus";
        case FuseOp::kTimes:
            return "times";
        case FuseOp::kMinus:
            return "minus";
    }
    return "?";
}

FuseOp
ParseFuseOp(std::string_view name) {
    if (name == "plus" || name == "+") {
        return FuseOp::kPlus;
    }
    if (name == "times" || name == "*") {
        return FuseOp::kTimes;
    }
    if (name == "minus" || name == "-") {
        return FuseOp::kMinus;
    }
    throw Error(ErrorKind::kInvalidArgument,
                "unknown fusion op '" + std::string(name) + "' (expected plus, times or minus)");
}

ScoredRun
MinMaxScale(const ScoredRun& run, bool* degenerate) {
    ScoredRun out{run.qid, {}};
    if (degenerate != nullptr) {
        *degenerate = false;
    }
    if (run.scores.empty()) {
        return out;
    }
    auto [lo, hi] = std::minmax_element(run.scores.begin(), run.scores.end(),
                                        [](const auto& x, const auto& y) { return x.second < y.second; });
    double min = lo->second;
    double range = hi->second - min;
    for (const auto& [doc, score] : run.scores) {
        out.scores.emplace(doc, range > 0.0 ? (score - min) / range : 0.0);
    }
    if (range <= 0.0 && degenerate != nullptr) {
        *degenerate = true;
    }
    return out;
}

FuseResult
Fuse(const ScoredRun& run_a, const ScoredRun& run_b, FuseOp op, bool scaled) {
    FuseResult result;
    result.run.qid = run_a.qid;
    const ScoredRun* a = &run_a;
    const ScoredRun* b = &run_b;
    ScoredRun scaled_a;
    ScoredRun scaled_b;
    if (scaled) {
        bool degenerate = false;
        scaled_a = MinMaxScale(run_a, &degenerate);
        if (degenerate) {
            result.warnings.push_back("run A for query '" + run_a.qid +
                                      "' has constant scores; scaled to 0");
        }
        scaled_b = MinMaxScale(run_b, &degenerate);
        if (degenerate) {
            result.warnings.push_back("run B for query '" + run_b.qid +
                                      "' has constant scores; scaled to 0");
        }
        a = &scaled_a;
        b = &scaled_b;
    }
    auto combine = [op](double x, double y) {
        double v = 0.0;
        switch (op) {
            case FuseOp::kPlus:
                v = x + y;
                break;
            case FuseOp::kTimes:
                v = x * y;
                break;
            case FuseOp::kMinus:
                v = x - y;
                break;
        }
        return v == 0.0 ? 0.0 : v;  // no negative zero
    };
    // Both maps are ordered by doc name, so a merge visits the union once.
    auto ia = a->scores.begin();
    auto ib = b->scores.begin();
    while (ia != a->scores.end() || ib != b->scores.end()) {
        if (ib == b->scores.end() || (ia != a->scores.end() && ia->first < ib->first)) {
            result.run.scores.emplace(ia->first, combine(ia->second, 0.0));
            ++ia;
        } else if (ia == a->scores.end() || ib->first < ia->first) {
            result.run.scores.emplace(ib->first, combine(0.0, ib->second));
            ++ib;
        } else {
            result.run.scores.emplace(ia->first, combine(ia->second, ib->second));
            ++ia;
            ++ib;
        }
    }
    return result;
}

std::vector<RankedDoc>
Rank(const ScoredRun& run) {
    std::vector<RankedDoc> out;
    out.reserve(run.scores.size());
    for (const auto& [doc, score] : run.scores) {
        out.push_back({doc, score});
    }
    // Input is already name-ordered; a stable sort keeps that as tie-break.
    std::stable_sort(out.begin(), out.end(),
                     [](const RankedDoc& x, const RankedDoc& y) { return x.score > y.score; });
    return out;
}

}  // namespace setsparse
