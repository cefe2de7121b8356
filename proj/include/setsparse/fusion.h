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

#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace setsparse {

/// Scores of one query over a set of documents, keyed by doc name.
struct ScoredRun {
    std::string qid;
    std::map<std::string, double> scores;
};

enum class FuseOp { kPlus, kTimes, kMinus };

std::string_view
ToString(FuseOp op);

FuseOp
ParseFuseOp(std::string_view name);

struct FuseResult {
    ScoredRun run;
    /// Human-readable notes, e.g. a run whose scores are all equal under
    /// min-max scaling.
    std::vector<std::string> warnings;
};

/// Min-max scales scores to [0, 1]. A run whose max equals its min maps
/// every score to 0 and reports `degenerate`.
ScoredRun
MinMaxScale(const ScoredRun& run, bool* degenerate = nullptr);

/// Combines two per-atomic-query runs document by document. A document
/// missing from one run contributes 0 from that side (after scaling, too).
/// The result keeps run_a's qid.
FuseResult
Fuse(const ScoredRun& run_a, const ScoredRun& run_b, FuseOp op, bool scaled);

struct RankedDoc {
    std::string doc;
    double score;
};

/// Orders a run by score descending, ties by ascending doc name.
std::vector<RankedDoc>
Rank(const ScoredRun& run);

}  // namespace setsparse
