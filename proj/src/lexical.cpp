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

#include "setsparse/lexical.h"

#include <algorithm>
#include <array>
#include <cmath>

#include "setsparse/error.h"

namespace setsparse {

namespace {

// Returns the decoded code point and advances `pos`. Malformed sequences
// decode as the single offending byte so that arbitrary bytes survive.
char32_t
DecodeUtf8(std::string_view text, size_t& pos) {
    auto byte = [&](size_t i) { return static_cast<unsigned char>(text[i]); };
    unsigned char lead = byte(pos);
    size_t len = lead < 0x80 ? 1 : (lead >> 5) == 0x6 ? 2 : (lead >> 4) == 0xE ? 3 : (lead >> 3) == 0x1E ? 4 : 0;
    if (len <= 1 || pos + len > text.size()) {
        ++pos;
        return lead;
    }
    char32_t cp = lead & (0x7F >> len);
    for (size_t k = 1; k < len; ++k) {
        unsigned char cont = byte(pos + k);
        if ((cont & 0xC0) != 0x80) {
            ++pos;
            return lead;
        }
        cp = (cp << 6) | (cont & 0x3F);
    }
    pos += len;
    return cp;
}

void
AppendUtf8(std::string& out, char32_t cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool
IsSeparator(char32_t cp) {
    if (cp < 0x80) {
        bool alnum = (cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
        return !alnum;
    }
    switch (cp) {
        case 0x85:
        case 0xA0:
        case 0xA1:
        case 0xA7:
        case 0xAB:
        case 0xB6:
        case 0xB7:
        case 0xBB:
        case 0xBF:
        case 0x1680:
        case 0xFEFF:
            return true;
        default:
            break;
    }
    return (cp >= 0x2000 && cp <= 0x206F) || (cp >= 0x2E00 && cp <= 0x2E7F) ||
           (cp >= 0x3000 && cp <= 0x303F) || (cp >= 0xFF01 && cp <= 0xFF0F) ||
           (cp >= 0xFF1A && cp <= 0xFF20) || (cp >= 0xFF3B && cp <= 0xFF40) ||
           (cp >= 0xFF5B && cp <= 0xFF65);
}

char32_t
ToLower(char32_t cp) {
    if ((cp >= 'A' && cp <= 'Z') || (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7)) {
        return cp + 0x20;
    }
    return cp;
}

constexpr std::array<std::string_view, 33> kStopwords = {
    "a",    "an",   "and",  "are", "as",    "at",   "be",   "but",  "by",   "for",  "if",
    "in",   "into", "is",   "it",  "no",    "not",  "of",   "on",   "or",   "such", "that",
    "the",  "their", "then", "there", "these", "they", "this", "to", "was", "will", "with"};

}  // namespace

bool
IsStopword(std::string_view token) {
    return std::binary_search(kStopwords.begin(), kStopwords.end(), token);
}

std::vector<std::string>
Tokenize(std::string_view text, const TokenizeOptions& options) {
    std::vector<std::string> tokens;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) {
            if (!options.drop_stopwords || !IsStopword(current)) {
                tokens.push_back(std::move(current));
            }
            current.clear();
        }
    };
    size_t pos = 0;
    while (pos < text.size()) {
        char32_t cp = DecodeUtf8(text, pos);
        if (IsSeparator(cp)) {
            flush();
        } else {
            AppendUtf8(current, ToLower(cp));
        }
    }
    flush();
    return tokens;
}

SparseVector
EncodeTf(std::span<const std::string> tokens, Vocabulary& vocab) {
    std::vector<Entry> entries;
    entries.reserve(tokens.size());
    for (const auto& token : tokens) {
        entries.push_back({vocab.Resolve(token), 1.0});
    }
    return SparseVector::FromEntries(vocab, std::move(entries));
}

void
CorpusStatsBuilder::Add(std::span<const std::string> tokens) {
    scratch_.clear();
    for (const auto& token : tokens) {
        scratch_.push_back(vocab_.Resolve(token));
    }
    std::sort(scratch_.begin(), scratch_.end());
    scratch_.erase(std::unique(scratch_.begin(), scratch_.end()), scratch_.end());
    if (!scratch_.empty() && scratch_.back() >= doc_freq_.size()) {
        doc_freq_.resize(scratch_.back() + 1, 0);
    }
    for (TermId term : scratch_) {
        ++doc_freq_[term];
    }
    ++doc_count_;
    total_len_ += tokens.size();
}

CorpusStats
CorpusStatsBuilder::Finish() const {
    CorpusStats stats;
    stats.doc_count = doc_count_;
    stats.doc_freq = doc_freq_;
    stats.avg_doc_len =
        doc_count_ == 0 ? 0.0 : static_cast<double>(total_len_) / static_cast<double>(doc_count_);
    return stats;
}

double
Bm25Idf(size_t doc_count, uint32_t doc_freq) {
    double n = static_cast<double>(doc_count);
    double df = static_cast<double>(doc_freq);
    return std::log(1.0 + (n - df + 0.5) / (df + 0.5));
}

SparseVector
EncodeBm25Doc(std::span<const std::string> tokens,
              const CorpusStats& stats,
              Vocabulary& vocab,
              const Bm25Params& params) {
    if (params.k1 < 0.0 || params.b < 0.0 || params.b > 1.0) {
        throw Error(ErrorKind::kInvalidArgument, "BM25 requires k1 >= 0 and b in [0, 1]");
    }
    SparseVector tf = EncodeTf(tokens, vocab);
    if (tf.empty()) {
        return tf;
    }
    // An empty-text corpus has avgdl 0; dl/avgdl is then taken as 1.
    double dl = static_cast<double>(tokens.size());
    double len_ratio = stats.avg_doc_len > 0.0 ? dl / stats.avg_doc_len : 1.0;
    double norm = params.k1 * (1.0 - params.b + params.b * len_ratio);
    std::vector<Entry> out;
    out.reserve(tf.nnz());
    for (const auto& e : tf.entries()) {
        uint32_t df = stats.DocFreq(e.term);
        if (df == 0 || df > stats.doc_count) {
            throw Error(ErrorKind::kInternal,
                        "corpus statistics inconsistent for term '" + vocab.Term(e.term) +
                            "' (df=" + std::to_string(df) + ")");
        }
        double weight = Bm25Idf(stats.doc_count, df) * e.weight * (params.k1 + 1.0) / (e.weight + norm);
        out.push_back({e.term, weight});
    }
    return SparseVector::FromEntries(vocab, std::move(out));
}

}  // namespace setsparse
