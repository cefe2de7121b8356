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

#include "setsparse/inverted_index.h"

#include <zlib.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <sstream>

#include "setsparse/error.h"

namespace setsparse {

namespace {

constexpr std::string_view kMagic = "SSPIDX\r\n";

class ByteWriter {
public:
    void
    U8(uint8_t v) {
        out_.push_back(static_cast<char>(v));
    }

    void
    U32(uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            U8(static_cast<uint8_t>(v >> (8 * i)));
        }
    }

    void
    U64(uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            U8(static_cast<uint8_t>(v >> (8 * i)));
        }
    }

    void
    F64(double v) {
        uint64_t bits;
        std::memcpy(&bits, &v, sizeof(bits));
        U64(bits);
    }

    void
    VarUint(uint64_t v) {
        while (v >= 0x80) {
            U8(static_cast<uint8_t>(v | 0x80));
            v >>= 7;
        }
        U8(static_cast<uint8_t>(v));
    }

    void
    Bytes(std::string_view s) {
        if (s.size() > std::numeric_limits<uint32_t>::max()) {
            throw Error(ErrorKind::kInvalidArgument, "string too long to serialise");
        }
        U32(static_cast<uint32_t>(s.size()));
        out_.append(s);
    }

    void
    Raw(std::string_view s) {
        out_.append(s);
    }

    std::string&
    buffer() {
        return out_;
    }

private:
    std::string out_;
};

class ByteReader {
public:
    explicit ByteReader(std::string_view data) : data_(data) {
    }

    uint8_t
    U8() {
        Need(1);
        return static_cast<uint8_t>(data_[pos_++]);
    }

    uint32_t
    U32() {
        uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<uint32_t>(U8()) << (8 * i);
        }
        return v;
    }

    uint64_t
    U64() {
        uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<uint64_t>(U8()) << (8 * i);
        }
        return v;
    }

    double
    F64() {
        uint64_t bits = U64();
        double v;
        std::memcpy(&v, &bits, sizeof(v));
        return v;
    }

    uint64_t
    VarUint() {
        uint64_t v = 0;
        for (int shift = 0; shift < 64; shift += 7) {
            uint8_t b = U8();
            v |= static_cast<uint64_t>(b & 0x7F) << shift;
            if ((b & 0x80) == 0) {
                return v;
            }
        }
        throw Error(ErrorKind::kCorruptFile, "index file: varint overflow");
    }

    std::string
    Bytes() {
        uint32_t len = U32();
        Need(len);
        std::string s(data_.substr(pos_, len));
        pos_ += len;
        return s;
    }

    [[nodiscard]] size_t
    remaining() const {
        return data_.size() - pos_;
    }

    // Sanity bound for element counts read from the file: each element needs
    // at least `min_bytes`, so a count beyond remaining()/min_bytes is corrupt.
    uint64_t
    Count(uint64_t count, size_t min_bytes) const {
        if (count > remaining() / min_bytes) {
            throw Error(ErrorKind::kCorruptFile, "index file: implausible element count");
        }
        return count;
    }

private:
    void
    Need(size_t n) const {
        if (n > remaining()) {
            throw Error(ErrorKind::kCorruptFile, "index file is truncated");
        }
    }

    std::string_view data_;
    size_t pos_ = 0;
};

uint32_t
Checksum(std::string_view bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths; feed large buffers in chunks.
    constexpr size_t kChunk = 1U << 30;
    for (size_t off = 0; off < bytes.size(); off += kChunk) {
        size_t len = std::min(kChunk, bytes.size() - off);
        crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data() + off), static_cast<uInt>(len));
    }
    return static_cast<uint32_t>(crc);
}

}  // namespace

void
SelectTopK(std::vector<Hit>& hits, size_t k) {
    if (k < hits.size()) {
        std::partial_sort(hits.begin(), hits.begin() + static_cast<ptrdiff_t>(k), hits.end(),
                          RanksBefore);
        hits.resize(k);
    } else {
        std::sort(hits.begin(), hits.end(), RanksBefore);
    }
}

std::optional<DocId>
InvertedIndex::FindDoc(std::string_view name) const {
    auto it = doc_lookup_.find(std::string(name));
    if (it == doc_lookup_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::span<const Posting>
InvertedIndex::Postings(TermId term) const {
    if (term >= postings_.size()) {
        return {};
    }
    return postings_[term];
}

double
InvertedIndex::DocWeight(TermId term, DocId doc) const {
    auto list = Postings(term);
    auto it = std::lower_bound(list.begin(), list.end(), doc,
                               [](const Posting& p, DocId d) { return p.doc < d; });
    if (it == list.end() || it->doc != doc) {
        return 0.0;
    }
    return it->weight;
}

std::vector<SparseVector>
InvertedIndex::ForwardVectors() const {
    std::vector<std::vector<Entry>> rows(doc_count());
    for (size_t term = 0; term < postings_.size(); ++term) {
        for (const auto& p : postings_[term]) {
            rows[p.doc].push_back({static_cast<TermId>(term), p.weight});
        }
    }
    std::vector<SparseVector> out;
    out.reserve(rows.size());
    for (auto& row : rows) {
        out.push_back(SparseVector::FromCanonical(vocab_->tag(), std::move(row)));
    }
    return out;
}

void
InvertedIndex::CheckQueryVocab(VocabTag tag) const {
    if (tag != kUnboundVocab && tag != vocab_->tag()) {
        throw Error(ErrorKind::kVocabularyMismatch,
                    "query vector was not built against the index vocabulary");
    }
}

SearchResult
InvertedIndex::Search(const SparseVector& query, size_t k) const {
    if (k == 0) {
        throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
    }
    CheckQueryVocab(query.vocab_tag());
    std::vector<double> acc(doc_count(), 0.0);
    std::vector<uint8_t> seen(doc_count(), 0);
    std::vector<DocId> touched;
    for (const auto& e : query.entries()) {
        for (const auto& p : Postings(e.term)) {
            if (seen[p.doc] == 0) {
                seen[p.doc] = 1;
                touched.push_back(p.doc);
            }
            acc[p.doc] += e.weight * p.weight;
        }
    }
    std::vector<Hit> hits;
    hits.reserve(touched.size());
    for (DocId doc : touched) {
        hits.push_back({doc, acc[doc]});
    }
    SelectTopK(hits, k);
    return hits;
}

SearchResult
InvertedIndex::SearchCpt(const CptQuery& query, size_t k, size_t candidate_pool) const {
    if (k == 0 || candidate_pool == 0) {
        throw Error(ErrorKind::kInvalidArgument, "k and candidate_pool must be >= 1");
    }
    if (has_negative_weights_) {
        throw Error(ErrorKind::kCptDomain,
                    "combined pseudo-term retrieval needs a corpus without negative weights");
    }
    CheckQueryVocab(query.a.vocab_tag());
    CheckQueryVocab(query.b.vocab_tag());
    if (query.a_top.empty() || query.b_top.empty()) {
        return {};
    }
    SearchResult candidates = Search(MaxPool(query.a, query.b), candidate_pool);

    // Only the truncated query terms matter for rescoring.
    std::vector<TermId> terms;
    for (const auto& e : query.a_top.entries()) {
        terms.push_back(e.term);
    }
    for (const auto& e : query.b_top.entries()) {
        terms.push_back(e.term);
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());

    std::vector<Hit> hits;
    std::vector<Entry> restricted;
    for (const auto& candidate : candidates) {
        restricted.clear();
        for (TermId term : terms) {
            double w = DocWeight(term, candidate.doc);
            if (w != 0.0) {
                restricted.push_back({term, w});
            }
        }
        auto doc = SparseVector::FromCanonical(vocab_->tag(), restricted);
        double score = CptScoreFactorized(query.a_top, query.b_top, doc);
        if (score != 0.0) {
            hits.push_back({candidate.doc, score});
        }
    }
    SelectTopK(hits, k);
    return hits;
}

std::string
InvertedIndex::Serialize() const {
    ByteWriter w;
    w.Raw(kMagic);
    w.U32(kFormatVersion);
    w.U64(vocab_->size());
    for (const auto& term : vocab_->terms()) {
        w.Bytes(term);
    }
    w.U64(doc_names_.size());
    for (const auto& name : doc_names_) {
        w.Bytes(name);
    }
    w.U64(postings_.size());
    for (const auto& list : postings_) {
        w.U64(list.size());
        DocId prev = 0;
        for (const auto& p : list) {
            w.VarUint(p.doc - prev);
            w.F64(p.weight);
            prev = p.doc;
        }
    }
    w.U32(Checksum(w.buffer()));
    return std::move(w.buffer());
}

void
InvertedIndex::Save(const std::filesystem::path& path) const {
    std::string bytes = Serialize();
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorKind::kIo, "cannot open '" + path.string() + "' for writing");
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
        throw Error(ErrorKind::kIo, "failed writing index to '" + path.string() + "'");
    }
}

InvertedIndex
InvertedIndex::Load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::kIo, "cannot open index file '" + path.string() + "'");
    }
    std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorKind::kIo, "failed reading index file '" + path.string() + "'");
    }
    return Deserialize(bytes);
}

InvertedIndex
InvertedIndex::Deserialize(std::string_view bytes) {
    if (bytes.size() < kMagic.size() + 8 || bytes.substr(0, kMagic.size()) != kMagic) {
        throw Error(ErrorKind::kCorruptFile, "not an index file (bad magic or truncated header)");
    }
    ByteReader header(bytes.substr(kMagic.size()));
    uint32_t version = header.U32();
    if (version != kFormatVersion) {
        throw Error(ErrorKind::kVersionMismatch,
                    "index format version " + std::to_string(version) + " (expected " +
                        std::to_string(kFormatVersion) + ")");
    }
    std::string_view body = bytes.substr(0, bytes.size() - 4);
    ByteReader trailer(bytes.substr(bytes.size() - 4));
    if (trailer.U32() != Checksum(body)) {
        throw Error(ErrorKind::kCorruptFile, "index file checksum mismatch");
    }

    ByteReader r(body.substr(kMagic.size() + 4));
    uint64_t term_count = r.Count(r.U64(), 4);
    std::vector<std::string> terms;
    terms.reserve(term_count);
    for (uint64_t i = 0; i < term_count; ++i) {
        terms.push_back(r.Bytes());
    }
    InvertedIndex index;
    try {
        index.vocab_ = std::make_shared<Vocabulary>(std::move(terms), Vocabulary::Mode::kStrict);
    } catch (const Error& e) {
        throw Error(ErrorKind::kCorruptFile, std::string("index vocabulary invalid: ") + e.what());
    }
    uint64_t doc_count = r.Count(r.U64(), 4);
    if (doc_count > std::numeric_limits<DocId>::max()) {
        throw Error(ErrorKind::kCorruptFile, "index file: doc count exceeds id space");
    }
    for (uint64_t i = 0; i < doc_count; ++i) {
        std::string name = r.Bytes();
        if (!index.doc_lookup_.emplace(name, static_cast<DocId>(i)).second) {
            throw Error(ErrorKind::kCorruptFile, "index file: duplicate doc name '" + name + "'");
        }
        index.doc_names_.push_back(std::move(name));
    }
    uint64_t list_count = r.Count(r.U64(), 8);
    if (list_count > term_count) {
        throw Error(ErrorKind::kCorruptFile, "index file: more posting lists than terms");
    }
    index.postings_.resize(list_count);
    for (auto& list : index.postings_) {
        uint64_t n = r.Count(r.U64(), 9);
        list.reserve(n);
        uint64_t doc = 0;
        for (uint64_t i = 0; i < n; ++i) {
            uint64_t delta = r.VarUint();
            if (i > 0 && delta == 0) {
                throw Error(ErrorKind::kCorruptFile, "index file: doc-ids not increasing");
            }
            doc += delta;
            double weight = r.F64();
            if (doc >= doc_count || !std::isfinite(weight) || weight == 0.0) {
                throw Error(ErrorKind::kCorruptFile, "index file: invalid posting");
            }
            index.has_negative_weights_ |= weight < 0.0;
            list.push_back({static_cast<DocId>(doc), weight});
        }
    }
    if (r.remaining() != 0) {
        throw Error(ErrorKind::kCorruptFile, "index file: trailing bytes");
    }
    return index;
}

IndexBuilder::IndexBuilder(std::shared_ptr<Vocabulary> vocab) {
    if (!vocab) {
        throw Error(ErrorKind::kInvalidArgument, "index builder needs a vocabulary");
    }
    index_.vocab_ = std::move(vocab);
}

DocId
IndexBuilder::Add(std::string name, const SparseVector& doc) {
    index_.CheckQueryVocab(doc.vocab_tag());
    if (index_.doc_names_.size() >= std::numeric_limits<DocId>::max()) {
        throw Error(ErrorKind::kInternal, "corpus exceeds 32-bit doc-id space");
    }
    auto id = static_cast<DocId>(index_.doc_names_.size());
    if (!index_.doc_lookup_.emplace(name, id).second) {
        throw Error(ErrorKind::kDuplicateId, "duplicate document name '" + name + "'");
    }
    index_.doc_names_.push_back(std::move(name));
    for (const auto& e : doc.entries()) {
        if (e.term >= index_.postings_.size()) {
            index_.postings_.resize(e.term + 1);
        }
        index_.postings_[e.term].push_back({id, e.weight});
        index_.has_negative_weights_ |= e.weight < 0.0;
    }
    return id;
}

InvertedIndex
IndexBuilder::Finish() && {
    index_.postings_.resize(std::max(index_.postings_.size(), index_.vocab_->size()));
    return std::move(index_);
}

ExpandedCptIndex
ExpandedCptIndex::Build(const InvertedIndex& base) {
    if (base.has_negative_weights()) {
        throw Error(ErrorKind::kCptDomain,
                    "combined pseudo-term expansion needs a corpus without negative weights");
    }
    ExpandedCptIndex out;
    out.tag_ = base.vocabulary().tag();
    out.doc_count_ = base.doc_count();
    auto docs = base.ForwardVectors();
    for (DocId doc = 0; doc < docs.size(); ++doc) {
        auto expansion = ExpandDoc(docs[doc]);
        for (const auto& p : expansion.entries()) {
            auto [it, inserted] =
                out.pair_ids_.emplace(PairKey(p.left, p.right), static_cast<uint32_t>(out.postings_.size()));
            if (inserted) {
                out.postings_.emplace_back();
            }
            out.postings_[it->second].push_back({doc, p.weight});
        }
    }
    return out;
}

SearchResult
ExpandedCptIndex::Search(const CptQuery& query, size_t k) const {
    if (k == 0) {
        throw Error(ErrorKind::kInvalidArgument, "k must be >= 1");
    }
    if (query.expansion.vocab_tag() != kUnboundVocab && query.expansion.vocab_tag() != tag_) {
        throw Error(ErrorKind::kVocabularyMismatch,
                    "query vector was not built against the index vocabulary");
    }
    std::vector<double> acc(doc_count_, 0.0);
    std::vector<uint8_t> seen(doc_count_, 0);
    std::vector<DocId> touched;
    for (const auto& q : query.expansion.entries()) {
        auto it = pair_ids_.find(PairKey(q.left, q.right));
        if (it == pair_ids_.end()) {
            continue;
        }
        for (const auto& p : postings_[it->second]) {
            if (seen[p.doc] == 0) {
                seen[p.doc] = 1;
                touched.push_back(p.doc);
            }
            acc[p.doc] += q.weight * p.weight;
        }
    }
    std::vector<Hit> hits;
    hits.reserve(touched.size());
    for (DocId doc : touched) {
        hits.push_back({doc, acc[doc]});
    }
    SelectTopK(hits, k);
    return hits;
}

}  // namespace setsparse
