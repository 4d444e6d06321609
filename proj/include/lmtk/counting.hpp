#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "lmtk/corpus.hpp"
#include "lmtk/rolling_hash.hpp"

namespace lmtk {

struct CountingConfig {
    uint32_t l_max = 16;   // max candidate length, in code points
    uint32_t min_freq = 2; // candidates below this are discarded
    uint64_t hash_base = RollingHash::kDefaultBase;
};

constexpr uint32_t kNoPos = std::numeric_limits<uint32_t>::max();

// The evolving token sequence of one shard. The underlying text never
// changes; tokens are represented as a linked list of start offsets, so
// accepting a token is just clearing interior boundaries.
class TokenizedShard {
public:
    explicit TokenizedShard(Shard shard);

    const Shard& shard() const { return shard_; }
    std::string_view text() const { return shard_.text; }

    bool is_boundary(uint32_t pos) const { return boundary_[pos]; }
    // Next/previous token start within the same document; kNoPos at doc edges.
    uint32_t next(uint32_t pos) const { return next_[pos]; }
    uint32_t prev(uint32_t pos) const { return prev_[pos]; }
    // Code point length of the token starting at pos.
    uint8_t token_char_len(uint32_t pos) const { return char_len_[pos]; }

    size_t doc_count() const { return shard_.doc_count(); }
    uint32_t doc_begin(size_t d) const { return shard_.doc_begin[d]; }
    uint32_t doc_end(size_t d) const { return shard_.doc_begin[d + 1]; }
    // End offset of the document containing pos.
    uint32_t doc_end_of(uint32_t pos) const;

    size_t token_count() const { return token_count_; }
    size_t char_count() const { return char_count_; }

    // Merges the run of tokens spanning [a, b) into a single token.
    // Preconditions: a and b are boundaries of the same document with at
    // least two tokens between them.
    void merge(uint32_t a, uint32_t b);

    // Replaces every occurrence of `surface` that aligns with current token
    // boundaries, leftmost-first and non-overlapping. Returns the number of
    // replacements. Linear-scan version used by tests and small runs; the
    // trainer locates occurrences through a suffix array instead.
    size_t apply_token(std::string_view surface);

    // Current token surfaces in order, documents concatenated.
    std::vector<std::string_view> tokens() const;

private:
    Shard shard_;
    std::vector<uint8_t> boundary_;
    std::vector<uint32_t> next_, prev_;
    std::vector<uint8_t> char_len_;
    size_t token_count_ = 0;
    size_t char_count_ = 0;
};

// Open-addressing candidate table keyed by rolling-hash digest. Colliding
// digests chain to further entries and are disambiguated by comparing the
// actual surfaces, so counts are exact regardless of hash quality.
class CandidateTable {
public:
    struct Entry {
        uint64_t digest = 0;
        uint32_t count = 0;
        uint32_t chain = kNoPos; // next entry with the same digest
        uint32_t shard = 0;      // sample occurrence
        uint32_t pos = 0;
        uint16_t byte_len = 0;
        uint8_t char_len = 0;
    };

    explicit CandidateTable(std::vector<std::string_view> texts);

    // Adds `delta` to the candidate's count, inserting it if absent.
    void add(uint64_t digest, uint32_t shard, uint32_t pos, uint16_t byte_len,
             uint8_t char_len, uint32_t delta);

    // Thread-safe decrement of an existing candidate; no-op when absent.
    void decrement(uint64_t digest, std::string_view surface);

    const Entry* find(uint64_t digest, std::string_view surface) const;

    std::string_view surface(const Entry& e) const {
        return texts_[e.shard].substr(e.pos, e.byte_len);
    }

    size_t size() const { return entries_.size(); }
    const Entry& entry(size_t i) const { return entries_[i]; }
    const std::vector<Entry>& entries() const { return entries_; }

private:
    uint32_t* slot_for(uint64_t digest);
    void grow();

    std::vector<std::string_view> texts_;
    std::vector<Entry> entries_;
    std::vector<uint32_t> slots_; // entry index + 1; 0 = empty
    size_t mask_ = 0;
};

// True when `surface` is admissible in word-separated mode: the sentinel
// may appear only as the final code point.
bool word_separated_ok(std::string_view surface, std::string_view sentinel_utf8);

// Optional admission predicate over (start pos, byte length) of a run
// within the shard text. Runs it rejects are not stored; used to keep
// candidates that cannot reach min_freq out of the table.
using RunFilter = bool (*)(const void* ctx, uint32_t pos, uint32_t byte_len);

// Enumerates every run of >= 2 adjacent tokens with total length <= l_max
// code points (never crossing a document boundary) and accumulates its
// occurrence count into `table`.
void accumulate_candidates(const TokenizedShard& ts, uint32_t shard_id,
                           const CountingConfig& cfg, const SentinelConfig& scfg,
                           CandidateTable& table, RunFilter admit = nullptr,
                           const void* admit_ctx = nullptr);

// Spec-facing convenience: per-shard candidate counts with the min_freq
// filter applied.
std::map<std::string, uint64_t> enumerate_candidates(const TokenizedShard& ts,
                                                     const CountingConfig& cfg,
                                                     const SentinelConfig& scfg = {});

} // namespace lmtk
