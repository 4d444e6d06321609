#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lmtk/corpus.hpp"
#include "lmtk/counting.hpp"
#include "lmtk/vocab.hpp"

namespace lmtk {

struct BpeConfig {
    SentinelConfig sentinel;
    uint32_t min_freq = 2; // stop once the best pair drops below this
    int workers = 1;
    uint64_t hash_base = RollingHash::kDefaultBase;
};

// Ordered merge list plus the base alphabet it was trained over. Applying
// the merges in order to a character sequence reproduces the training-time
// segmentation.
struct MergeTable {
    std::vector<std::pair<std::string, std::string>> merges;
    std::vector<std::string> alphabet; // sorted distinct code points
    char32_t sentinel = U'␣';
    bool word_separated = false;
};

struct BpeResult {
    MergeTable table;
    std::vector<uint64_t> merge_counts; // pair frequency at acceptance time
    bool early_halt = false;
    uint64_t corpus_digest = 0;
};

// Frequency-only pair merging: each iteration accepts the most frequent
// adjacent pair (ties: lexicographically smaller pair) until the implied
// vocabulary reaches K entries. Throws InvalidK when K is below the base
// vocabulary size.
BpeResult train_bpe(std::vector<Shard> shards, size_t target_size, const BpeConfig& cfg);

// Special tokens + alphabet + merge result surfaces (first occurrence wins
// when two merges produce the same surface).
Vocabulary bpe_vocabulary(const MergeTable& table);

// Applies the merge table to text and maps the resulting segments to ids of
// bpe_vocabulary(table); segments outside the vocabulary fall back to byte
// escapes. Compile once, encode many times.
class BpeEncoder {
public:
    explicit BpeEncoder(const MergeTable& table);

    std::vector<uint32_t> encode(std::string_view text) const;
    const Vocabulary& vocab() const { return vocab_; }

private:
    const MergeTable& table_;
    Vocabulary vocab_;
    std::unordered_map<std::string, uint32_t> ranks_; // pair key -> merge index
};

std::vector<uint32_t> encode_bpe(std::string_view text, const MergeTable& table);

// Fraction of vocabulary surfaces actually emitted when encoding the
// training shards.
double bpe_utilization(const MergeTable& table, const std::vector<Shard>& shards);

void save_merge_table(const MergeTable& table, const std::string& path);
MergeTable load_merge_table(const std::string& path);

// Internal pair identity: left and right surface, not just the concat.
std::string pair_key(std::string_view left, std::string_view right);

} // namespace lmtk
