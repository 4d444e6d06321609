#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "lmtk/corpus.hpp"

namespace lmtk {

inline constexpr const char* kEotToken = "<eot>";
inline constexpr const char* kPadToken = "<pad>";

// Ordered token set; the token id is the array index and never changes once
// assigned. The first base_size entries are the special tokens plus every
// single code point seen in the training corpus.
struct Vocabulary {
    std::vector<std::string> tokens;
    size_t base_size = 0;

    char32_t sentinel = U'␣';
    uint32_t l_max = 16;
    bool word_separated = false;
    uint64_t corpus_digest = 0;
    uint64_t iterations = 0;
    size_t target_size = 0;

    std::unordered_map<std::string, uint32_t> index;

    uint32_t append(const std::string& surface);
    bool contains(const std::string& surface) const { return index.count(surface) > 0; }
    // kNoId when absent.
    uint32_t id_of(const std::string& surface) const;
    size_t size() const { return tokens.size(); }

    void rebuild_index();

    static constexpr uint32_t kNoId = 0xFFFFFFFFu;
};

// Special tokens plus the sorted distinct code points of the shard texts.
Vocabulary base_vocabulary(const std::vector<Shard>& shards, const SentinelConfig& cfg,
                           uint32_t l_max);

void save_vocabulary(const Vocabulary& v, const std::string& path);
Vocabulary load_vocabulary(const std::string& path);

struct Checkpoint {
    Vocabulary vocab;
    uint64_t iteration = 0;
};

void save_checkpoint(const Checkpoint& c, const std::string& path);
// Throws CorruptCheckpoint on checksum mismatch, Error when missing.
Checkpoint load_checkpoint(const std::string& path);

} // namespace lmtk
