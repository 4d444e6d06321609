#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmtk/errors.hpp"

namespace lmtk {

struct SentinelConfig {
    char32_t sentinel = U'␣'; // open box, replaces U+0020
    bool word_separated = false;
};

struct RawCorpus {
    std::vector<std::string> documents;
    std::string eot_marker = "<eot>";
};

// A shard is a whole number of preprocessed documents, concatenated.
// Document boundaries are kept so that no candidate run crosses them.
struct Shard {
    uint32_t id = 0;
    std::string text;                   // preprocessed UTF-8, docs concatenated
    std::vector<uint32_t> doc_begin;    // byte offsets; back() == text.size()
    size_t byte_len() const { return text.size(); }
    size_t doc_count() const { return doc_begin.empty() ? 0 : doc_begin.size() - 1; }
};

// Replaces every U+0020 with the sentinel. Throws SentinelCollision if the
// sentinel already occurs in the text, InvalidUtf8 on bad input.
std::string preprocess(std::string_view text, const SentinelConfig& cfg);

// Inverse of preprocess: sentinel back to space.
std::string restore_spaces(std::string_view text, const SentinelConfig& cfg);

// Greedy bin packing of preprocessed documents in order, whole docs only.
std::vector<Shard> shard(const RawCorpus& corpus, size_t max_shard_bytes,
                         const SentinelConfig& cfg);

// Concatenation of shard texts with EOT separators restored between docs.
std::string reassemble(const std::vector<Shard>& shards, const std::string& eot_marker);

// Character-level substitution noise: each non-sentinel code point is
// replaced with probability `rate` by a uniform random ASCII letter.
// Deterministic for a fixed seed; code point count is preserved.
std::string inject_noise(std::string_view text, double rate, uint64_t seed,
                         const SentinelConfig& cfg = {});

// Loads documents from a file. If `newline_delimited`, one document per
// line; otherwise the file is split on the EOT marker.
RawCorpus load_corpus(const std::string& path, bool newline_delimited,
                      const std::string& eot_marker = "<eot>");

// FNV-1a over the concatenated shard texts; used to tie checkpoints to
// their training corpus.
uint64_t corpus_digest(const std::vector<Shard>& shards);

} // namespace lmtk
