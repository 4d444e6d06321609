#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmtk/corpus.hpp"
#include "lmtk/counting.hpp"
#include "lmtk/vocab.hpp"

namespace lmtk {

struct TrainConfig {
    size_t target_size = 0; // K, including the base alphabet
    CountingConfig counting;
    SentinelConfig sentinel;
    size_t scoreboard_m = 50000;
    int workers = 1;
    // Maintain candidate counts in place across iterations instead of
    // recounting every shard. Both modes are exact and produce identical
    // vocabularies; recount is the simple reference, in-place the fast path.
    bool incremental = true;
    // Accept up to `batch` candidates per counting round (surfaces that
    // neither contain nor are contained in each other). batch > 1 trades
    // the per-iteration exactness of the scores for fewer counting passes
    // and is excluded from determinism guarantees versus batch == 1.
    uint32_t batch = 1;
    size_t checkpoint_interval = 500; // iterations between checkpoints; 0 = off
    double checkpoint_seconds = 0;    // optional wall-clock cadence
    std::string checkpoint_path;
};

struct IterationRecord {
    std::string surface;
    uint64_t count = 0;
    uint64_t score = 0;
    size_t applied = 0;       // replacements performed
    uint64_t corpus_tokens = 0;
    double ave_length = 0;    // chars per token after this iteration
};

struct TrainReport {
    std::vector<IterationRecord> iterations;
    double count_seconds = 0;
    double select_seconds = 0;
    double apply_seconds = 0;
    bool early_halt = false;       // no candidate with count >= min_freq left
    uint64_t resumed_from = 0;     // first iteration covered by this report
};

struct TrainResult {
    Vocabulary vocab;
    TrainReport report;
    // Final tokenized corpus statistics.
    uint64_t total_tokens = 0;
    uint64_t total_chars = 0;
};

// Mean characters per token over the current tokenization (1/TPC).
double ave_length(const std::vector<TokenizedShard>& shards);

// The greedy loop: count candidates, accept the best-scoring one, apply it
// in place, repeat until K tokens (or no candidate is left).
TrainResult train(std::vector<Shard> shards, const TrainConfig& cfg);

// Same loop with the word-separated candidate restriction.
TrainResult train_word_separated(std::vector<Shard> shards, TrainConfig cfg);

// Restarts training from a checkpoint; continues to the same final
// vocabulary as an uninterrupted run with the same corpus and config.
TrainResult resume(const std::string& checkpoint_path, std::vector<Shard> shards,
                   const TrainConfig& cfg);

} // namespace lmtk
