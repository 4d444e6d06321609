#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lmtk {

// Fully connected prefix graph: w[i][j] is the longest-common-prefix length
// (in code points) between sequences i and j; w[i][i] = |i|.
struct PrefixGraph {
    std::vector<std::string> sequences;
    std::vector<std::vector<uint64_t>> w;
    size_t size() const { return sequences.size(); }
};

PrefixGraph build_graph(const std::vector<std::string>& sequences);

// Exact cover of the sequence indices by nonempty blocks.
struct Partition {
    std::vector<std::vector<size_t>> blocks;
};

// Min pairwise LCP inside a block; a singleton scores its own length.
uint64_t block_min_weight(const std::vector<size_t>& block, const PrefixGraph& g);

// Sum over blocks of |block| * min pairwise LCP. Maximized: bigger is a
// partition whose blocks share longer prefixes.
uint64_t objective(const Partition& p, const PrefixGraph& g);

// Exhaustive maximizer over all partitions into exactly K blocks, n <= 12.
// Ties break toward the lexicographically smallest block encoding.
Partition brute_force_best(const PrefixGraph& g, size_t k);

struct GreedyStep {
    int64_t delta = 0;         // objective change of this split
    uint64_t objective_after = 0;
};

struct GreedyResult {
    Partition partition;
    std::vector<GreedyStep> steps; // K-1 entries
    uint64_t objective = 0;
};

// Starts from one block and performs K-1 splits, each the one with the
// greatest objective gain (blocks of <= ~20 elements enumerable).
GreedyResult greedy_split(const PrefixGraph& g, size_t k);

} // namespace lmtk
