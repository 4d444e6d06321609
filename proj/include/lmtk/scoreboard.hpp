#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lmtk/counting.hpp"

namespace lmtk {

struct Candidate {
    std::string surface;
    uint64_t count = 0;
    uint32_t char_len = 0;
    uint64_t score() const { return count * char_len; }
};

// Total order used everywhere a "best" candidate is chosen: higher score,
// then higher count, then longer surface, then lexicographically smaller
// surface. Returns true when a ranks strictly ahead of b.
bool outranks(const Candidate& a, const Candidate& b);

// Bounded best-M collection under the total order above.
class Scoreboard {
public:
    explicit Scoreboard(size_t capacity) : capacity_(capacity) {}

    void offer(Candidate c);

    size_t capacity() const { return capacity_; }
    size_t size() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }

    // Entries in rank order, best first.
    std::vector<Candidate> ranked() const;
    const std::vector<Candidate>& entries() const { return entries_; }

    // Builds a board from a candidate table, dropping counts below min_freq.
    static Scoreboard from_table(const CandidateTable& table, size_t capacity,
                                 uint32_t min_freq);

private:
    size_t capacity_;
    std::vector<Candidate> entries_; // min-heap, worst entry at front
};

struct MergeResult {
    Candidate best;
    Scoreboard merged;
};

// Sums counts per surface across boards, then ranks. Deterministic for any
// board order; throws EmptyBoards when nothing survives.
MergeResult merge_global(const std::vector<Scoreboard>& boards);

} // namespace lmtk
