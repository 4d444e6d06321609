#include "lmtk/scoreboard.hpp"

#include <algorithm>
#include <unordered_map>

#include "lmtk/errors.hpp"

namespace lmtk {

bool outranks(const Candidate& a, const Candidate& b) {
    if (a.score() != b.score()) return a.score() > b.score();
    if (a.count != b.count) return a.count > b.count;
    if (a.char_len != b.char_len) return a.char_len > b.char_len;
    return a.surface < b.surface;
}

namespace {
// Min-heap comparator: the worst-ranked candidate sits at the heap top.
bool heap_cmp(const Candidate& a, const Candidate& b) { return outranks(a, b); }
} // namespace

void Scoreboard::offer(Candidate c) {
    if (capacity_ == 0) return;
    if (entries_.size() < capacity_) {
        entries_.push_back(std::move(c));
        std::push_heap(entries_.begin(), entries_.end(), heap_cmp);
        return;
    }
    if (outranks(c, entries_.front())) {
        std::pop_heap(entries_.begin(), entries_.end(), heap_cmp);
        entries_.back() = std::move(c);
        std::push_heap(entries_.begin(), entries_.end(), heap_cmp);
    }
}

std::vector<Candidate> Scoreboard::ranked() const {
    std::vector<Candidate> out = entries_;
    std::sort(out.begin(), out.end(), outranks);
    return out;
}

Scoreboard Scoreboard::from_table(const CandidateTable& table, size_t capacity,
                                  uint32_t min_freq) {
    Scoreboard board(capacity);
    for (const auto& e : table.entries()) {
        if (e.count < min_freq) continue;
        board.offer(Candidate{std::string(table.surface(e)), e.count, e.char_len});
    }
    return board;
}

MergeResult merge_global(const std::vector<Scoreboard>& boards) {
    std::unordered_map<std::string, Candidate> by_surface;
    size_t capacity = 0;
    for (const auto& b : boards) {
        capacity = std::max(capacity, b.capacity());
        for (const auto& c : b.entries()) {
            auto [it, inserted] = by_surface.try_emplace(c.surface, c);
            if (!inserted) it->second.count += c.count;
        }
    }
    if (by_surface.empty()) throw EmptyBoards("no candidate survived filtering");

    MergeResult result{Candidate{}, Scoreboard(capacity)};
    bool have_best = false;
    for (auto& [surface, cand] : by_surface) {
        if (!have_best || outranks(cand, result.best)) {
            result.best = cand;
            have_best = true;
        }
        result.merged.offer(std::move(cand));
    }
    return result;
}

} // namespace lmtk
