#include "lmtk/partition.hpp"

#include <algorithm>

#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

namespace {

uint64_t lcp_codepoints(std::string_view a, std::string_view b) {
    uint64_t n = 0;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (utf8::decode_at(a, i) != utf8::decode_at(b, j)) break;
        ++n;
    }
    return n;
}

} // namespace

PrefixGraph build_graph(const std::vector<std::string>& sequences) {
    PrefixGraph g;
    g.sequences = sequences;
    size_t n = sequences.size();
    g.w.assign(n, std::vector<uint64_t>(n, 0));
    for (size_t i = 0; i < n; ++i) {
        g.w[i][i] = utf8::length(sequences[i]);
        for (size_t j = i + 1; j < n; ++j)
            g.w[i][j] = g.w[j][i] = lcp_codepoints(sequences[i], sequences[j]);
    }
    return g;
}

uint64_t block_min_weight(const std::vector<size_t>& block, const PrefixGraph& g) {
    if (block.size() == 1) return g.w[block[0]][block[0]];
    uint64_t m = UINT64_MAX;
    for (size_t i = 0; i < block.size(); ++i)
        for (size_t j = i + 1; j < block.size(); ++j)
            m = std::min(m, g.w[block[i]][block[j]]);
    return m;
}

uint64_t objective(const Partition& p, const PrefixGraph& g) {
    uint64_t total = 0;
    for (const auto& block : p.blocks)
        total += static_cast<uint64_t>(block.size()) * block_min_weight(block, g);
    return total;
}

namespace {

Partition from_assignment(const std::vector<size_t>& assign, size_t k) {
    Partition p;
    p.blocks.assign(k, {});
    for (size_t i = 0; i < assign.size(); ++i) p.blocks[assign[i]].push_back(i);
    return p;
}

// Enumerates restricted-growth strings in lexicographic order; the first
// maximizer encountered wins, which is the documented tie-break.
void enumerate(std::vector<size_t>& assign, size_t i, size_t used, size_t n, size_t k,
               const PrefixGraph& g, uint64_t& best_value, bool& found, Partition& best) {
    if (i == n) {
        if (used != k) return;
        Partition p = from_assignment(assign, k);
        uint64_t v = objective(p, g);
        if (!found || v > best_value) {
            found = true;
            best_value = v;
            best = std::move(p);
        }
        return;
    }
    size_t limit = std::min(used + 1, k);
    // Prune branches that cannot reach k blocks with the items left.
    for (size_t b = 0; b < limit; ++b) {
        size_t new_used = std::max(used, b + 1);
        if (new_used + (n - i - 1) < k) continue;
        assign[i] = b;
        enumerate(assign, i + 1, new_used, n, k, g, best_value, found, best);
    }
}

} // namespace

Partition brute_force_best(const PrefixGraph& g, size_t k) {
    size_t n = g.size();
    if (n == 0 || k == 0 || k > n)
        throw Error("invalid partition instance: n=" + std::to_string(n) +
                    " k=" + std::to_string(k));
    if (n > 12) throw Error("brute force limited to 12 sequences, got " + std::to_string(n));
    std::vector<size_t> assign(n, 0);
    Partition best;
    uint64_t best_value = 0;
    bool found = false;
    enumerate(assign, 0, 0, n, k, g, best_value, found, best);
    return best;
}

GreedyResult greedy_split(const PrefixGraph& g, size_t k) {
    size_t n = g.size();
    if (n == 0 || k == 0 || k > n)
        throw Error("invalid partition instance: n=" + std::to_string(n) +
                    " k=" + std::to_string(k));
    GreedyResult res;
    std::vector<size_t> all(n);
    for (size_t i = 0; i < n; ++i) all[i] = i;
    res.partition.blocks.push_back(all);
    uint64_t value = objective(res.partition, g);

    while (res.partition.blocks.size() < k) {
        int64_t best_delta = 0;
        size_t best_block = 0;
        uint64_t best_mask = 0;
        bool found = false;
        for (size_t bi = 0; bi < res.partition.blocks.size(); ++bi) {
            const auto& block = res.partition.blocks[bi];
            size_t m = block.size();
            if (m < 2) continue;
            if (m > 25) throw Error("greedy split block too large to enumerate");
            int64_t before = static_cast<int64_t>(m * block_min_weight(block, g));
            // Element 0 stays on the A side; the mask picks B from the rest.
            for (uint64_t mask = 1; mask < (1ull << (m - 1)); ++mask) {
                std::vector<size_t> a{block[0]}, b;
                for (size_t e = 1; e < m; ++e)
                    ((mask >> (e - 1)) & 1 ? b : a).push_back(block[e]);
                int64_t after = static_cast<int64_t>(a.size() * block_min_weight(a, g) +
                                                     b.size() * block_min_weight(b, g));
                int64_t delta = after - before;
                if (!found || delta > best_delta) {
                    found = true;
                    best_delta = delta;
                    best_block = bi;
                    best_mask = mask;
                }
            }
        }
        if (!found) break; // only singletons left; k > n is excluded above
        auto block = res.partition.blocks[best_block];
        std::vector<size_t> a{block[0]}, b;
        for (size_t e = 1; e < block.size(); ++e)
            ((best_mask >> (e - 1)) & 1 ? b : a).push_back(block[e]);
        res.partition.blocks[best_block] = std::move(a);
        res.partition.blocks.push_back(std::move(b));
        value = static_cast<uint64_t>(static_cast<int64_t>(value) + best_delta);
        res.steps.push_back({best_delta, value});
    }
    res.objective = value;
    return res;
}

} // namespace lmtk
