#include <doctest.h>

#include <random>

#include "lmtk/errors.hpp"
#include "lmtk/partition.hpp"
#include "lmtk/unicode.hpp"

using namespace lmtk;

namespace {

// the worked five-sequence example: two prefix families
const std::vector<std::string> kToy = {
    "the quick brown fox", "the quick brown dog", "the quick red car",
    "she sells sea shells", "she sells sea weeds"};

size_t naive_lcp(const std::string& a, const std::string& b) {
    auto ca = utf8::decode(a), cb = utf8::decode(b);
    size_t n = 0;
    while (n < ca.size() && n < cb.size() && ca[n] == cb[n]) ++n;
    return n;
}

std::vector<std::vector<size_t>> sorted_blocks(Partition p) {
    for (auto& b : p.blocks) std::sort(b.begin(), b.end());
    std::sort(p.blocks.begin(), p.blocks.end());
    return p.blocks;
}

std::vector<std::string> random_sequences(std::mt19937_64& rng, size_t n) {
    std::uniform_int_distribution<int> len(1, 12), ch(0, 2);
    std::vector<std::string> out;
    for (size_t i = 0; i < n; ++i) {
        std::string s(static_cast<size_t>(len(rng)), ' ');
        for (char& c : s) c = static_cast<char>('a' + ch(rng));
        out.push_back(std::move(s));
    }
    return out;
}

} // namespace

TEST_CASE("edge weights are pairwise prefix lengths") {
    PrefixGraph g = build_graph(kToy);
    REQUIRE(g.size() == 5);
    CHECK(g.w[0][1] == 16); // "the quick brown " shared
    CHECK(g.w[0][2] == 10); // "the quick "
    CHECK(g.w[1][2] == 10);
    CHECK(g.w[3][4] == 14); // "she sells sea "
    CHECK(g.w[0][3] == 0);  // families share nothing
    CHECK(g.w[0][0] == utf8::length(kToy[0]));
    for (size_t i = 0; i < g.size(); ++i)
        for (size_t j = 0; j < g.size(); ++j) CHECK(g.w[i][j] == g.w[j][i]);
}

TEST_CASE("graph weights match a naive code-point scan") {
    std::mt19937_64 rng(81);
    for (int round = 0; round < 50; ++round) {
        auto seqs = random_sequences(rng, 6);
        seqs.push_back("caf\xc3\xa9 au lait"); // multibyte prefix member
        seqs.push_back("caf\xc3\xa9tiere");
        PrefixGraph g = build_graph(seqs);
        for (size_t i = 0; i < seqs.size(); ++i)
            for (size_t j = i + 1; j < seqs.size(); ++j)
                CHECK(g.w[i][j] == naive_lcp(seqs[i], seqs[j]));
    }
}

TEST_CASE("block weight and objective arithmetic") {
    PrefixGraph g = build_graph(kToy);
    CHECK(block_min_weight({0, 1}, g) == 16);
    CHECK(block_min_weight({0, 1, 2}, g) == 10);
    CHECK(block_min_weight({3, 4}, g) == 14);
    CHECK(block_min_weight({0, 3}, g) == 0);
    CHECK(block_min_weight({2}, g) == utf8::length(kToy[2])); // singleton

    Partition best{{{0, 1, 2}, {3, 4}}};
    CHECK(objective(best, g) == 3 * 10 + 2 * 14); // 58

    // all singletons score the total sequence length
    Partition singles{{{0}, {1}, {2}, {3}, {4}}};
    uint64_t total = 0;
    for (const auto& s : kToy) total += utf8::length(s);
    CHECK(objective(singles, g) == total);

    // a block straddling the families contributes nothing
    Partition bad{{{0, 1, 2, 3, 4}}};
    CHECK(objective(bad, g) == 0);
}

TEST_CASE("brute force finds the documented optimum on the toy graph") {
    PrefixGraph g = build_graph(kToy);
    Partition p = brute_force_best(g, 2);
    CHECK(objective(p, g) == 58);
    CHECK(sorted_blocks(p) ==
          std::vector<std::vector<size_t>>{{0, 1, 2}, {3, 4}});

    // K = N forces singletons; K = 1 forces the straddling block
    Partition all = brute_force_best(g, 5);
    CHECK(all.blocks.size() == 5);
    for (const auto& b : all.blocks) CHECK(b.size() == 1);
    Partition one = brute_force_best(g, 1);
    CHECK(one.blocks.size() == 1);
    CHECK(objective(one, g) == 0);
}

TEST_CASE("greedy splitting matches the exhaustive answer on the toy graph") {
    PrefixGraph g = build_graph(kToy);
    GreedyResult r = greedy_split(g, 2);
    CHECK(r.objective == 58);
    CHECK(sorted_blocks(r.partition) ==
          std::vector<std::vector<size_t>>{{0, 1, 2}, {3, 4}});
    REQUIRE(r.steps.size() == 1);
    CHECK(r.steps[0].objective_after == 58);
    CHECK(r.steps[0].delta == 58); // from the zero-valued single block

    GreedyResult trivial = greedy_split(g, 1);
    CHECK(trivial.steps.empty());
    CHECK(trivial.objective == 0);
}

TEST_CASE("greedy never beats brute force and both respect K") {
    std::mt19937_64 rng(4242);
    std::uniform_int_distribution<size_t> nn(2, 8);
    for (int round = 0; round < 100; ++round) {
        auto seqs = random_sequences(rng, nn(rng));
        PrefixGraph g = build_graph(seqs);
        std::uniform_int_distribution<size_t> kk(1, seqs.size());
        size_t k = kk(rng);
        Partition exact = brute_force_best(g, k);
        GreedyResult approx = greedy_split(g, k);
        CHECK(exact.blocks.size() == k);
        CHECK(approx.partition.blocks.size() == k);
        CHECK(approx.objective == objective(approx.partition, g));
        CHECK(approx.objective <= objective(exact, g));
        // every index appears exactly once
        std::vector<int> seen(seqs.size(), 0);
        for (const auto& b : exact.blocks)
            for (size_t i : b) seen[i]++;
        for (int s : seen) CHECK(s == 1);
    }
}

TEST_CASE("the exact optimum is non-decreasing in the block budget") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 20; ++round) {
        auto seqs = random_sequences(rng, 7);
        PrefixGraph g = build_graph(seqs);
        uint64_t prev = 0;
        for (size_t k = 1; k <= seqs.size(); ++k) {
            uint64_t v = objective(brute_force_best(g, k), g);
            CHECK(v >= prev);
            prev = v;
        }
    }
}

TEST_CASE("invalid block counts are rejected") {
    PrefixGraph g = build_graph(kToy);
    CHECK_THROWS_AS(brute_force_best(g, 0), Error);
    CHECK_THROWS_AS(brute_force_best(g, 6), Error);
    CHECK_THROWS_AS(greedy_split(g, 0), Error);
    CHECK_THROWS_AS(greedy_split(g, 9), Error);
}
