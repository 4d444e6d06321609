#include <doctest.h>

#include <cstdio>
#include <random>

#include "lmtk/bpe.hpp"
#include "lmtk/encoder.hpp"
#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"
#include "support/textgen.hpp"

using namespace lmtk;

namespace {

const std::string kSent = utf8::encode(SentinelConfig{}.sentinel);

std::vector<Shard> shards_for(const RawCorpus& corpus, const SentinelConfig& cfg = {}) {
    return shard(corpus, 1 << 20, cfg);
}

// Reference application: one pass per merge, in table order, leftmost
// first, over an explicit token vector.
std::vector<std::string> naive_apply(std::string_view text, const MergeTable& table) {
    std::vector<std::string> toks;
    size_t i = 0;
    while (i < text.size()) {
        size_t j = i;
        utf8::decode_at(text, j);
        toks.emplace_back(text.substr(i, j - i));
        i = j;
    }
    for (const auto& [l, r] : table.merges) {
        std::vector<std::string> out;
        size_t k = 0;
        while (k < toks.size()) {
            if (k + 1 < toks.size() && toks[k] == l && toks[k + 1] == r) {
                out.push_back(l + r);
                k += 2;
            } else {
                out.push_back(toks[k]);
                k += 1;
            }
        }
        toks = std::move(out);
    }
    return toks;
}

std::vector<std::string> encoded_surfaces(const BpeEncoder& enc,
                                          const std::vector<uint32_t>& ids) {
    std::vector<std::string> out;
    const Vocabulary& v = enc.vocab();
    for (size_t i = 0; i < ids.size();) {
        if (ids[i] < v.size()) {
            out.push_back(v.tokens[ids[i]]);
            ++i;
        } else {
            std::string bytes;
            while (i < ids.size() && ids[i] >= v.size())
                bytes.push_back(static_cast<char>(ids[i++] - v.size()));
            size_t p = 0;
            while (p < bytes.size()) {
                size_t q = p;
                utf8::decode_at(bytes, q);
                out.push_back(bytes.substr(p, q - p));
                p = q;
            }
        }
    }
    return out;
}

} // namespace

TEST_CASE("first merges on the tiny spec corpora") {
    BpeConfig cfg;
    RawCorpus aaab{{"aaab"}, "<eot>"};
    BpeResult r1 = train_bpe(shards_for(aaab), 6, cfg); // base 2+3=5, one merge
    REQUIRE(r1.table.merges.size() == 1);
    CHECK(r1.table.merges[0] == std::pair<std::string, std::string>{"a", "a"});
    CHECK(r1.merge_counts[0] == 2);

    RawCorpus abab{{"abababab"}, "<eot>"};
    BpeResult r2 = train_bpe(shards_for(abab), 5, cfg);
    REQUIRE(r2.table.merges.size() == 1);
    CHECK(r2.table.merges[0] == std::pair<std::string, std::string>{"a", "b"});

    // K equal to the base vocabulary: empty table
    BpeResult r3 = train_bpe(shards_for(aaab), 4, cfg);
    CHECK(r3.table.merges.empty());
    CHECK_THROWS_AS(train_bpe(shards_for(aaab), 2, cfg), InvalidK);
}

TEST_CASE("encode_bpe applies merges in table order") {
    BpeConfig cfg;
    BpeResult r = train_bpe(shards_for(RawCorpus{{"aaab"}, "<eot>"}), 6, cfg);
    BpeEncoder enc(r.table);
    auto surfaces = encoded_surfaces(enc, enc.encode("aaab"));
    CHECK(surfaces == std::vector<std::string>{"aa", "a", "b"});
    CHECK(enc.encode("").empty());
    auto plain = encoded_surfaces(enc, enc.encode("xyz"));
    CHECK(plain == std::vector<std::string>{"x", "y", "z"});
}

TEST_CASE("encoder equals naive sequential merge application") {
    SentinelConfig scfg;
    for (int round = 0; round < 25; ++round) {
        RawCorpus corpus = textgen::corpus(2500, 500 + round, 40);
        auto shards = shards_for(corpus, scfg);
        Vocabulary bv = base_vocabulary(shards, scfg, 0);
        BpeConfig cfg;
        BpeResult r = train_bpe(shards, bv.size() + 40, cfg);
        BpeEncoder enc(r.table);
        for (int i = 0; i < 10; ++i) {
            std::string text = preprocess(corpus.documents[i % corpus.documents.size()], scfg);
            CHECK(encoded_surfaces(enc, enc.encode(text)) == naive_apply(text, r.table));
        }
    }
}

TEST_CASE("bpe round-trips through the shared decoder") {
    SentinelConfig scfg;
    RawCorpus corpus = textgen::corpus(3000, 12, 50);
    auto shards = shards_for(corpus, scfg);
    Vocabulary bv = base_vocabulary(shards, scfg, 0);
    BpeResult r = train_bpe(shards, bv.size() + 60, BpeConfig{});
    BpeEncoder enc(r.table);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 100; ++i) {
        std::string pre = preprocess(textgen::random_utf8(150, rng), scfg);
        CHECK(decode_preprocessed(enc.encode(pre), enc.vocab()) == pre);
    }
    std::string raw = corpus.documents[0];
    CHECK(decode(enc.encode(preprocess(raw, scfg)), enc.vocab(), scfg) == raw);
}

TEST_CASE("training is deterministic") {
    SentinelConfig scfg;
    RawCorpus corpus = textgen::corpus(4000, 31, 60);
    Vocabulary bv = base_vocabulary(shards_for(corpus, scfg), scfg, 0);
    BpeResult a = train_bpe(shards_for(corpus, scfg), bv.size() + 50, BpeConfig{});
    BpeResult b = train_bpe(shards_for(corpus, scfg), bv.size() + 50, BpeConfig{});
    CHECK(a.table.merges == b.table.merges);
    BpeConfig two;
    two.workers = 2;
    BpeResult c = train_bpe(shards_for(corpus, scfg), bv.size() + 50, two);
    CHECK(a.table.merges == c.table.merges);
}

TEST_CASE("word-separated merges keep the sentinel terminal") {
    SentinelConfig ws{U'␣', true};
    RawCorpus corpus = textgen::corpus(5000, 71, 60);
    auto shards = shards_for(corpus, ws);
    Vocabulary bv = base_vocabulary(shards, ws, 0);
    BpeConfig cfg;
    cfg.sentinel = ws;
    BpeResult r = train_bpe(shards, bv.size() + 80, cfg);
    CHECK(r.table.word_separated);
    for (const auto& [l, m] : r.table.merges) {
        std::string surface = l + m;
        size_t pos = surface.find(kSent);
        if (pos != std::string::npos) CHECK(pos + kSent.size() == surface.size());
    }
}

TEST_CASE("utilization counts emitted surfaces only") {
    SentinelConfig scfg;
    RawCorpus corpus = textgen::corpus(4000, 91, 50);
    auto shards = shards_for(corpus, scfg);
    Vocabulary bv = base_vocabulary(shards, scfg, 0);

    // alphabet-only table: everything in the alphabet is emitted
    BpeResult empty = train_bpe(shards, bv.size(), BpeConfig{});
    CHECK(bpe_utilization(empty.table, shards) == doctest::Approx(1.0));

    BpeResult r = train_bpe(shards, bv.size() + 80, BpeConfig{});
    double u = bpe_utilization(r.table, shards);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
}

TEST_CASE("merge table JSON round-trips") {
    SentinelConfig scfg;
    RawCorpus corpus = textgen::corpus(1500, 101, 30);
    auto shards = shards_for(corpus, scfg);
    Vocabulary bv = base_vocabulary(shards, scfg, 0);
    BpeResult r = train_bpe(shards, bv.size() + 20, BpeConfig{});
    std::string path = "merge_table_test.tmp";
    save_merge_table(r.table, path);
    MergeTable t = load_merge_table(path);
    CHECK(t.merges == r.table.merges);
    CHECK(t.alphabet == r.table.alphabet);
    CHECK(t.sentinel == r.table.sentinel);
    CHECK(t.word_separated == r.table.word_separated);
    std::remove(path.c_str());
}
