#include <doctest.h>

#include <fstream>
#include <random>

#include "lmtk/corpus.hpp"
#include "lmtk/unicode.hpp"
#include "support/textgen.hpp"

using namespace lmtk;

namespace {
const SentinelConfig kCfg{};
const std::string kSent = utf8::encode(kCfg.sentinel);
} // namespace

TEST_CASE("preprocess replaces spaces with the sentinel") {
    CHECK(preprocess("The cat sat", kCfg) == "The" + kSent + "cat" + kSent + "sat");
    CHECK(preprocess("", kCfg) == "");
    CHECK(preprocess("a  b", kCfg) == "a" + kSent + kSent + "b");
    // newlines and tabs stay untouched
    CHECK(preprocess("a\nb\tc", kCfg) == "a\nb\tc");
}

TEST_CASE("preprocess rejects sentinel collisions and bad UTF-8") {
    CHECK_THROWS_AS(preprocess("a" + kSent + "b", kCfg), SentinelCollision);
    CHECK_THROWS_AS(preprocess("\xff\xfe", kCfg), InvalidUtf8);
    CHECK_THROWS_AS(preprocess(std::string_view("\xc3", 1), kCfg), InvalidUtf8);
}

TEST_CASE("restore_spaces inverts preprocess") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 50; ++i) {
        std::string text = textgen::random_utf8(200, rng);
        CHECK(restore_spaces(preprocess(text, kCfg), kCfg) == text);
    }
}

TEST_CASE("shard packs whole documents greedily in order") {
    RawCorpus corpus;
    corpus.documents = {std::string(100, 'a'), std::string(100, 'b'), std::string(100, 'c')};
    auto shards = shard(corpus, 250, kCfg);
    REQUIRE(shards.size() == 2);
    CHECK(shards[0].text == std::string(100, 'a') + std::string(100, 'b'));
    CHECK(shards[0].doc_count() == 2);
    CHECK(shards[1].text == std::string(100, 'c'));
    CHECK(shards[0].id == 0);
    CHECK(shards[1].id == 1);

    auto one = shard(RawCorpus{{"hello world"}, "<eot>"}, 1 << 20, kCfg);
    REQUIRE(one.size() == 1);
    CHECK(one[0].text == preprocess("hello world", kCfg));

    RawCorpus big;
    big.documents = {std::string(300, 'x')};
    CHECK_THROWS_AS(shard(big, 250, kCfg), DocumentTooLarge);
}

TEST_CASE("shard sizes respect the cap and preserve document order") {
    RawCorpus corpus = textgen::corpus(50000, 3);
    auto shards = shard(corpus, 4096, kCfg);
    std::string rebuilt;
    for (const auto& s : shards) {
        CHECK(s.byte_len() <= 4096);
        for (size_t d = 0; d + 1 < s.doc_begin.size(); ++d) {
            if (!rebuilt.empty()) rebuilt += "<eot>";
            rebuilt.append(s.text, s.doc_begin[d], s.doc_begin[d + 1] - s.doc_begin[d]);
        }
    }
    std::string expected;
    for (const auto& d : corpus.documents) {
        if (!expected.empty()) expected += "<eot>";
        expected += preprocess(d, kCfg);
    }
    CHECK(rebuilt == expected);
    CHECK(reassemble(shards, "<eot>") == expected);
}

TEST_CASE("inject_noise is deterministic, length-preserving, sentinel-preserving") {
    std::string text = preprocess("hello world, the quick brown fox", kCfg);
    CHECK(inject_noise(text, 0.0, 42, kCfg) == text);

    std::string a = inject_noise(text, 0.3, 42, kCfg);
    std::string b = inject_noise(text, 0.3, 42, kCfg);
    CHECK(a == b);
    CHECK(inject_noise(text, 0.3, 43, kCfg) != a);
    CHECK(utf8::length(a) == utf8::length(text));

    std::string all = inject_noise(text, 1.0, 7, kCfg);
    size_t i = 0;
    size_t sentinels = 0;
    while (i < all.size()) {
        char32_t cp = utf8::decode_at(all, i);
        if (cp == kCfg.sentinel) {
            ++sentinels;
            continue;
        }
        bool ascii_letter = (cp >= 'a' && cp <= 'z') || (cp >= 'A' && cp <= 'Z');
        CHECK(ascii_letter);
    }
    CHECK(sentinels == 5); // the five spaces survive untouched
}

TEST_CASE("load_corpus splits by newline or eot marker") {
    std::string path = "load_corpus_test.tmp";
    {
        std::ofstream out(path, std::ios::binary);
        out << "doc one\ndoc two\ndoc three";
    }
    RawCorpus byline = load_corpus(path, true);
    REQUIRE(byline.documents.size() == 3);
    CHECK(byline.documents[1] == "doc two");
    {
        std::ofstream out(path, std::ios::binary);
        out << "doc one<eot>doc two<eot>doc three";
    }
    RawCorpus byeot = load_corpus(path, false);
    REQUIRE(byeot.documents.size() == 3);
    CHECK(byeot.documents[2] == "doc three");
    std::remove(path.c_str());
}

TEST_CASE("corpus_digest is stable and input-sensitive") {
    auto shards = shard(textgen::corpus(2000, 5), 1 << 20, kCfg);
    uint64_t d1 = corpus_digest(shards);
    CHECK(d1 == corpus_digest(shards));
    auto other = shard(textgen::corpus(2000, 6), 1 << 20, kCfg);
    CHECK(d1 != corpus_digest(other));
}
