#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "lmtk/corpus.hpp"
#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"
#include "lmtk/vocab.hpp"

using namespace lmtk;

namespace {

std::vector<Shard> tiny_shards() {
    RawCorpus corpus{{"cab", "b\xc3\xa9z"}, "<eot>"};
    return shard(corpus, 1 << 20, SentinelConfig{});
}

} // namespace

TEST_CASE("base vocabulary is specials plus sorted distinct code points") {
    Vocabulary v = base_vocabulary(tiny_shards(), SentinelConfig{}, 16);
    REQUIRE(v.base_size == 7); // <eot> <pad> a b c z e-acute
    CHECK(v.tokens[0] == kEotToken);
    CHECK(v.tokens[1] == kPadToken);
    CHECK(v.tokens[2] == "a");
    CHECK(v.tokens[3] == "b");
    CHECK(v.tokens[4] == "c");
    CHECK(v.tokens[5] == "z");
    CHECK(v.tokens[6] == "\xc3\xa9"); // U+00E9 sorts after ASCII
    CHECK(v.corpus_digest != 0);
}

TEST_CASE("append assigns stable ids and rejects duplicates") {
    Vocabulary v = base_vocabulary(tiny_shards(), SentinelConfig{}, 16);
    uint32_t id = v.append("ab");
    CHECK(id == 7);
    CHECK(v.id_of("ab") == 7);
    CHECK(v.id_of("missing") == Vocabulary::kNoId);
    CHECK_THROWS_AS(v.append("ab"), DuplicateSurface);
    CHECK_THROWS_AS(v.append("a"), DuplicateSurface);
    CHECK(v.append("abc") == 8); // failure did not disturb numbering
}

TEST_CASE("vocabulary JSON round-trips byte-exactly") {
    Vocabulary v = base_vocabulary(tiny_shards(), SentinelConfig{}, 16);
    v.append("ab\xe2\x90\xa3");
    v.append(std::string("\xf0\x9f\x90\x88")); // cat emoji
    v.target_size = 100;
    v.iterations = 2;
    std::string path = "vocab_roundtrip.tmp";
    save_vocabulary(v, path);
    Vocabulary w = load_vocabulary(path);
    CHECK(w.tokens == v.tokens);
    CHECK(w.base_size == v.base_size);
    CHECK(w.sentinel == v.sentinel);
    CHECK(w.l_max == v.l_max);
    CHECK(w.word_separated == v.word_separated);
    CHECK(w.corpus_digest == v.corpus_digest);
    CHECK(w.target_size == 100);
    CHECK(w.iterations == 2);
    CHECK(w.id_of("ab\xe2\x90\xa3") == v.id_of("ab\xe2\x90\xa3"));
    std::remove(path.c_str());
}

TEST_CASE("checkpoints carry a checksum and detect corruption") {
    Vocabulary v = base_vocabulary(tiny_shards(), SentinelConfig{}, 16);
    v.append("ab");
    std::string path = "checkpoint_test.tmp";
    save_checkpoint({v, 1}, path);
    Checkpoint c = load_checkpoint(path);
    CHECK(c.iteration == 1);
    CHECK(c.vocab.tokens == v.tokens);
    CHECK(c.vocab.corpus_digest == v.corpus_digest);

    // flip the stored iteration without fixing the checksum
    std::ifstream in(path);
    std::string body((std::istreambuf_iterator<char>(in)), {});
    in.close();
    auto pos = body.find("\"iteration\": 1");
    REQUIRE(pos != std::string::npos);
    body[pos + 13] = '2';
    std::ofstream(path) << body;
    CHECK_THROWS_AS(load_checkpoint(path), CorruptCheckpoint);

    std::ofstream(path) << "{not json";
    CHECK_THROWS_AS(load_checkpoint(path), CorruptCheckpoint);

    std::remove(path.c_str());
    CHECK_THROWS_AS(load_checkpoint(path), Error);
}
