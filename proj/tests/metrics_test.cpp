#include <doctest.h>

#include <cmath>
#include <random>

#include "lmtk/errors.hpp"
#include "lmtk/metrics.hpp"
#include "lmtk/trainer.hpp"
#include "lmtk/unicode.hpp"
#include "support/textgen.hpp"

using namespace lmtk;

namespace {

// Planted power law f_r = round(C * r^-alpha).
std::vector<uint64_t> planted_zipf(double alpha, size_t n, double c = 1e9) {
    std::vector<uint64_t> f(n);
    for (size_t r = 0; r < n; ++r)
        f[r] = static_cast<uint64_t>(
            std::llround(c * std::pow(static_cast<double>(r + 1), -alpha)));
    return f;
}

Vocabulary trained_vocab(const std::vector<Shard>& shards, size_t extra) {
    Vocabulary base = base_vocabulary(shards, {}, 16);
    TrainConfig cfg;
    cfg.target_size = base.size() + extra;
    cfg.checkpoint_interval = 0;
    return train(shards, cfg).vocab;
}

} // namespace

TEST_CASE("tpc uses raw code points as denominator") {
    CHECK(tpc(214, std::string(951, 'x')) == doctest::Approx(0.2250).epsilon(1e-3));
    CHECK(tpc(193, std::string(1038, 'x')) == doctest::Approx(0.1859).epsilon(1e-3));
    CHECK(tpc(5, "he llo") == doctest::Approx(5.0 / 6.0)); // spaces count
    // multibyte text: code points, not bytes
    CHECK(tpc(4, "\xc3\xa9\xc3\xa9\xc3\xa9\xc3\xa9") == doctest::Approx(1.0));
}

TEST_CASE("character-level encoding has tpc exactly 1") {
    SentinelConfig cfg;
    auto shards = shard(textgen::corpus(1000, 2, 30), 1 << 20, cfg);
    Vocabulary v = base_vocabulary(shards, cfg, 16); // no multi-char tokens
    std::string raw = "the quick brown fox";
    MetricsReport r = evaluate(raw, cfg, v);
    CHECK(r.tpc == doctest::Approx(1.0));
    CHECK(r.token_count == r.char_count);
}

TEST_CASE("coverage and oov definitions") {
    SentinelConfig cfg;
    auto shards = shard(textgen::corpus(2000, 3, 40), 1 << 20, cfg);
    Vocabulary v = trained_vocab(shards, 30);
    MatchAutomaton a = MatchAutomaton::compile(v);

    // training corpus: alphabet complete, no escapes
    CoverageResult clean = coverage_and_oov(a, shards[0].text);
    CHECK(clean.oov_rate == 0.0);
    CHECK(clean.coverage == 1.0);

    // one unknown 4-byte code point among 9 known ones
    std::string held = preprocess("aaaa bbbb", cfg) + "\xf0\x9f\x90\x88";
    CoverageResult dirty = coverage_and_oov(a, held);
    CHECK(dirty.escape_tokens == 4);
    CHECK(dirty.coverage == doctest::Approx(9.0 / 10.0));
    CHECK(dirty.oov_rate ==
          doctest::Approx(4.0 / static_cast<double>(dirty.tokens)));
}

TEST_CASE("zipf fit recovers planted exponents") {
    for (double alpha : {0.8, 0.95, 1.0, 1.2}) {
        ZipfFit fit = zipf_fit(planted_zipf(alpha, 10000));
        CHECK(fit.alpha == doctest::Approx(alpha).epsilon(0.01));
        CHECK(fit.r2 >= 0.999);
        CHECK_FALSE(fit.degenerate);
    }
}

TEST_CASE("zipf fit degenerate and precondition cases") {
    std::vector<uint64_t> uniform(100, 7);
    ZipfFit fit = zipf_fit(uniform);
    CHECK(fit.degenerate);
    CHECK(fit.alpha == 0.0);
    CHECK(fit.r2 == 0.0);
    CHECK_THROWS_AS(zipf_fit(std::vector<uint64_t>(9, 3)), DegenerateDistribution);
}

TEST_CASE("head variance arithmetic") {
    CHECK(head_variance({10, 10, 10, 10}, 4) == doctest::Approx(0.0));
    // relative frequencies 0.5, 0.25, 0.25
    CHECK(head_variance({20, 10, 10}, 3) == doctest::Approx(0.0138888).epsilon(1e-4));
    CHECK(head_variance({}, 50) == 0.0);
}

TEST_CASE("js divergence bounds and symmetry") {
    std::vector<double> p{0.5, 0.5, 0.0};
    std::vector<double> q{0.0, 0.0, 1.0};
    CHECK(js_divergence(p, q) == doctest::Approx(1.0)); // disjoint support
    CHECK(js_divergence(p, p) == doctest::Approx(0.0));
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 30; ++i) {
        std::vector<double> a(20), b(20);
        for (auto& v : a) v = u(rng);
        for (auto& v : b) v = u(rng);
        double ab = js_divergence(a, b);
        CHECK(ab == doctest::Approx(js_divergence(b, a)));
        CHECK(ab >= 0.0);
        CHECK(ab <= 1.0);
    }
}

TEST_CASE("tail divergence to an ideal zipf") {
    // empirical tail exactly Zipf(1.0)
    CHECK(js_to_zipf(planted_zipf(1.0, 2000), 1.0) == doctest::Approx(0.0).epsilon(1e-3));
    // short tables have no tail
    CHECK(js_to_zipf(std::vector<uint64_t>(40, 5)) == 0.0);
}

TEST_CASE("noise delta at rate zero is the clean measurement") {
    SentinelConfig cfg;
    auto shards = shard(textgen::corpus(2000, 5, 40), 1 << 20, cfg);
    Vocabulary v = trained_vocab(shards, 20);
    MatchAutomaton a = MatchAutomaton::compile(v);
    std::string_view text = shards[0].text;
    NoiseDelta d0 = noise_delta(a, text, 0.0, 42, cfg);
    CHECK(d0.oov_noisy == d0.oov_clean);
    CHECK(d0.coverage_noisy == d0.coverage_clean);
    NoiseDelta d3 = noise_delta(a, text, 0.03, 42, cfg);
    CHECK(d3.oov_clean == d0.oov_clean);
}

TEST_CASE("evaluate ties everything together consistently") {
    SentinelConfig cfg;
    auto raw_corpus = textgen::corpus(5000, 6, 50);
    auto shards = shard(raw_corpus, 1 << 20, cfg);
    Vocabulary v = trained_vocab(shards, 60);
    std::string raw;
    size_t docs = std::min<size_t>(10, raw_corpus.documents.size());
    for (size_t i = 0; i < docs; ++i) {
        if (i) raw += "\n";
        raw += raw_corpus.documents[i];
    }
    MetricsReport r = evaluate(raw, cfg, v);
    CHECK(r.char_count == utf8::length(raw));
    CHECK(r.tpc == doctest::Approx(static_cast<double>(r.token_count) / r.char_count));
    CHECK(r.tpc <= 1.0);
    CHECK(r.coverage >= 0.0);
    CHECK(r.coverage <= 1.0);
    CHECK(r.oov_rate >= 0.0);
    CHECK(r.oov_rate <= 1.0);
}

TEST_CASE("trained vocabulary utilization is near total") {
    SentinelConfig cfg;
    auto shards = shard(textgen::corpus(6000, 7, 50), 1 << 20, cfg);
    Vocabulary v = trained_vocab(shards, 60);
    double u = utilization(v, shards);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
    // base-only vocabulary uses every alphabet character
    Vocabulary base = base_vocabulary(shards, cfg, 16);
    CHECK(utilization(base, shards) == doctest::Approx(1.0));
}

TEST_CASE("compare emits one identical cell per tokenizer and corpus") {
    SentinelConfig cfg;
    auto shards = shard(textgen::corpus(3000, 8, 40), 1 << 20, cfg);
    Vocabulary v = trained_vocab(shards, 30);
    MatchAutomaton a = MatchAutomaton::compile(v);
    TokenizerHandle h1{"first", v.size(), v.size(),
                       [&](std::string_view t) { return encode(t, a); }};
    TokenizerHandle h2 = h1;
    h2.name = "second";
    std::vector<NamedCorpus> corpora{{"c1", "the quick brown fox jumped"},
                                     {"c2", "pack my box with five dozen jugs"}};
    auto cells = compare({h1, h2}, corpora, cfg);
    REQUIRE(cells.size() == 4);
    CHECK(cells[0].report.tpc == cells[1].report.tpc); // same vocab twice
    CHECK(cells[0].corpus == "c1");
    CHECK(cells[3].corpus == "c2");
    std::string csv = compare_to_csv(cells);
    CHECK(csv.find("corpus,") == 0);
    CHECK(csv.find("c2") != std::string::npos);
    CHECK(compare_to_json(cells).find("\"tokenizer\"") != std::string::npos);

    CHECK_THROWS_AS(compare({h1}, {{"empty", ""}}, cfg), EmptyCorpus);
}
