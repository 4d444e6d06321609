#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "lmtk/corpus.hpp"
#include "lmtk/encoder.hpp"
#include "lmtk/vocab.hpp"

namespace lmtk {

struct MetricsReport {
    double tpc = 0;           // tokens per raw (pre-sentinel) code point
    double coverage = 0;      // code points consumed by non-escape tokens
    double oov_rate = 0;      // escape-token fraction of the output
    double zipf_alpha = 0;    // negated slope of the log-log rank fit
    double zipf_r2 = 0;
    bool zipf_degenerate = false;
    double head_variance = 0; // population variance of top-n relative freqs
    double js_divergence = 0; // tail divergence to an ideal Zipf
    uint64_t token_count = 0;
    uint64_t char_count = 0;  // raw code points
};

// token count / code-point count of the raw (pre-sentinel) text.
double tpc(size_t token_count, std::string_view raw_text);

struct CoverageResult {
    double coverage = 0;
    double oov_rate = 0;
    uint64_t tokens = 0;
    uint64_t escape_tokens = 0;
};

// Encodes preprocessed text and reports the escape-token fraction (oov) and
// the fraction of code points consumed by real vocabulary tokens (coverage).
CoverageResult coverage_and_oov(const MatchAutomaton& a, std::string_view preprocessed);

// Per-id occurrence counts (length = max id + 1).
std::vector<uint64_t> id_frequencies(const std::vector<uint32_t>& ids);

struct ZipfFit {
    double alpha = 0;
    double r2 = 0;
    bool degenerate = false; // all counts equal: slope 0, r2 defined as 0
};

// OLS of log(freq) on log(rank) over all nonzero counts, best rank first.
// Throws DegenerateDistribution when fewer than 10 distinct tokens have
// nonzero counts.
ZipfFit zipf_fit(const std::vector<uint64_t>& counts);

// Population variance of the top-n relative frequencies (counts / total).
double head_variance(const std::vector<uint64_t>& counts, size_t n = 50);

// Base-2 Jensen-Shannon divergence between two distributions on the same
// support; inputs are renormalized. Value in [0, 1].
double js_divergence(const std::vector<double>& p, const std::vector<double>& q);

// JS divergence between the empirical tail (ranks > head_skip, renormalized)
// and an ideal Zipf(alpha) tail over the same rank support.
double js_to_zipf(const std::vector<uint64_t>& counts, double alpha = 1.0,
                  size_t head_skip = 50);

struct NoiseDelta {
    double oov_clean = 0;
    double oov_noisy = 0;
    double coverage_clean = 0;
    double coverage_noisy = 0;
};

// coverage_and_oov on the text and on a noise-injected copy of it.
NoiseDelta noise_delta(const MatchAutomaton& a, std::string_view preprocessed, double rate,
                       uint64_t seed, const SentinelConfig& cfg);

// Full report for one tokenizer over one raw text. `encode_fn` maps the
// preprocessed text to ids; `escape_base` is the first escape id.
MetricsReport evaluate(std::string_view raw_text, const SentinelConfig& cfg,
                       const std::function<std::vector<uint32_t>(std::string_view)>& encode_fn,
                       size_t escape_base);

// Convenience: longest-match tokenizer built from `vocab`.
MetricsReport evaluate(std::string_view raw_text, const SentinelConfig& cfg,
                       const Vocabulary& vocab);

// Fraction of non-special vocabulary surfaces emitted when encoding the
// training shards with longest match.
double utilization(const Vocabulary& vocab, const std::vector<Shard>& shards);

// ---- side-by-side comparison ------------------------------------------

struct TokenizerHandle {
    std::string name;
    size_t vocab_size = 0;
    size_t escape_base = 0; // first escape id
    std::function<std::vector<uint32_t>(std::string_view)> encode;
};

struct NamedCorpus {
    std::string name;
    std::string raw_text;
};

struct CompareCell {
    std::string corpus;
    std::string tokenizer;
    size_t vocab_size = 0;
    MetricsReport report;
};

// One cell per (corpus, tokenizer). Throws EmptyCorpus.
std::vector<CompareCell> compare(const std::vector<TokenizerHandle>& tokenizers,
                                 const std::vector<NamedCorpus>& corpora,
                                 const SentinelConfig& cfg);

// TPC grid: rows = corpus, columns = tokenizer.
std::string compare_to_csv(const std::vector<CompareCell>& cells);
std::string compare_to_json(const std::vector<CompareCell>& cells);
std::string report_to_json(const MetricsReport& r);

} // namespace lmtk
