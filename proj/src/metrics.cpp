#include "lmtk/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <json.hpp>

#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

using nlohmann::json;

double tpc(size_t token_count, std::string_view raw_text) {
    size_t chars = utf8::length(raw_text);
    return chars == 0 ? 0.0 : static_cast<double>(token_count) / static_cast<double>(chars);
}

namespace {

// Escape ids carry one byte each; an unknown code point of k bytes costs k
// escape tokens but only one code point of coverage.
CoverageResult coverage_from_ids(const std::vector<uint32_t>& ids, size_t escape_base,
                                 uint64_t total_cp) {
    CoverageResult r;
    r.tokens = ids.size();
    uint64_t unknown_cp = 0;
    for (uint32_t id : ids) {
        if (id < escape_base) continue;
        ++r.escape_tokens;
        unsigned char byte = static_cast<unsigned char>(id - escape_base);
        if (!utf8::is_continuation(byte)) ++unknown_cp;
    }
    r.oov_rate = r.tokens == 0
                     ? 0.0
                     : static_cast<double>(r.escape_tokens) / static_cast<double>(r.tokens);
    r.coverage = total_cp == 0 ? 1.0
                               : static_cast<double>(total_cp - unknown_cp) /
                                     static_cast<double>(total_cp);
    return r;
}

} // namespace

CoverageResult coverage_and_oov(const MatchAutomaton& a, std::string_view preprocessed) {
    return coverage_from_ids(encode(preprocessed, a), a.vocab_size(),
                             utf8::length(preprocessed));
}

std::vector<uint64_t> id_frequencies(const std::vector<uint32_t>& ids) {
    uint32_t max_id = 0;
    for (uint32_t id : ids) max_id = std::max(max_id, id);
    std::vector<uint64_t> counts(ids.empty() ? 0 : max_id + 1, 0);
    for (uint32_t id : ids) ++counts[id];
    return counts;
}

namespace {

std::vector<uint64_t> nonzero_sorted_desc(const std::vector<uint64_t>& counts) {
    std::vector<uint64_t> f;
    for (uint64_t c : counts)
        if (c > 0) f.push_back(c);
    std::sort(f.begin(), f.end(), std::greater<>());
    return f;
}

} // namespace

ZipfFit zipf_fit(const std::vector<uint64_t>& counts) {
    std::vector<uint64_t> f = nonzero_sorted_desc(counts);
    if (f.size() < 10)
        throw DegenerateDistribution("zipf_fit needs at least 10 distinct tokens, got " +
                                     std::to_string(f.size()));
    size_t n = f.size();
    ZipfFit fit;
    if (f.front() == f.back()) { // all counts equal: slope undefined
        fit.degenerate = true;
        return fit;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0, syy = 0;
    for (size_t r = 0; r < n; ++r) {
        double x = std::log(static_cast<double>(r + 1));
        double y = std::log(static_cast<double>(f[r]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        syy += y * y;
    }
    double dn = static_cast<double>(n);
    double vxx = sxx - sx * sx / dn;
    double vyy = syy - sy * sy / dn;
    double vxy = sxy - sx * sy / dn;
    if (vyy <= 0) {
        fit.degenerate = true;
        return fit;
    }
    double slope = vxy / vxx;
    fit.alpha = -slope;
    fit.r2 = (vxy * vxy) / (vxx * vyy);
    return fit;
}

double head_variance(const std::vector<uint64_t>& counts, size_t n) {
    std::vector<uint64_t> f = nonzero_sorted_desc(counts);
    if (f.empty()) return 0.0;
    uint64_t total = 0;
    for (uint64_t c : f) total += c;
    size_t m = std::min(n, f.size());
    double mean = 0;
    std::vector<double> rel(m);
    for (size_t i = 0; i < m; ++i) {
        rel[i] = static_cast<double>(f[i]) / static_cast<double>(total);
        mean += rel[i];
    }
    mean /= static_cast<double>(m);
    double var = 0;
    for (double v : rel) var += (v - mean) * (v - mean);
    return var / static_cast<double>(m);
}

double js_divergence(const std::vector<double>& p, const std::vector<double>& q) {
    double ps = 0, qs = 0;
    for (double v : p) ps += v;
    for (double v : q) qs += v;
    double js = 0;
    for (size_t i = 0; i < p.size(); ++i) {
        double a = ps > 0 ? p[i] / ps : 0;
        double b = qs > 0 ? q[i] / qs : 0;
        double m = 0.5 * (a + b);
        if (a > 0) js += 0.5 * a * std::log2(a / m);
        if (b > 0) js += 0.5 * b * std::log2(b / m);
    }
    return std::clamp(js, 0.0, 1.0);
}

double js_to_zipf(const std::vector<uint64_t>& counts, double alpha, size_t head_skip) {
    std::vector<uint64_t> f = nonzero_sorted_desc(counts);
    if (f.size() <= head_skip) return 0.0;
    std::vector<double> p, q;
    for (size_t r = head_skip; r < f.size(); ++r) {
        p.push_back(static_cast<double>(f[r]));
        q.push_back(std::pow(static_cast<double>(r + 1), -alpha));
    }
    return js_divergence(p, q);
}

NoiseDelta noise_delta(const MatchAutomaton& a, std::string_view preprocessed, double rate,
                       uint64_t seed, const SentinelConfig& cfg) {
    NoiseDelta d;
    CoverageResult clean = coverage_and_oov(a, preprocessed);
    std::string noisy = inject_noise(preprocessed, rate, seed, cfg);
    CoverageResult dirty = coverage_and_oov(a, noisy);
    d.oov_clean = clean.oov_rate;
    d.coverage_clean = clean.coverage;
    d.oov_noisy = dirty.oov_rate;
    d.coverage_noisy = dirty.coverage;
    return d;
}

MetricsReport evaluate(std::string_view raw_text, const SentinelConfig& cfg,
                       const std::function<std::vector<uint32_t>(std::string_view)>& encode_fn,
                       size_t escape_base) {
    MetricsReport r;
    std::string pre = preprocess(raw_text, cfg);
    std::vector<uint32_t> ids = encode_fn(pre);
    r.char_count = utf8::length(raw_text); // sentinel substitution is 1:1
    r.token_count = ids.size();
    r.tpc = r.char_count == 0 ? 0.0
                              : static_cast<double>(r.token_count) /
                                    static_cast<double>(r.char_count);
    CoverageResult cov = coverage_from_ids(ids, escape_base, r.char_count);
    r.coverage = cov.coverage;
    r.oov_rate = cov.oov_rate;
    std::vector<uint64_t> freq = id_frequencies(ids);
    try {
        ZipfFit fit = zipf_fit(freq);
        r.zipf_alpha = fit.alpha;
        r.zipf_r2 = fit.r2;
        r.zipf_degenerate = fit.degenerate;
    } catch (const DegenerateDistribution&) {
        r.zipf_degenerate = true;
    }
    r.head_variance = head_variance(freq);
    r.js_divergence = js_to_zipf(freq);
    return r;
}

MetricsReport evaluate(std::string_view raw_text, const SentinelConfig& cfg,
                       const Vocabulary& vocab) {
    MatchAutomaton a = MatchAutomaton::compile(vocab);
    return evaluate(
        raw_text, cfg, [&](std::string_view pre) { return encode(pre, a); },
        vocab.size());
}

double utilization(const Vocabulary& vocab, const std::vector<Shard>& shards) {
    if (vocab.size() <= 2) return 0.0;
    MatchAutomaton a = MatchAutomaton::compile(vocab);
    std::vector<char> used(vocab.size(), 0);
    for (const auto& s : shards) {
        for (size_t d = 0; d + 1 < s.doc_begin.size(); ++d) {
            std::string_view doc(s.text.data() + s.doc_begin[d],
                                 s.doc_begin[d + 1] - s.doc_begin[d]);
            for (uint32_t id : encode(doc, a))
                if (id < vocab.size()) used[id] = 1;
        }
    }
    size_t n = 0;
    for (size_t id = 2; id < used.size(); ++id) n += used[id]; // specials excluded
    return static_cast<double>(n) / static_cast<double>(vocab.size() - 2);
}

std::vector<CompareCell> compare(const std::vector<TokenizerHandle>& tokenizers,
                                 const std::vector<NamedCorpus>& corpora,
                                 const SentinelConfig& cfg) {
    std::vector<CompareCell> cells;
    for (const auto& corpus : corpora) {
        if (corpus.raw_text.empty())
            throw EmptyCorpus("empty corpus in comparison: " + corpus.name);
        for (const auto& t : tokenizers) {
            CompareCell cell;
            cell.corpus = corpus.name;
            cell.tokenizer = t.name;
            cell.vocab_size = t.vocab_size;
            cell.report = evaluate(corpus.raw_text, cfg, t.encode, t.escape_base);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

namespace {

json cell_report_json(const MetricsReport& r) {
    return json{{"tpc", r.tpc},
                {"coverage", r.coverage},
                {"oov_rate", r.oov_rate},
                {"zipf_alpha", r.zipf_alpha},
                {"zipf_r2", r.zipf_r2},
                {"zipf_degenerate", r.zipf_degenerate},
                {"head_variance", r.head_variance},
                {"js_divergence", r.js_divergence},
                {"token_count", r.token_count},
                {"char_count", r.char_count}};
}

} // namespace

std::string report_to_json(const MetricsReport& r) { return cell_report_json(r).dump(1); }

std::string compare_to_csv(const std::vector<CompareCell>& cells) {
    std::vector<std::string> cols, rows;
    for (const auto& c : cells) {
        std::string col = c.tokenizer + "@" + std::to_string(c.vocab_size);
        if (std::find(cols.begin(), cols.end(), col) == cols.end()) cols.push_back(col);
        if (std::find(rows.begin(), rows.end(), c.corpus) == rows.end())
            rows.push_back(c.corpus);
    }
    std::ostringstream out;
    out << "corpus";
    for (const auto& c : cols) out << ',' << c;
    out << '\n';
    for (const auto& row : rows) {
        out << row;
        for (const auto& col : cols) {
            out << ',';
            for (const auto& c : cells) {
                if (c.corpus == row && c.tokenizer + "@" + std::to_string(c.vocab_size) == col) {
                    out << c.report.tpc;
                    break;
                }
            }
        }
        out << '\n';
    }
    return out.str();
}

std::string compare_to_json(const std::vector<CompareCell>& cells) {
    json arr = json::array();
    for (const auto& c : cells) {
        json j = cell_report_json(c.report);
        j["corpus"] = c.corpus;
        j["tokenizer"] = c.tokenizer;
        j["vocab_size"] = c.vocab_size;
        arr.push_back(std::move(j));
    }
    return arr.dump(1);
}

} // namespace lmtk
