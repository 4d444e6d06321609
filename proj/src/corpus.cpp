#include "lmtk/corpus.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include "lmtk/unicode.hpp"

namespace lmtk {

std::string preprocess(std::string_view text, const SentinelConfig& cfg) {
    std::string sentinel = utf8::encode(cfg.sentinel);
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        char32_t cp = utf8::decode_at(text, i);
        if (cp == cfg.sentinel)
            throw SentinelCollision("sentinel code point already present in input");
        if (cp == U' ')
            out += sentinel;
        else
            out.append(text.substr(start, i - start));
    }
    return out;
}

std::string restore_spaces(std::string_view text, const SentinelConfig& cfg) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        char32_t cp = utf8::decode_at(text, i);
        if (cp == cfg.sentinel)
            out.push_back(' ');
        else
            out.append(text.substr(start, i - start));
    }
    return out;
}

std::vector<Shard> shard(const RawCorpus& corpus, size_t max_shard_bytes,
                         const SentinelConfig& cfg) {
    std::vector<Shard> shards;
    Shard cur;
    cur.doc_begin.push_back(0);
    auto flush = [&] {
        if (cur.doc_count() > 0) {
            cur.id = static_cast<uint32_t>(shards.size());
            shards.push_back(std::move(cur));
            cur = Shard{};
            cur.doc_begin.push_back(0);
        }
    };
    for (const auto& doc : corpus.documents) {
        std::string pre = preprocess(doc, cfg);
        if (pre.size() > max_shard_bytes)
            throw DocumentTooLarge("document of " + std::to_string(pre.size()) +
                                   " bytes exceeds shard cap of " +
                                   std::to_string(max_shard_bytes));
        if (cur.text.size() + pre.size() > max_shard_bytes) flush();
        cur.text += pre;
        cur.doc_begin.push_back(static_cast<uint32_t>(cur.text.size()));
    }
    flush();
    return shards;
}

std::string reassemble(const std::vector<Shard>& shards, const std::string& eot_marker) {
    std::string out;
    bool first = true;
    for (const auto& s : shards) {
        for (size_t d = 0; d + 1 < s.doc_begin.size(); ++d) {
            if (!first) out += eot_marker;
            first = false;
            out.append(s.text, s.doc_begin[d], s.doc_begin[d + 1] - s.doc_begin[d]);
        }
    }
    return out;
}

std::string inject_noise(std::string_view text, double rate, uint64_t seed,
                         const SentinelConfig& cfg) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    std::uniform_int_distribution<int> letter(0, 51);
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        size_t start = i;
        char32_t cp = utf8::decode_at(text, i);
        if (cp != cfg.sentinel && coin(rng) < rate) {
            int l = letter(rng);
            out.push_back(static_cast<char>(l < 26 ? 'a' + l : 'A' + (l - 26)));
        } else {
            out.append(text.substr(start, i - start));
        }
    }
    return out;
}

RawCorpus load_corpus(const std::string& path, bool newline_delimited,
                      const std::string& eot_marker) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    std::string all = buf.str();
    if (!utf8::valid(all)) throw InvalidUtf8("corpus file is not valid UTF-8: " + path);

    RawCorpus corpus;
    corpus.eot_marker = eot_marker;
    if (newline_delimited) {
        size_t pos = 0;
        while (pos <= all.size()) {
            size_t nl = all.find('\n', pos);
            if (nl == std::string::npos) {
                if (pos < all.size()) corpus.documents.push_back(all.substr(pos));
                break;
            }
            if (nl > pos) corpus.documents.push_back(all.substr(pos, nl - pos));
            pos = nl + 1;
        }
    } else {
        size_t pos = 0;
        while (pos <= all.size()) {
            size_t m = all.find(eot_marker, pos);
            if (m == std::string::npos) {
                if (pos < all.size()) corpus.documents.push_back(all.substr(pos));
                break;
            }
            if (m > pos) corpus.documents.push_back(all.substr(pos, m - pos));
            pos = m + eot_marker.size();
        }
    }
    return corpus;
}

uint64_t corpus_digest(const std::vector<Shard>& shards) {
    uint64_t h = 1469598103934665603ULL;
    for (const auto& s : shards)
        for (unsigned char c : s.text) h = (h ^ c) * 1099511628211ULL;
    return h;
}

} // namespace lmtk
