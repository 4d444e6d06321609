#include "lmtk/bpe.hpp"

#include <algorithm>
#include <fstream>
#include <queue>

#include <json.hpp>

#include "lmtk/errors.hpp"
#include "lmtk/parallel.hpp"
#include "lmtk/suffix_array.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

using nlohmann::json;

std::string pair_key(std::string_view left, std::string_view right) {
    std::string key;
    key.reserve(4 + left.size() + right.size());
    uint32_t n = static_cast<uint32_t>(left.size());
    for (int i = 0; i < 4; ++i) key.push_back(static_cast<char>(n >> (8 * i)));
    key.append(left);
    key.append(right);
    return key;
}

namespace {

struct PairInfo {
    std::string left, right;
    uint64_t count = 0;
};

struct PairHeapEntry {
    uint64_t count;
    uint32_t idx;
};

// Max-heap order: higher count first, then lexicographically smaller pair.
struct PairWorse {
    const std::vector<PairInfo>* infos;
    bool operator()(const PairHeapEntry& a, const PairHeapEntry& b) const {
        if (a.count != b.count) return a.count < b.count;
        const PairInfo& pa = (*infos)[a.idx];
        const PairInfo& pb = (*infos)[b.idx];
        if (pa.left != pb.left) return pa.left > pb.left;
        return pa.right > pb.right;
    }
};

class BpeTrainer {
public:
    BpeTrainer(std::vector<Shard> raw_shards, size_t target_size, const BpeConfig& cfg)
        : cfg_(cfg), target_(target_size) {
        Vocabulary base = base_vocabulary(raw_shards, cfg.sentinel, 0);
        if (target_ < base.base_size)
            throw InvalidK("target vocabulary size " + std::to_string(target_) +
                           " is below the base alphabet size " +
                           std::to_string(base.base_size));
        result_.corpus_digest = base.corpus_digest;
        result_.table.sentinel = cfg.sentinel.sentinel;
        result_.table.word_separated = cfg.sentinel.word_separated;
        result_.table.alphabet.assign(base.tokens.begin() + 2, base.tokens.end());
        base_size_ = base.base_size;
        sentinel_utf8_ = utf8::encode(cfg.sentinel.sentinel);
        shards_.reserve(raw_shards.size());
        for (auto& s : raw_shards) shards_.emplace_back(std::move(s));
    }

    BpeResult run() {
        size_t merges_wanted = target_ - base_size_;
        if (merges_wanted == 0) return std::move(result_);

        sas_.resize(shards_.size());
        parallel_for(shards_.size(), cfg_.workers,
                     [&](size_t i) { sas_[i] = build_suffix_array(shards_[i].text()); });
        count_initial_pairs();

        while (result_.table.merges.size() < merges_wanted) {
            uint32_t idx;
            if (!pick_best(idx)) {
                result_.early_halt = true;
                break;
            }
            PairInfo info = infos_[idx]; // copy; infos_ grows during apply
            result_.table.merges.emplace_back(info.left, info.right);
            result_.merge_counts.push_back(info.count);
            for (size_t i = 0; i < shards_.size(); ++i)
                apply_merge(i, info.left, info.right);
        }
        return std::move(result_);
    }

private:
    bool ws_ok(std::string_view concat) const {
        return !cfg_.sentinel.word_separated || word_separated_ok(concat, sentinel_utf8_);
    }

    uint32_t find_or_add(std::string_view left, std::string_view right) {
        std::string key = pair_key(left, right);
        auto it = index_.find(key);
        if (it != index_.end()) return it->second;
        uint32_t idx = static_cast<uint32_t>(infos_.size());
        infos_.push_back({std::string(left), std::string(right), 0});
        index_.emplace(std::move(key), idx);
        return idx;
    }

    void bump(std::string_view left, std::string_view right) {
        std::string concat = std::string(left) + std::string(right);
        if (!ws_ok(concat)) return;
        uint32_t idx = find_or_add(left, right);
        infos_[idx].count += 1;
        heap_.push({infos_[idx].count, idx});
    }

    void drop(std::string_view left, std::string_view right) {
        auto it = index_.find(pair_key(left, right));
        if (it == index_.end()) return; // inadmissible pair, never tracked
        infos_[it->second].count -= 1;
    }

    void count_initial_pairs() {
        for (const auto& ts : shards_) {
            std::string_view text = ts.text();
            for (size_t d = 0; d < ts.doc_count(); ++d) {
                uint32_t end = ts.doc_end(d);
                uint32_t p = ts.doc_begin(d);
                while (p != end) {
                    uint32_t m = ts.next(p);
                    if (m == end) break;
                    uint32_t b = ts.next(m);
                    bump(text.substr(p, m - p), text.substr(m, b - m));
                    p = m;
                }
            }
        }
    }

    bool pick_best(uint32_t& out) {
        while (!heap_.empty()) {
            PairHeapEntry e = heap_.top();
            const PairInfo& info = infos_[e.idx];
            if (info.count < cfg_.min_freq) {
                heap_.pop();
                continue;
            }
            if (e.count != info.count) {
                heap_.pop();
                // Stale-high entries are corrected; stale-low ones are
                // shadowed by the entry pushed at increment time.
                if (e.count > info.count) heap_.push({info.count, e.idx});
                continue;
            }
            heap_.pop();
            out = e.idx;
            return true;
        }
        return false;
    }

    void apply_merge(size_t i, const std::string& left, const std::string& right) {
        TokenizedShard& ts = shards_[i];
        std::string_view text = ts.text();
        std::string concat = left + right;
        auto [lo, hi] = sa_find(text, sas_[i], concat);
        if (lo == hi) return;
        std::vector<uint32_t> positions;
        positions.reserve(hi - lo);
        for (size_t j = lo; j < hi; ++j) positions.push_back(static_cast<uint32_t>(sas_[i][j]));
        std::sort(positions.begin(), positions.end());
        uint32_t llen = static_cast<uint32_t>(left.size());
        uint32_t tlen = static_cast<uint32_t>(concat.size());
        for (uint32_t p : positions) {
            uint32_t m = p + llen;
            uint32_t b = p + tlen;
            if (!ts.is_boundary(p) || ts.next(p) != m || ts.next(m) != b) continue;
            if (b > ts.doc_end_of(p)) continue;
            uint32_t docend = ts.doc_end_of(p);
            uint32_t prev = ts.prev(p);
            if (prev != kNoPos) {
                std::string_view ps = text.substr(prev, p - prev);
                drop(ps, left);
                bump(ps, concat);
            }
            if (b != docend) {
                std::string_view ns = text.substr(b, ts.next(b) - b);
                drop(right, ns);
                bump(concat, ns);
            }
            drop(left, right);
            ts.merge(p, b);
        }
    }

    BpeConfig cfg_;
    size_t target_;
    size_t base_size_ = 0;
    std::string sentinel_utf8_;
    BpeResult result_;
    std::vector<TokenizedShard> shards_;
    std::vector<std::vector<int32_t>> sas_;
    std::vector<PairInfo> infos_;
    std::unordered_map<std::string, uint32_t> index_;
    std::priority_queue<PairHeapEntry, std::vector<PairHeapEntry>, PairWorse> heap_{
        PairWorse{&infos_}};
};

} // namespace

BpeResult train_bpe(std::vector<Shard> shards, size_t target_size, const BpeConfig& cfg) {
    BpeTrainer t(std::move(shards), target_size, cfg);
    return t.run();
}

Vocabulary bpe_vocabulary(const MergeTable& table) {
    Vocabulary v;
    v.sentinel = table.sentinel;
    v.word_separated = table.word_separated;
    v.append(kEotToken);
    v.append(kPadToken);
    for (const auto& cp : table.alphabet) v.append(cp);
    v.base_size = v.size();
    for (const auto& [l, r] : table.merges) {
        std::string surface = l + r;
        if (!v.contains(surface)) v.append(surface);
    }
    v.target_size = v.base_size + table.merges.size();
    return v;
}

BpeEncoder::BpeEncoder(const MergeTable& table)
    : table_(table), vocab_(bpe_vocabulary(table)) {
    for (uint32_t r = 0; r < table.merges.size(); ++r)
        ranks_.emplace(pair_key(table.merges[r].first, table.merges[r].second), r);
}

std::vector<uint32_t> BpeEncoder::encode(std::string_view text) const {
    std::vector<uint32_t> ids;
    if (text.empty()) return ids;
    Shard doc;
    doc.text = std::string(text);
    doc.doc_begin = {0, static_cast<uint32_t>(text.size())};
    TokenizedShard ts(std::move(doc));
    std::string_view t = ts.text();
    uint32_t end = static_cast<uint32_t>(t.size());

    struct Site {
        uint32_t rank, pos;
    };
    auto later = [](const Site& a, const Site& b) {
        if (a.rank != b.rank) return a.rank > b.rank;
        return a.pos > b.pos;
    };
    std::priority_queue<Site, std::vector<Site>, decltype(later)> queue(later);
    auto push_site = [&](uint32_t p, uint32_t m, uint32_t b) {
        auto it = ranks_.find(pair_key(t.substr(p, m - p), t.substr(m, b - m)));
        if (it != ranks_.end()) queue.push({it->second, p});
    };
    for (uint32_t p = 0; p != end;) {
        uint32_t m = ts.next(p);
        if (m == end) break;
        push_site(p, m, ts.next(m));
        p = m;
    }
    while (!queue.empty()) {
        Site s = queue.top();
        queue.pop();
        const auto& [left, right] = table_.merges[s.rank];
        uint32_t p = s.pos;
        uint32_t m = p + static_cast<uint32_t>(left.size());
        uint32_t b = m + static_cast<uint32_t>(right.size());
        if (b > end || !ts.is_boundary(p) || ts.next(p) != m || ts.next(m) != b) continue;
        if (t.compare(p, m - p, left) != 0 || t.compare(m, b - m, right) != 0) continue;
        ts.merge(p, b);
        uint32_t prev = ts.prev(p);
        if (prev != kNoPos) push_site(prev, p, b);
        if (b != end) push_site(p, b, ts.next(b));
    }
    for (uint32_t p = 0; p != end; p = ts.next(p)) {
        std::string_view surface = t.substr(p, ts.next(p) - p);
        uint32_t id = vocab_.id_of(std::string(surface));
        if (id != Vocabulary::kNoId) {
            ids.push_back(id);
        } else {
            for (char c : surface)
                ids.push_back(static_cast<uint32_t>(vocab_.size()) +
                              static_cast<unsigned char>(c));
        }
    }
    return ids;
}

std::vector<uint32_t> encode_bpe(std::string_view text, const MergeTable& table) {
    return BpeEncoder(table).encode(text);
}

double bpe_utilization(const MergeTable& table, const std::vector<Shard>& shards) {
    BpeEncoder enc(table);
    const Vocabulary& v = enc.vocab();
    if (v.size() <= 2) return 0.0;
    std::vector<char> used(v.size(), 0);
    for (const auto& s : shards) {
        for (size_t d = 0; d + 1 < s.doc_begin.size(); ++d) {
            std::string_view doc(s.text.data() + s.doc_begin[d],
                                 s.doc_begin[d + 1] - s.doc_begin[d]);
            for (uint32_t id : enc.encode(doc))
                if (id < v.size()) used[id] = 1;
        }
    }
    size_t n = 0;
    for (size_t id = 2; id < used.size(); ++id) n += used[id]; // specials excluded
    return static_cast<double>(n) / static_cast<double>(v.size() - 2);
}

void save_merge_table(const MergeTable& table, const std::string& path) {
    json j{{"version", 1},
           {"sentinel", static_cast<uint32_t>(table.sentinel)},
           {"word_separated", table.word_separated},
           {"alphabet", table.alphabet},
           {"merges", table.merges}};
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write merge table file: " + path);
    out << j.dump(1) << '\n';
}

MergeTable load_merge_table(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open merge table file: " + path);
    json j = json::parse(in);
    MergeTable t;
    t.sentinel = static_cast<char32_t>(j.at("sentinel").get<uint32_t>());
    t.word_separated = j.at("word_separated").get<bool>();
    t.alphabet = j.at("alphabet").get<std::vector<std::string>>();
    t.merges = j.at("merges").get<std::vector<std::pair<std::string, std::string>>>();
    return t;
}

} // namespace lmtk
