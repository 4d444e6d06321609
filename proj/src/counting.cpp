#include "lmtk/counting.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>

#include "lmtk/unicode.hpp"

namespace lmtk {

TokenizedShard::TokenizedShard(Shard shard) : shard_(std::move(shard)) {
    const std::string& t = shard_.text;
    boundary_.assign(t.size() + 1, 0);
    next_.assign(t.size() + 1, kNoPos);
    prev_.assign(t.size() + 1, kNoPos);
    char_len_.assign(t.size() + 1, 0);
    boundary_[t.size()] = 1;
    char_count_ = utf8::length(t);

    for (size_t d = 0; d + 1 < shard_.doc_begin.size(); ++d) {
        uint32_t begin = shard_.doc_begin[d], end = shard_.doc_begin[d + 1];
        uint32_t prev_start = kNoPos;
        size_t i = begin;
        while (i < end) {
            uint32_t p = static_cast<uint32_t>(i);
            utf8::decode_at(t, i); // advances i; corpus text is pre-validated
            boundary_[p] = 1;
            char_len_[p] = 1;
            prev_[p] = prev_start;
            if (prev_start != kNoPos) next_[prev_start] = p;
            prev_start = p;
            ++token_count_;
        }
        if (prev_start != kNoPos) next_[prev_start] = end;
        boundary_[end] = 1;
    }
}

uint32_t TokenizedShard::doc_end_of(uint32_t pos) const {
    auto it = std::upper_bound(shard_.doc_begin.begin(), shard_.doc_begin.end(), pos);
    return *it;
}

void TokenizedShard::merge(uint32_t a, uint32_t b) {
    assert(boundary_[a] && boundary_[b] && next_[a] < b);
    uint32_t doc_end = doc_end_of(a);
    assert(b <= doc_end);
    uint32_t clen = char_len_[a];
    uint32_t x = next_[a];
    while (x != b) {
        clen += char_len_[x];
        boundary_[x] = 0;
        uint32_t nx = next_[x];
        --token_count_;
        x = nx;
    }
    next_[a] = b;
    if (b != doc_end) prev_[b] = a;
    char_len_[a] = static_cast<uint8_t>(clen);
}

size_t TokenizedShard::apply_token(std::string_view surface) {
    if (surface.empty()) return 0;
    size_t replaced = 0;
    std::string_view t = shard_.text;
    size_t from = 0;
    while (true) {
        size_t pos = t.find(surface, from);
        if (pos == std::string_view::npos) break;
        uint32_t a = static_cast<uint32_t>(pos);
        uint32_t b = static_cast<uint32_t>(pos + surface.size());
        if (boundary_[a] && boundary_[b] && b <= doc_end_of(a) && next_[a] != kNoPos &&
            next_[a] < b) {
            merge(a, b);
            ++replaced;
            from = b; // non-overlapping, resume past the replacement
        } else {
            from = pos + 1;
        }
    }
    return replaced;
}

std::vector<std::string_view> TokenizedShard::tokens() const {
    std::vector<std::string_view> out;
    out.reserve(token_count_);
    std::string_view t = shard_.text;
    for (size_t d = 0; d + 1 < shard_.doc_begin.size(); ++d) {
        uint32_t pos = shard_.doc_begin[d], end = shard_.doc_begin[d + 1];
        while (pos != end) {
            uint32_t e = next_[pos];
            out.push_back(t.substr(pos, e - pos));
            pos = e;
        }
    }
    return out;
}

CandidateTable::CandidateTable(std::vector<std::string_view> texts)
    : texts_(std::move(texts)) {
    slots_.assign(1024, 0);
    mask_ = slots_.size() - 1;
}

uint32_t* CandidateTable::slot_for(uint64_t digest) {
    size_t idx = (digest ^ (digest >> 31)) & mask_;
    while (slots_[idx] != 0) {
        if (entries_[slots_[idx] - 1].digest == digest) return &slots_[idx];
        idx = (idx + 1) & mask_;
    }
    return &slots_[idx];
}

void CandidateTable::grow() {
    std::vector<uint32_t> old;
    old.swap(slots_);
    slots_.assign(old.size() * 2, 0);
    mask_ = slots_.size() - 1;
    for (uint32_t i = 0; i < entries_.size(); ++i) {
        uint32_t* s = slot_for(entries_[i].digest);
        if (*s == 0) *s = i + 1; // later same-digest entries stay reachable via chain
    }
}

void CandidateTable::add(uint64_t digest, uint32_t shard, uint32_t pos,
                         uint16_t byte_len, uint8_t char_len, uint32_t delta) {
    if (entries_.size() * 2 >= slots_.size()) grow();
    uint32_t* s = slot_for(digest);
    std::string_view want = texts_[shard].substr(pos, byte_len);
    if (*s != 0) {
        uint32_t i = *s - 1;
        while (true) {
            Entry& e = entries_[i];
            if (e.byte_len == byte_len && surface(e) == want) {
                e.count += delta;
                return;
            }
            if (e.chain == kNoPos) break;
            i = e.chain;
        }
        // Verified digest collision: chain a fresh entry.
        Entry e{digest, delta, kNoPos, shard, pos, byte_len, char_len};
        entries_.push_back(e);
        entries_[i].chain = static_cast<uint32_t>(entries_.size() - 1);
        return;
    }
    Entry e{digest, delta, kNoPos, shard, pos, byte_len, char_len};
    entries_.push_back(e);
    *s = static_cast<uint32_t>(entries_.size());
}

const CandidateTable::Entry* CandidateTable::find(uint64_t digest,
                                                  std::string_view surf) const {
    size_t idx = (digest ^ (digest >> 31)) & mask_;
    while (slots_[idx] != 0) {
        const Entry* e = &entries_[slots_[idx] - 1];
        if (e->digest == digest) {
            while (true) {
                if (e->byte_len == surf.size() && surface(*e) == surf) return e;
                if (e->chain == kNoPos) return nullptr;
                e = &entries_[e->chain];
            }
        }
        idx = (idx + 1) & mask_;
    }
    return nullptr;
}

void CandidateTable::decrement(uint64_t digest, std::string_view surf) {
    const Entry* e = find(digest, surf);
    if (e == nullptr) return;
    std::atomic_ref<uint32_t> c(const_cast<Entry*>(e)->count);
    c.fetch_sub(1, std::memory_order_relaxed);
}

bool word_separated_ok(std::string_view surface, std::string_view sentinel_utf8) {
    size_t pos = surface.find(sentinel_utf8);
    if (pos == std::string_view::npos) return true;
    return pos + sentinel_utf8.size() == surface.size();
}

void accumulate_candidates(const TokenizedShard& ts, uint32_t shard_id,
                           const CountingConfig& cfg, const SentinelConfig& scfg,
                           CandidateTable& table, RunFilter admit, const void* admit_ctx) {
    RollingHash rh(cfg.hash_base);
    const std::string sent = utf8::encode(scfg.sentinel);
    const bool ws = scfg.word_separated;
    std::string_view text = ts.text();

    for (size_t d = 0; d < ts.doc_count(); ++d) {
        uint32_t end = ts.doc_end(d);
        for (uint32_t a = ts.doc_begin(d); a != end; a = ts.next(a)) {
            uint64_t h = 0;
            uint32_t clen = 0, ntokens = 0;
            bool trailing_sentinel = false;
            uint32_t pos = a;
            while (pos != end) {
                uint32_t tend = ts.next(pos);
                clen += ts.token_char_len(pos);
                if (clen > cfg.l_max) break;
                std::string_view tok = text.substr(pos, tend - pos);
                if (ws) {
                    if (trailing_sentinel) break; // would become internal
                    size_t sp = tok.find(sent);
                    if (sp != std::string_view::npos) {
                        if (sp + sent.size() != tok.size()) break;
                        trailing_sentinel = true;
                    }
                }
                for (unsigned char c : tok) h = rh.extend(h, c);
                ++ntokens;
                pos = tend;
                if (ntokens >= 2 && (!admit || admit(admit_ctx, a, pos - a)))
                    table.add(h, shard_id, a, static_cast<uint16_t>(pos - a),
                              static_cast<uint8_t>(clen), 1);
            }
        }
    }
}

std::map<std::string, uint64_t> enumerate_candidates(const TokenizedShard& ts,
                                                     const CountingConfig& cfg,
                                                     const SentinelConfig& scfg) {
    CandidateTable table({ts.text()});
    accumulate_candidates(ts, 0, cfg, scfg, table);
    std::map<std::string, uint64_t> out;
    for (const auto& e : table.entries())
        if (e.count >= cfg.min_freq) out[std::string(table.surface(e))] = e.count;
    return out;
}

} // namespace lmtk
