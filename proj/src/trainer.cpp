#include "lmtk/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <memory>
#include <optional>
#include <queue>

#include "lmtk/errors.hpp"
#include "lmtk/parallel.hpp"
#include "lmtk/rolling_hash.hpp"
#include "lmtk/scoreboard.hpp"
#include "lmtk/suffix_array.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

double ave_length(const std::vector<TokenizedShard>& shards) {
    uint64_t chars = 0, tokens = 0;
    for (const auto& s : shards) {
        chars += s.char_count();
        tokens += s.token_count();
    }
    return tokens == 0 ? 0.0 : static_cast<double>(chars) / static_cast<double>(tokens);
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_between(Clock::time_point a, Clock::time_point b) {
    return std::chrono::duration<double>(b - a).count();
}

struct HeapEntry {
    uint64_t score;
    uint32_t count;
    uint32_t lex_rank;
};

struct HeapWorse {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.score != b.score) return a.score < b.score;
        if (a.count != b.count) return a.count < b.count;
        return a.lex_rank > b.lex_rank;
    }
};

class Trainer {
public:
    Trainer(std::vector<Shard> raw_shards, const TrainConfig& cfg) : cfg_(cfg) {
        vocab_ = base_vocabulary(raw_shards, cfg_.sentinel, cfg_.counting.l_max);
        if (cfg_.target_size <= vocab_.base_size)
            throw InvalidK("target vocabulary size " + std::to_string(cfg_.target_size) +
                           " does not exceed the base alphabet size " +
                           std::to_string(vocab_.base_size));
        vocab_.target_size = cfg_.target_size;
        shards_.reserve(raw_shards.size());
        for (auto& s : raw_shards) shards_.emplace_back(std::move(s));
        for (const auto& ts : shards_) texts_.push_back(ts.text());
        rh_ = RollingHash(cfg_.counting.hash_base);
        sentinel_utf8_ = utf8::encode(cfg_.sentinel.sentinel);
    }

    TrainResult run(std::optional<Checkpoint> from) {
        if (from) restore(*from);
        report_.resumed_from = learned();

        if (cfg_.incremental)
            run_incremental();
        else
            run_recount();

        vocab_.iterations = learned();
        if (!cfg_.checkpoint_path.empty())
            save_checkpoint({vocab_, learned()}, cfg_.checkpoint_path);

        TrainResult result;
        for (const auto& ts : shards_) {
            result.total_tokens += ts.token_count();
            result.total_chars += ts.char_count();
        }
        result.vocab = std::move(vocab_);
        result.report = std::move(report_);
        return result;
    }

private:
    uint64_t learned() const { return vocab_.size() - vocab_.base_size; }

    void restore(const Checkpoint& ckpt) {
        if (ckpt.vocab.corpus_digest != vocab_.corpus_digest)
            throw CorruptCheckpoint("checkpoint was trained on a different corpus");
        if (ckpt.vocab.base_size != vocab_.base_size ||
            ckpt.vocab.l_max != cfg_.counting.l_max ||
            ckpt.vocab.sentinel != cfg_.sentinel.sentinel ||
            ckpt.vocab.word_separated != cfg_.sentinel.word_separated)
            throw CorruptCheckpoint("checkpoint config does not match training config");
        for (size_t id = ckpt.vocab.base_size; id < ckpt.vocab.tokens.size(); ++id) {
            const std::string& surface = ckpt.vocab.tokens[id];
            vocab_.append(surface);
            parallel_for(shards_.size(), cfg_.workers,
                         [&](size_t i) { shards_[i].apply_token(surface); });
        }
    }

    uint64_t corpus_tokens() const {
        uint64_t t = 0;
        for (const auto& ts : shards_) t += ts.token_count();
        return t;
    }

    void record_iteration(const Candidate& c, size_t applied) {
        IterationRecord rec;
        rec.surface = c.surface;
        rec.count = c.count;
        rec.score = c.score();
        rec.applied = applied;
        rec.corpus_tokens = corpus_tokens();
        rec.ave_length = ave_length(shards_);
        report_.iterations.push_back(std::move(rec));
        maybe_checkpoint();
    }

    void maybe_checkpoint() {
        if (cfg_.checkpoint_path.empty()) return;
        bool due = cfg_.checkpoint_interval > 0 && learned() % cfg_.checkpoint_interval == 0;
        if (cfg_.checkpoint_seconds > 0 &&
            seconds_between(last_checkpoint_, Clock::now()) >= cfg_.checkpoint_seconds)
            due = true;
        if (!due) return;
        vocab_.iterations = learned();
        save_checkpoint({vocab_, learned()}, cfg_.checkpoint_path);
        last_checkpoint_ = Clock::now();
    }

    // ---- exact-recount mode -------------------------------------------

    void run_recount() {
        while (vocab_.size() < cfg_.target_size) {
            auto t0 = Clock::now();
            std::vector<Scoreboard> boards(shards_.size(), Scoreboard(cfg_.scoreboard_m));
            parallel_for(shards_.size(), cfg_.workers, [&](size_t i) {
                CandidateTable local(texts_);
                accumulate_candidates(shards_[i], static_cast<uint32_t>(i), cfg_.counting,
                                      cfg_.sentinel, local);
                // min_freq applies to the merged counts: a surface below the
                // floor in one shard can still clear it globally.
                boards[i] = Scoreboard::from_table(local, cfg_.scoreboard_m, 1);
            });
            auto t1 = Clock::now();
            report_.count_seconds += seconds_between(t0, t1);

            std::vector<Candidate> accepted;
            try {
                MergeResult mr = merge_global(boards);
                size_t limit = cfg_.batch <= 1 ? 1 : cfg_.batch;
                for (const Candidate& c : mr.merged.ranked()) {
                    if (accepted.size() >= limit) break;
                    if (c.count < cfg_.counting.min_freq) continue;
                    bool clash = false;
                    for (const auto& a : accepted)
                        if (a.surface.find(c.surface) != std::string::npos ||
                            c.surface.find(a.surface) != std::string::npos)
                            clash = true;
                    if (!clash) accepted.push_back(c);
                }
                if (accepted.empty()) {
                    report_.early_halt = true;
                    break;
                }
            } catch (const EmptyBoards&) {
                report_.early_halt = true;
                break;
            }
            auto t2 = Clock::now();
            report_.select_seconds += seconds_between(t1, t2);

            for (const Candidate& c : accepted) {
                if (vocab_.size() >= cfg_.target_size) break;
                vocab_.append(c.surface);
                std::atomic<size_t> applied{0};
                parallel_for(shards_.size(), cfg_.workers, [&](size_t i) {
                    applied += shards_[i].apply_token(c.surface);
                });
                record_iteration(c, applied.load());
            }
            report_.apply_seconds += seconds_between(t2, Clock::now());
        }
    }

    // ---- incremental mode ---------------------------------------------

    void run_incremental() {
        auto t0 = Clock::now();
        build_corpus_index();
        build_global_table();
        build_heap();
        report_.count_seconds += seconds_between(t0, Clock::now());

        while (vocab_.size() < cfg_.target_size) {
            auto t1 = Clock::now();
            std::optional<Candidate> best = pick_best();
            report_.select_seconds += seconds_between(t1, Clock::now());
            if (!best) {
                report_.early_halt = true;
                break;
            }
            vocab_.append(best->surface);
            auto t2 = Clock::now();
            size_t applied = apply_everywhere(best->surface);
            report_.apply_seconds += seconds_between(t2, Clock::now());
            record_iteration(*best, applied);
        }
    }

    // One suffix array over the concatenated shard texts serves both
    // occurrence lookup and the admission filter below. The LCP array
    // (Kasai) tells in O(1) whether a substring occurs at least twice in
    // the corpus; unique substrings can never reach min_freq and counts
    // only decrease, so they are never stored. Matches that straddle a
    // shard boundary in the concatenation only over-admit, never drop a
    // real candidate.
    void build_corpus_index() {
        offsets_.resize(shards_.size() + 1);
        offsets_[0] = 0;
        for (size_t i = 0; i < shards_.size(); ++i)
            offsets_[i + 1] = offsets_[i] + texts_[i].size();
        concat_.reserve(offsets_.back());
        for (auto t : texts_) concat_.append(t);
        sa_ = build_suffix_array(concat_);
        size_t n = concat_.size();
        rank_.resize(n);
        for (size_t r = 0; r < n; ++r) rank_[sa_[r]] = static_cast<int32_t>(r);
        lcp_.assign(n, 0); // lcp_[r] = overlap of suffixes sa_[r-1], sa_[r]
        uint32_t k = 0;
        for (size_t i = 0; i < n; ++i) {
            int32_t r = rank_[i];
            if (r == 0) {
                k = 0;
                continue;
            }
            size_t j = static_cast<size_t>(sa_[r - 1]);
            while (i + k < n && j + k < n && concat_[i + k] == concat_[j + k]) ++k;
            lcp_[r] = static_cast<int32_t>(k);
            if (k > 0) --k;
        }
    }

    bool occurs_twice(uint32_t global_pos, uint32_t byte_len) const {
        int32_t r = rank_[global_pos];
        if (lcp_[r] >= static_cast<int32_t>(byte_len)) return true;
        size_t next = static_cast<size_t>(r) + 1;
        return next < lcp_.size() && lcp_[next] >= static_cast<int32_t>(byte_len);
    }

    struct AdmitCtx {
        const Trainer* self;
        uint32_t shard_offset;
    };

    static bool admit_repeated(const void* ctx, uint32_t pos, uint32_t byte_len) {
        const auto* c = static_cast<const AdmitCtx*>(ctx);
        return c->self->occurs_twice(c->shard_offset + pos, byte_len);
    }

    void build_global_table() {
        const bool filter = cfg_.counting.min_freq >= 2;
        table_ = std::make_unique<CandidateTable>(texts_);
        auto count_shard = [&](size_t i, CandidateTable& into) {
            AdmitCtx ctx{this, static_cast<uint32_t>(offsets_[i])};
            accumulate_candidates(shards_[i], static_cast<uint32_t>(i), cfg_.counting,
                                  cfg_.sentinel, into, filter ? &admit_repeated : nullptr,
                                  &ctx);
        };
        if (cfg_.workers <= 1 || shards_.size() <= 1) {
            for (size_t i = 0; i < shards_.size(); ++i) count_shard(i, *table_);
            return;
        }
        std::vector<std::unique_ptr<CandidateTable>> locals(shards_.size());
        parallel_for(shards_.size(), cfg_.workers, [&](size_t i) {
            locals[i] = std::make_unique<CandidateTable>(texts_);
            count_shard(i, *locals[i]);
        });
        for (size_t i = 0; i < locals.size(); ++i) {
            for (const auto& e : locals[i]->entries())
                table_->add(e.digest, e.shard, e.pos, e.byte_len, e.char_len, e.count);
            locals[i].reset();
        }
    }

    void build_heap() {
        size_t n = table_->size();
        lex_to_entry_.resize(n);
        for (uint32_t i = 0; i < n; ++i) lex_to_entry_[i] = i;
        std::sort(lex_to_entry_.begin(), lex_to_entry_.end(), [&](uint32_t a, uint32_t b) {
            return table_->surface(table_->entry(a)) < table_->surface(table_->entry(b));
        });
        std::vector<HeapEntry> init;
        init.reserve(n);
        for (uint32_t r = 0; r < n; ++r) {
            const auto& e = table_->entry(lex_to_entry_[r]);
            if (e.count >= cfg_.counting.min_freq)
                init.push_back({static_cast<uint64_t>(e.count) * e.char_len, e.count, r});
        }
        heap_ = std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapWorse>(
            HeapWorse{}, std::move(init));
    }

    // Pops until the top entry's snapshot matches its live count. Stale
    // entries are re-pushed with their corrected (strictly lower) key.
    std::optional<Candidate> pick_best() {
        while (!heap_.empty()) {
            HeapEntry t = heap_.top();
            const auto& e = table_->entry(lex_to_entry_[t.lex_rank]);
            if (e.count < cfg_.counting.min_freq) {
                heap_.pop();
                continue;
            }
            uint64_t score = static_cast<uint64_t>(e.count) * e.char_len;
            if (score != t.score || e.count != t.count) {
                heap_.pop();
                heap_.push({score, e.count, t.lex_rank});
                continue;
            }
            heap_.pop();
            return Candidate{std::string(table_->surface(e)), e.count, e.char_len};
        }
        return std::nullopt;
    }

    size_t apply_everywhere(const std::string& surface) {
        auto [lo, hi] = sa_find(concat_, sa_, surface);
        if (lo == hi) return 0;
        std::vector<uint32_t> positions;
        positions.reserve(hi - lo);
        for (size_t j = lo; j < hi; ++j)
            positions.push_back(static_cast<uint32_t>(sa_[j]));
        std::sort(positions.begin(), positions.end());

        std::atomic<size_t> applied{0};
        parallel_for(shards_.size(), cfg_.workers, [&](size_t i) {
            TokenizedShard& ts = shards_[i];
            auto begin = std::lower_bound(positions.begin(), positions.end(),
                                          static_cast<uint32_t>(offsets_[i]));
            uint32_t off = static_cast<uint32_t>(offsets_[i]);
            uint32_t shard_end = static_cast<uint32_t>(offsets_[i + 1]);
            for (auto it = begin; it != positions.end() && *it < shard_end; ++it) {
                uint32_t p = *it - off;
                uint32_t b = p + static_cast<uint32_t>(surface.size());
                if (b > ts.text().size()) continue; // straddles the next shard
                if (!ts.is_boundary(p) || !ts.is_boundary(b)) continue;
                if (b > ts.doc_end_of(p)) continue;
                if (ts.next(p) >= b) continue; // fewer than two tokens
                apply_at(ts, p, b);
                applied.fetch_add(1, std::memory_order_relaxed);
            }
        });
        return applied.load();
    }

    // Decrements every candidate run that this merge invalidates (all runs
    // with an endpoint strictly inside [a, b), plus the run itself), then
    // merges. Runs spanning the new token keep both endpoints and stay
    // valid, so no other count changes.
    void apply_at(TokenizedShard& ts, uint32_t a, uint32_t b) {
        std::string_view text = ts.text();
        const uint32_t docend = ts.doc_end_of(a);
        const uint32_t lmax = cfg_.counting.l_max;

        for (uint32_t x = ts.next(a); x != b; x = ts.next(x)) {
            // Runs starting at x.
            {
                uint64_t h = 0;
                uint32_t clen = 0, ntok = 0, pos = x;
                while (pos != docend) {
                    uint32_t tend = ts.next(pos);
                    clen += ts.token_char_len(pos);
                    if (clen > lmax) break;
                    for (uint32_t q = pos; q < tend; ++q)
                        h = rh_.extend(h, static_cast<unsigned char>(text[q]));
                    ++ntok;
                    pos = tend;
                    if (ntok >= 2) table_->decrement(h, text.substr(x, pos - x));
                }
            }
            // Runs ending at x that start at or before a (runs between two
            // interior boundaries were already handled at their start).
            {
                uint32_t cl = 0;
                for (uint32_t q = a; q != x; q = ts.next(q)) cl += ts.token_char_len(q);
                uint32_t s = a;
                bool at_a = true;
                while (cl <= lmax) {
                    if (!(at_a && ts.next(a) == x)) {
                        uint64_t h = 0;
                        for (uint32_t q = s; q < x; ++q)
                            h = rh_.extend(h, static_cast<unsigned char>(text[q]));
                        table_->decrement(h, text.substr(s, x - s));
                    }
                    uint32_t s2 = ts.prev(s);
                    if (s2 == kNoPos) break;
                    cl += ts.token_char_len(s2);
                    s = s2;
                    at_a = false;
                }
            }
        }
        {
            uint64_t h = 0;
            for (uint32_t q = a; q < b; ++q)
                h = rh_.extend(h, static_cast<unsigned char>(text[q]));
            table_->decrement(h, text.substr(a, b - a));
        }
        ts.merge(a, b);
    }

    TrainConfig cfg_;
    Vocabulary vocab_;
    TrainReport report_;
    std::vector<TokenizedShard> shards_;
    std::vector<std::string_view> texts_;
    std::string concat_;
    std::vector<size_t> offsets_;
    std::vector<int32_t> sa_, rank_, lcp_;
    std::unique_ptr<CandidateTable> table_;
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapWorse> heap_;
    std::vector<uint32_t> lex_to_entry_;
    RollingHash rh_;
    std::string sentinel_utf8_;
    Clock::time_point last_checkpoint_ = Clock::now();
};

} // namespace

TrainResult train(std::vector<Shard> shards, const TrainConfig& cfg) {
    Trainer t(std::move(shards), cfg);
    return t.run(std::nullopt);
}

TrainResult train_word_separated(std::vector<Shard> shards, TrainConfig cfg) {
    cfg.sentinel.word_separated = true;
    return train(std::move(shards), cfg);
}

TrainResult resume(const std::string& checkpoint_path, std::vector<Shard> shards,
                   const TrainConfig& cfg) {
    Checkpoint ckpt = load_checkpoint(checkpoint_path);
    Trainer t(std::move(shards), cfg);
    return t.run(std::move(ckpt));
}

} // namespace lmtk
