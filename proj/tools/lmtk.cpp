// lmtk: train and evaluate length-weighted greedy tokenizers, with a BPE
// baseline, metrics, Zipf analysis, and a toy partition oracle.
#include <chrono>
#include <cmath>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "lmtk/bpe.hpp"
#include "lmtk/corpus.hpp"
#include "lmtk/encoder.hpp"
#include "lmtk/errors.hpp"
#include "lmtk/metrics.hpp"
#include "lmtk/parallel.hpp"
#include "lmtk/partition.hpp"
#include "lmtk/trainer.hpp"
#include "lmtk/unicode.hpp"

using json = nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

std::string read_file(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw lmtk::Error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, std::string_view body) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw lmtk::Error("cannot write file: " + path);
    out << body;
}

struct CorpusOpts {
    std::vector<std::string> paths;
    bool newline_delimited = false;
    std::string eot_marker = "<eot>";
    size_t shard_cap = 512ull << 20;
    uint32_t sentinel = 0x2423;
    bool word_separated = false;

    void attach(CLI::App* cmd, bool required = true) {
        auto* o = cmd->add_option("-c,--corpus", paths, "corpus file(s); '-' for stdin");
        if (required) o->required();
        cmd->add_flag("--newline-delimited", newline_delimited, "one document per line");
        cmd->add_option("--eot", eot_marker, "document separator marker");
        cmd->add_option("--shard-cap", shard_cap, "max shard size in bytes")
            ->envname("LMTK_SHARD_CAP");
        cmd->add_option("--sentinel", sentinel, "space sentinel code point")
            ->envname("LMTK_SENTINEL");
        cmd->add_flag("--word-separated", word_separated,
                      "restrict tokens to at most a trailing sentinel");
    }

    lmtk::SentinelConfig sentinel_cfg() const {
        return {static_cast<char32_t>(sentinel), word_separated};
    }

    std::vector<lmtk::Shard> load_shards() const {
        lmtk::RawCorpus corpus;
        corpus.eot_marker = eot_marker;
        for (const auto& p : paths) {
            lmtk::RawCorpus c = lmtk::load_corpus(p, newline_delimited, eot_marker);
            for (auto& d : c.documents) corpus.documents.push_back(std::move(d));
        }
        return lmtk::shard(corpus, shard_cap, sentinel_cfg());
    }
};

json report_json(const lmtk::TrainReport& r) {
    json iters = json::array();
    for (const auto& it : r.iterations)
        iters.push_back({{"surface", it.surface},
                         {"count", it.count},
                         {"score", it.score},
                         {"applied", it.applied},
                         {"corpus_tokens", it.corpus_tokens},
                         {"ave_length", it.ave_length}});
    return json{{"iterations", iters},
                {"count_seconds", r.count_seconds},
                {"select_seconds", r.select_seconds},
                {"apply_seconds", r.apply_seconds},
                {"early_halt", r.early_halt},
                {"resumed_from", r.resumed_from}};
}

int cmd_train(const CorpusOpts& corpus, lmtk::TrainConfig& cfg, const std::string& out,
              const std::string& report_path, const std::string& resume_from) {
    cfg.sentinel = corpus.sentinel_cfg();
    std::vector<lmtk::Shard> shards = corpus.load_shards();
    lmtk::TrainResult result = resume_from.empty()
                                   ? lmtk::train(std::move(shards), cfg)
                                   : lmtk::resume(resume_from, std::move(shards), cfg);
    lmtk::save_vocabulary(result.vocab, out);
    if (!report_path.empty()) write_file(report_path, report_json(result.report).dump(1));
    std::cerr << "vocab " << result.vocab.size() << " tokens, ave length "
              << (result.total_tokens
                      ? static_cast<double>(result.total_chars) / result.total_tokens
                      : 0.0)
              << (result.report.early_halt ? " (early halt)" : "") << "\n";
    return 0;
}

int cmd_train_bpe(const CorpusOpts& corpus, size_t k, lmtk::BpeConfig& cfg,
                  const std::string& out) {
    cfg.sentinel = corpus.sentinel_cfg();
    lmtk::BpeResult result = lmtk::train_bpe(corpus.load_shards(), k, cfg);
    lmtk::save_merge_table(result.table, out);
    std::cerr << result.table.merges.size() << " merges"
              << (result.early_halt ? " (early halt)" : "") << "\n";
    return 0;
}

int cmd_encode(const std::string& vocab_path, const std::string& merges_path,
               const std::string& input, const std::string& output, bool binary,
               bool no_preprocess, uint32_t sentinel) {
    std::string raw = read_file(input);
    lmtk::SentinelConfig cfg{static_cast<char32_t>(sentinel), false};
    std::vector<uint32_t> ids;
    if (!merges_path.empty()) {
        lmtk::MergeTable table = lmtk::load_merge_table(merges_path);
        cfg.sentinel = table.sentinel;
        lmtk::BpeEncoder enc(table);
        ids = enc.encode(no_preprocess ? raw : lmtk::preprocess(raw, cfg));
    } else {
        lmtk::Vocabulary vocab = lmtk::load_vocabulary(vocab_path);
        cfg.sentinel = vocab.sentinel;
        lmtk::MatchAutomaton a = lmtk::MatchAutomaton::compile(vocab);
        ids = lmtk::encode(no_preprocess ? raw : lmtk::preprocess(raw, cfg), a);
    }
    std::ofstream file;
    std::ostream* out = &std::cout;
    if (output != "-") {
        file.open(output, std::ios::binary);
        if (!file) throw lmtk::Error("cannot write file: " + output);
        out = &file;
    }
    if (binary)
        lmtk::write_ids_binary(*out, ids);
    else
        lmtk::write_ids_text(*out, ids);
    return 0;
}

int cmd_decode(const std::string& vocab_path, const std::string& merges_path,
               const std::string& input, const std::string& output, bool binary,
               bool keep_sentinel) {
    lmtk::Vocabulary vocab = merges_path.empty()
                                 ? lmtk::load_vocabulary(vocab_path)
                                 : lmtk::bpe_vocabulary(lmtk::load_merge_table(merges_path));
    std::vector<uint32_t> ids;
    if (input == "-") {
        if (binary)
            ids = lmtk::read_ids_binary(std::cin);
        else
            ids = lmtk::read_ids_text(std::cin);
    } else {
        std::ifstream in(input, std::ios::binary);
        if (!in) throw lmtk::Error("cannot open file: " + input);
        ids = binary ? lmtk::read_ids_binary(in) : lmtk::read_ids_text(in);
    }
    lmtk::SentinelConfig cfg{vocab.sentinel, vocab.word_separated};
    std::string text = keep_sentinel ? lmtk::decode_preprocessed(ids, vocab)
                                     : lmtk::decode(ids, vocab, cfg);
    if (output == "-")
        std::cout << text;
    else
        write_file(output, text);
    return 0;
}

lmtk::TokenizerHandle make_handle(const std::string& vocab_path,
                                  const std::string& merges_path,
                                  std::vector<std::shared_ptr<void>>& keep_alive) {
    lmtk::TokenizerHandle h;
    if (!merges_path.empty()) {
        auto table = std::make_shared<lmtk::MergeTable>(lmtk::load_merge_table(merges_path));
        auto enc = std::make_shared<lmtk::BpeEncoder>(*table);
        keep_alive.push_back(table);
        keep_alive.push_back(enc);
        h.name = "bpe:" + merges_path;
        h.vocab_size = enc->vocab().size();
        h.escape_base = enc->vocab().size();
        h.encode = [enc](std::string_view t) { return enc->encode(t); };
    } else {
        auto vocab = std::make_shared<lmtk::Vocabulary>(lmtk::load_vocabulary(vocab_path));
        auto a = std::make_shared<lmtk::MatchAutomaton>(lmtk::MatchAutomaton::compile(*vocab));
        keep_alive.push_back(vocab);
        keep_alive.push_back(a);
        h.name = "lmtk:" + vocab_path;
        h.vocab_size = vocab->size();
        h.escape_base = vocab->size();
        h.encode = [a](std::string_view t) { return lmtk::encode(t, *a); };
    }
    return h;
}

int cmd_stats(const std::string& vocab_path, const std::string& merges_path,
              const std::string& corpus_path, const CorpusOpts& train_corpus) {
    std::vector<std::shared_ptr<void>> keep_alive;
    lmtk::TokenizerHandle h = make_handle(vocab_path, merges_path, keep_alive);
    std::string raw = read_file(corpus_path);
    lmtk::SentinelConfig cfg{static_cast<char32_t>(train_corpus.sentinel), false};
    if (!vocab_path.empty()) cfg.sentinel = lmtk::load_vocabulary(vocab_path).sentinel;
    lmtk::MetricsReport r = lmtk::evaluate(raw, cfg, h.encode, h.escape_base);
    json j = json::parse(lmtk::report_to_json(r));
    if (!train_corpus.paths.empty()) {
        std::vector<lmtk::Shard> shards = train_corpus.load_shards();
        if (!merges_path.empty())
            j["utilization"] = lmtk::bpe_utilization(lmtk::load_merge_table(merges_path), shards);
        else
            j["utilization"] = lmtk::utilization(lmtk::load_vocabulary(vocab_path), shards);
    }
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_compare(const std::vector<std::string>& vocabs, const std::vector<std::string>& merges,
                const std::vector<std::string>& corpora, uint32_t sentinel,
                const std::string& csv_out, const std::string& json_out) {
    std::vector<std::shared_ptr<void>> keep_alive;
    std::vector<lmtk::TokenizerHandle> handles;
    for (const auto& v : vocabs) handles.push_back(make_handle(v, "", keep_alive));
    for (const auto& m : merges) handles.push_back(make_handle("", m, keep_alive));
    if (handles.empty()) throw lmtk::Error("compare needs at least one --vocab or --merges");
    std::vector<lmtk::NamedCorpus> named;
    for (const auto& c : corpora) named.push_back({c, read_file(c)});
    lmtk::SentinelConfig cfg{static_cast<char32_t>(sentinel), false};
    auto cells = lmtk::compare(handles, named, cfg);
    std::string csv = lmtk::compare_to_csv(cells);
    std::string js = lmtk::compare_to_json(cells);
    if (!csv_out.empty()) write_file(csv_out, csv);
    if (!json_out.empty()) write_file(json_out, js);
    if (csv_out.empty() && json_out.empty()) std::cout << csv;
    return 0;
}

int cmd_zipf(const std::string& vocab_path, const std::string& merges_path,
             const std::string& corpus_path, double alpha, size_t head_skip) {
    std::vector<std::shared_ptr<void>> keep_alive;
    lmtk::TokenizerHandle h = make_handle(vocab_path, merges_path, keep_alive);
    std::string raw = read_file(corpus_path);
    lmtk::SentinelConfig cfg;
    if (!vocab_path.empty()) cfg.sentinel = lmtk::load_vocabulary(vocab_path).sentinel;
    std::vector<uint32_t> ids = h.encode(lmtk::preprocess(raw, cfg));
    std::vector<uint64_t> freq = lmtk::id_frequencies(ids);
    json j;
    try {
        lmtk::ZipfFit fit = lmtk::zipf_fit(freq);
        j["alpha"] = fit.alpha;
        j["r2"] = fit.r2;
        j["degenerate"] = fit.degenerate;
    } catch (const lmtk::DegenerateDistribution& e) {
        j["degenerate"] = true;
        j["error"] = e.what();
    }
    j["head_variance"] = lmtk::head_variance(freq);
    j["js_to_zipf"] = lmtk::js_to_zipf(freq, alpha, head_skip);
    j["token_count"] = ids.size();
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_oracle(const std::string& sequences_path, size_t k) {
    std::istringstream in(read_file(sequences_path));
    std::vector<std::string> sequences;
    std::string line;
    while (std::getline(in, line))
        if (!line.empty()) sequences.push_back(line);
    lmtk::PrefixGraph g = lmtk::build_graph(sequences);
    lmtk::Partition best = lmtk::brute_force_best(g, k);
    lmtk::GreedyResult greedy = lmtk::greedy_split(g, k);
    json steps = json::array();
    for (const auto& s : greedy.steps)
        steps.push_back({{"delta", s.delta}, {"objective_after", s.objective_after}});
    json j{{"optimal",
            {{"blocks", best.blocks}, {"objective", lmtk::objective(best, g)}}},
           {"greedy",
            {{"blocks", greedy.partition.blocks},
             {"objective", greedy.objective},
             {"steps", steps}}}};
    std::cout << j.dump(1) << "\n";
    return 0;
}

int cmd_noise(const std::string& vocab_path, const std::string& corpus_path, double rate,
              std::vector<uint64_t> seeds) {
    lmtk::Vocabulary vocab = lmtk::load_vocabulary(vocab_path);
    lmtk::MatchAutomaton a = lmtk::MatchAutomaton::compile(vocab);
    lmtk::SentinelConfig cfg{vocab.sentinel, vocab.word_separated};
    std::string pre = lmtk::preprocess(read_file(corpus_path), cfg);
    if (seeds.empty()) seeds = {42, 123, 456, 789, 1024};
    json rows = json::array();
    for (uint64_t seed : seeds) {
        lmtk::NoiseDelta d = lmtk::noise_delta(a, pre, rate, seed, cfg);
        rows.push_back({{"seed", seed},
                        {"rate", rate},
                        {"oov_clean", d.oov_clean},
                        {"oov_noisy", d.oov_noisy},
                        {"coverage_clean", d.coverage_clean},
                        {"coverage_noisy", d.coverage_noisy}});
    }
    std::cout << rows.dump(1) << "\n";
    return 0;
}

int cmd_bench(const CorpusOpts& corpus, const std::string& vocab_path,
              std::vector<int> worker_counts, int runs, double warmup_seconds,
              uint32_t l_max) {
    std::vector<lmtk::Shard> shards = corpus.load_shards();
    std::vector<lmtk::TokenizedShard> ts;
    for (auto s : shards) ts.emplace_back(std::move(s));
    if (worker_counts.empty()) worker_counts = {1, 2, 4, 8};
    lmtk::CountingConfig ccfg;
    ccfg.l_max = l_max;
    lmtk::SentinelConfig scfg = corpus.sentinel_cfg();
    std::vector<std::string_view> texts;
    for (const auto& t : ts) texts.push_back(t.text());

    auto count_once = [&](int workers) {
        auto t0 = Clock::now();
        std::vector<std::unique_ptr<lmtk::CandidateTable>> tables(ts.size());
        lmtk::parallel_for(ts.size(), workers, [&](size_t i) {
            tables[i] = std::make_unique<lmtk::CandidateTable>(texts);
            lmtk::accumulate_candidates(ts[i], static_cast<uint32_t>(i), ccfg, scfg,
                                        *tables[i]);
        });
        return std::chrono::duration<double>(Clock::now() - t0).count();
    };

    auto warm_end = Clock::now() + std::chrono::duration<double>(warmup_seconds);
    while (Clock::now() < warm_end) count_once(worker_counts.front());

    json rows = json::array();
    double base_mean = 0;
    for (int w : worker_counts) {
        double sum = 0, sum2 = 0;
        for (int r = 0; r < runs; ++r) {
            double t = count_once(w);
            sum += t;
            sum2 += t * t;
        }
        double mean = sum / runs;
        double var = runs > 1 ? (sum2 - sum * sum / runs) / (runs - 1) : 0.0;
        if (w == worker_counts.front()) base_mean = mean * w; // time at 1 worker equiv
        double speedup = base_mean / (mean * worker_counts.front());
        rows.push_back({{"workers", w},
                        {"mean_seconds", mean},
                        {"std_seconds", std::sqrt(std::max(0.0, var))},
                        {"speedup", speedup},
                        {"efficiency", speedup / w}});
    }
    json j{{"counting", rows}};

    if (!vocab_path.empty()) {
        lmtk::Vocabulary vocab = lmtk::load_vocabulary(vocab_path);
        lmtk::MatchAutomaton a = lmtk::MatchAutomaton::compile(vocab);
        double bytes = 0;
        for (const auto& t : ts) bytes += static_cast<double>(t.text().size());
        double sum = 0, sum2 = 0;
        for (int r = 0; r < runs; ++r) {
            auto t0 = Clock::now();
            for (const auto& t : ts) lmtk::encode(t.text(), a);
            double dt = std::chrono::duration<double>(Clock::now() - t0).count();
            sum += dt;
            sum2 += dt * dt;
        }
        double mean = sum / runs;
        double var = runs > 1 ? (sum2 - sum * sum / runs) / (runs - 1) : 0.0;
        j["encode"] = {{"mb_per_second", bytes / mean / 1e6},
                       {"mean_seconds", mean},
                       {"std_seconds", std::sqrt(std::max(0.0, var))}};
    }
    std::cout << j.dump(1) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"length-weighted greedy tokenizer toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags win");

    // train
    auto* train = app.add_subcommand("train", "train a vocabulary");
    CorpusOpts train_corpus;
    train_corpus.attach(train);
    lmtk::TrainConfig tcfg;
    std::string train_out = "vocab.json", train_report, train_resume;
    bool recount = false;
    train->add_option("-K,--vocab-size", tcfg.target_size, "target vocabulary size")
        ->required()
        ->envname("LMTK_K");
    train->add_option("--l-max", tcfg.counting.l_max, "max token length in code points")
        ->envname("LMTK_L_MAX");
    train->add_option("--min-freq", tcfg.counting.min_freq, "minimum candidate frequency")
        ->envname("LMTK_MIN_FREQ");
    train->add_option("-M,--scoreboard", tcfg.scoreboard_m, "per-worker scoreboard size")
        ->envname("LMTK_M");
    train->add_option("-w,--workers", tcfg.workers, "worker threads")
        ->envname("LMTK_WORKERS");
    train->add_option("--batch", tcfg.batch, "candidates accepted per counting round");
    train->add_flag("--recount", recount, "recount every iteration (reference mode)");
    train->add_option("--checkpoint", tcfg.checkpoint_path, "checkpoint file path");
    train->add_option("--checkpoint-interval", tcfg.checkpoint_interval,
                      "iterations between checkpoints (0 = off)");
    train->add_option("--resume", train_resume, "resume from this checkpoint file");
    train->add_option("-o,--out", train_out, "output vocabulary file");
    train->add_option("--report", train_report, "write per-iteration report JSON here");

    // train-bpe
    auto* tbpe = app.add_subcommand("train-bpe", "train the BPE baseline");
    CorpusOpts bpe_corpus;
    bpe_corpus.attach(tbpe);
    lmtk::BpeConfig bcfg;
    size_t bpe_k = 0;
    std::string bpe_out = "merges.json";
    tbpe->add_option("-K,--vocab-size", bpe_k, "target vocabulary size")
        ->required()
        ->envname("LMTK_K");
    tbpe->add_option("--min-freq", bcfg.min_freq, "stop below this pair frequency");
    tbpe->add_option("-w,--workers", bcfg.workers, "worker threads")->envname("LMTK_WORKERS");
    tbpe->add_option("-o,--out", bpe_out, "output merge table file");

    // encode / decode
    auto* enc = app.add_subcommand("encode", "encode text to token ids");
    std::string enc_vocab, enc_merges, enc_in = "-", enc_out = "-";
    bool enc_binary = false, enc_nopre = false;
    uint32_t enc_sentinel = 0x2423;
    enc->add_option("--vocab", enc_vocab, "vocabulary file");
    enc->add_option("--merges", enc_merges, "BPE merge table file");
    enc->add_option("-i,--input", enc_in, "input file; '-' for stdin");
    enc->add_option("-o,--output", enc_out, "output file; '-' for stdout");
    enc->add_flag("--binary", enc_binary, "binary id stream (LMTK magic)");
    enc->add_flag("--no-preprocess", enc_nopre, "input already uses the sentinel");
    enc->add_option("--sentinel", enc_sentinel)->envname("LMTK_SENTINEL");

    auto* dec = app.add_subcommand("decode", "decode token ids to text");
    std::string dec_vocab, dec_merges, dec_in = "-", dec_out = "-";
    bool dec_binary = false, dec_keep = false;
    dec->add_option("--vocab", dec_vocab, "vocabulary file");
    dec->add_option("--merges", dec_merges, "BPE merge table file");
    dec->add_option("-i,--input", dec_in, "input file; '-' for stdin");
    dec->add_option("-o,--output", dec_out, "output file; '-' for stdout");
    dec->add_flag("--binary", dec_binary, "input is a binary id stream");
    dec->add_flag("--keep-sentinel", dec_keep, "do not map the sentinel back to spaces");

    // stats
    auto* stats = app.add_subcommand("stats", "metrics for one tokenizer on one text");
    std::string st_vocab, st_merges, st_corpus;
    CorpusOpts st_train;
    stats->add_option("--vocab", st_vocab, "vocabulary file");
    stats->add_option("--merges", st_merges, "BPE merge table file");
    stats->add_option("--heldout", st_corpus, "raw held-out text file")->required();
    st_train.attach(stats, /*required=*/false);

    // compare
    auto* cmp = app.add_subcommand("compare", "side-by-side metrics grid");
    std::vector<std::string> cmp_vocabs, cmp_merges, cmp_corpora;
    std::string cmp_csv, cmp_json;
    uint32_t cmp_sentinel = 0x2423;
    cmp->add_option("--vocab", cmp_vocabs, "vocabulary file(s)");
    cmp->add_option("--merges", cmp_merges, "BPE merge table file(s)");
    cmp->add_option("-c,--corpus", cmp_corpora, "raw text file(s)")->required();
    cmp->add_option("--csv", cmp_csv, "write the TPC grid CSV here");
    cmp->add_option("--json", cmp_json, "write the full grid JSON here");
    cmp->add_option("--sentinel", cmp_sentinel)->envname("LMTK_SENTINEL");

    // zipf
    auto* zipf = app.add_subcommand("zipf", "rank-frequency fit for encoded text");
    std::string z_vocab, z_merges, z_corpus;
    double z_alpha = 1.0;
    size_t z_skip = 50;
    zipf->add_option("--vocab", z_vocab, "vocabulary file");
    zipf->add_option("--merges", z_merges, "BPE merge table file");
    zipf->add_option("-c,--corpus", z_corpus, "raw text file")->required();
    zipf->add_option("--alpha", z_alpha, "ideal Zipf exponent for the tail divergence");
    zipf->add_option("--head-skip", z_skip, "ranks excluded from the tail divergence");

    // oracle
    auto* oracle = app.add_subcommand("oracle", "partition objective on a toy instance");
    std::string or_sequences;
    size_t or_k = 2;
    oracle->add_option("-s,--sequences", or_sequences, "file with one sequence per line")
        ->required();
    oracle->add_option("-K,--blocks", or_k, "number of partition blocks")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "counting scaling and encode throughput");
    CorpusOpts bench_corpus;
    bench_corpus.attach(bench);
    std::string bench_vocab;
    std::vector<int> bench_workers;
    int bench_runs = 3;
    double bench_warmup = 10.0;
    uint32_t bench_lmax = 16;
    bench->add_option("--vocab", bench_vocab, "vocabulary for the encode benchmark");
    bench->add_option("-w,--workers", bench_workers, "worker counts to sweep");
    bench->add_option("--runs", bench_runs, "measured runs per configuration");
    bench->add_option("--warmup-seconds", bench_warmup, "warm-up period");
    bench->add_option("--l-max", bench_lmax)->envname("LMTK_L_MAX");

    // noise
    auto* noise = app.add_subcommand("noise", "OOV under substitution noise");
    std::string n_vocab, n_corpus;
    double n_rate = 0.03;
    std::vector<uint64_t> n_seeds;
    noise->add_option("--vocab", n_vocab, "vocabulary file")->required();
    noise->add_option("-c,--corpus", n_corpus, "raw text file")->required();
    noise->add_option("--rate", n_rate, "substitution probability per code point");
    noise->add_option("--seed", n_seeds, "seed list")->envname("LMTK_SEED");

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            tcfg.incremental = !recount;
            return cmd_train(train_corpus, tcfg, train_out, train_report, train_resume);
        }
        if (tbpe->parsed()) return cmd_train_bpe(bpe_corpus, bpe_k, bcfg, bpe_out);
        if (enc->parsed()) {
            if (enc_vocab.empty() == enc_merges.empty())
                throw lmtk::Error("encode needs exactly one of --vocab / --merges");
            return cmd_encode(enc_vocab, enc_merges, enc_in, enc_out, enc_binary, enc_nopre,
                              enc_sentinel);
        }
        if (dec->parsed()) {
            if (dec_vocab.empty() == dec_merges.empty())
                throw lmtk::Error("decode needs exactly one of --vocab / --merges");
            return cmd_decode(dec_vocab, dec_merges, dec_in, dec_out, dec_binary, dec_keep);
        }
        if (stats->parsed()) {
            if (st_vocab.empty() == st_merges.empty())
                throw lmtk::Error("stats needs exactly one of --vocab / --merges");
            return cmd_stats(st_vocab, st_merges, st_corpus, st_train);
        }
        if (cmp->parsed())
            return cmd_compare(cmp_vocabs, cmp_merges, cmp_corpora, cmp_sentinel, cmp_csv,
                               cmp_json);
        if (zipf->parsed()) {
            if (z_vocab.empty() == z_merges.empty())
                throw lmtk::Error("zipf needs exactly one of --vocab / --merges");
            return cmd_zipf(z_vocab, z_merges, z_corpus, z_alpha, z_skip);
        }
        if (oracle->parsed()) return cmd_oracle(or_sequences, or_k);
        if (bench->parsed())
            return cmd_bench(bench_corpus, bench_vocab, bench_workers, bench_runs,
                             bench_warmup, bench_lmax);
        if (noise->parsed()) return cmd_noise(n_vocab, n_corpus, n_rate, n_seeds);
    } catch (const lmtk::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
