#include "lmtk/vocab.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

using nlohmann::json;

uint32_t Vocabulary::append(const std::string& surface) {
    if (contains(surface)) throw DuplicateSurface("duplicate surface: " + surface);
    uint32_t id = static_cast<uint32_t>(tokens.size());
    tokens.push_back(surface);
    index.emplace(surface, id);
    return id;
}

uint32_t Vocabulary::id_of(const std::string& surface) const {
    auto it = index.find(surface);
    return it == index.end() ? kNoId : it->second;
}

void Vocabulary::rebuild_index() {
    index.clear();
    for (uint32_t i = 0; i < tokens.size(); ++i) {
        if (!index.emplace(tokens[i], i).second)
            throw DuplicateSurface("duplicate surface in vocabulary: " + tokens[i]);
    }
}

Vocabulary base_vocabulary(const std::vector<Shard>& shards, const SentinelConfig& cfg,
                           uint32_t l_max) {
    std::set<char32_t> alphabet;
    for (const auto& s : shards) {
        size_t i = 0;
        while (i < s.text.size()) alphabet.insert(utf8::decode_at(s.text, i));
    }
    Vocabulary v;
    v.sentinel = cfg.sentinel;
    v.word_separated = cfg.word_separated;
    v.l_max = l_max;
    v.corpus_digest = corpus_digest(shards);
    v.append(kEotToken);
    v.append(kPadToken);
    for (char32_t cp : alphabet) v.append(utf8::encode(cp));
    v.base_size = v.size();
    return v;
}

namespace {

json vocab_to_json(const Vocabulary& v) {
    return json{{"version", 1},
                {"sentinel", static_cast<uint32_t>(v.sentinel)},
                {"l_max", v.l_max},
                {"word_separated", v.word_separated},
                {"base_size", v.base_size},
                {"target_size", v.target_size},
                {"iterations", v.iterations},
                {"corpus_digest", v.corpus_digest},
                {"tokens", v.tokens}};
}

Vocabulary vocab_from_json(const json& j) {
    Vocabulary v;
    v.sentinel = static_cast<char32_t>(j.at("sentinel").get<uint32_t>());
    v.l_max = j.at("l_max").get<uint32_t>();
    v.word_separated = j.at("word_separated").get<bool>();
    v.base_size = j.at("base_size").get<size_t>();
    v.target_size = j.value("target_size", size_t{0});
    v.iterations = j.value("iterations", uint64_t{0});
    v.corpus_digest = j.value("corpus_digest", uint64_t{0});
    v.tokens = j.at("tokens").get<std::vector<std::string>>();
    v.rebuild_index();
    return v;
}

uint64_t fnv1a(std::string_view s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
    return h;
}

} // namespace

void save_vocabulary(const Vocabulary& v, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write vocabulary file: " + path);
    out << vocab_to_json(v).dump(1) << '\n';
}

Vocabulary load_vocabulary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open vocabulary file: " + path);
    json j = json::parse(in);
    return vocab_from_json(j);
}

void save_checkpoint(const Checkpoint& c, const std::string& path) {
    json payload{{"iteration", c.iteration}, {"vocab", vocab_to_json(c.vocab)}};
    std::string body = payload.dump();
    json file{{"version", 1}, {"payload", payload}, {"checksum", fnv1a(body)}};
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw Error("cannot write checkpoint file: " + path);
        out << file.dump(1) << '\n';
    }
    std::rename(tmp.c_str(), path.c_str());
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open checkpoint file: " + path);
    json file;
    try {
        file = json::parse(in);
    } catch (const json::exception& e) {
        throw CorruptCheckpoint(std::string("unparseable checkpoint: ") + e.what());
    }
    if (!file.contains("payload") || !file.contains("checksum"))
        throw CorruptCheckpoint("checkpoint missing payload or checksum");
    uint64_t want = file.at("checksum").get<uint64_t>();
    uint64_t got = fnv1a(file.at("payload").dump());
    if (want != got) throw CorruptCheckpoint("checkpoint checksum mismatch");
    Checkpoint c;
    c.iteration = file.at("payload").at("iteration").get<uint64_t>();
    c.vocab = vocab_from_json(file.at("payload").at("vocab"));
    return c;
}

} // namespace lmtk
