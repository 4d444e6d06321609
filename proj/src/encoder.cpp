#include "lmtk/encoder.hpp"

#include <istream>
#include <ostream>

#include "lmtk/errors.hpp"
#include "lmtk/unicode.hpp"

namespace lmtk {

uint32_t MatchAutomaton::child(uint32_t node, char32_t cp) const {
    for (uint32_t e = nodes_[node].first_edge; e != kNoMatch; e = edges_[e].next_edge)
        if (edges_[e].cp == cp) return edges_[e].node;
    return kNoMatch;
}

uint32_t MatchAutomaton::ensure_child(uint32_t node, char32_t cp) {
    uint32_t c = child(node, cp);
    if (c != kNoMatch) return c;
    uint32_t id = static_cast<uint32_t>(nodes_.size());
    nodes_.push_back({});
    edges_.push_back({cp, id, nodes_[node].first_edge});
    nodes_[node].first_edge = static_cast<uint32_t>(edges_.size() - 1);
    return id;
}

MatchAutomaton MatchAutomaton::compile(const Vocabulary& vocab) {
    MatchAutomaton a;
    a.vocab_size_ = vocab.size();
    a.nodes_.push_back({});
    for (uint32_t id = 0; id < vocab.tokens.size(); ++id) {
        const std::string& surface = vocab.tokens[id];
        uint32_t node = 0;
        size_t i = 0;
        while (i < surface.size()) node = a.ensure_child(node, utf8::decode_at(surface, i));
        if (a.nodes_[node].token_id != kNoMatch)
            throw DuplicateSurface("duplicate surface: " + surface);
        a.nodes_[node].token_id = id;
    }
    return a;
}

MatchAutomaton::Match MatchAutomaton::longest_match(std::string_view text, size_t pos) const {
    uint32_t node = 0;
    Match best{kNoMatch, 0};
    size_t i = pos;
    while (i < text.size()) {
        char32_t cp = utf8::decode_at(text, i);
        node = child(node, cp);
        if (node == kNoMatch) break;
        if (nodes_[node].token_id != kNoMatch)
            best = {nodes_[node].token_id, static_cast<uint32_t>(i - pos)};
    }
    return best;
}

std::vector<uint32_t> encode(std::string_view text, const MatchAutomaton& a) {
    std::vector<uint32_t> ids;
    size_t pos = 0;
    while (pos < text.size()) {
        auto m = a.longest_match(text, pos);
        if (m.id != MatchAutomaton::kNoMatch) {
            ids.push_back(m.id);
            pos += m.byte_len;
            continue;
        }
        // Code point absent from the vocabulary: emit its bytes as escapes.
        size_t next = pos;
        utf8::decode_at(text, next);
        for (size_t i = pos; i < next; ++i)
            ids.push_back(a.escape_id(static_cast<unsigned char>(text[i])));
        pos = next;
    }
    return ids;
}

std::string decode_preprocessed(const std::vector<uint32_t>& ids, const Vocabulary& vocab) {
    std::string out;
    for (uint32_t id : ids) {
        if (id < vocab.size()) {
            out += vocab.tokens[id];
        } else if (id < vocab.size() + 256) {
            out.push_back(static_cast<char>(id - vocab.size()));
        } else {
            throw UnknownId("token id out of range: " + std::to_string(id));
        }
    }
    return out;
}

std::string decode(const std::vector<uint32_t>& ids, const Vocabulary& vocab,
                   const SentinelConfig& cfg) {
    return restore_spaces(decode_preprocessed(ids, vocab), cfg);
}

namespace {
constexpr char kMagic[4] = {'L', 'M', 'T', 'K'};
constexpr char kVersion = 1;
} // namespace

void write_ids_binary(std::ostream& out, const std::vector<uint32_t>& ids) {
    out.write(kMagic, 4);
    out.put(kVersion);
    for (uint32_t id : ids) {
        char b[4] = {static_cast<char>(id), static_cast<char>(id >> 8),
                     static_cast<char>(id >> 16), static_cast<char>(id >> 24)};
        out.write(b, 4);
    }
}

std::vector<uint32_t> read_ids_binary(std::istream& in) {
    char magic[4];
    in.read(magic, 4);
    if (in.gcount() != 4 || std::string_view(magic, 4) != std::string_view(kMagic, 4))
        throw Error("bad id stream: missing LMTK magic");
    int version = in.get();
    if (version != kVersion)
        throw Error("unsupported id stream version: " + std::to_string(version));
    std::vector<uint32_t> ids;
    char b[4];
    while (in.read(b, 4)) {
        ids.push_back(static_cast<uint32_t>(static_cast<unsigned char>(b[0])) |
                      static_cast<uint32_t>(static_cast<unsigned char>(b[1])) << 8 |
                      static_cast<uint32_t>(static_cast<unsigned char>(b[2])) << 16 |
                      static_cast<uint32_t>(static_cast<unsigned char>(b[3])) << 24);
    }
    if (in.gcount() != 0) throw Error("truncated id stream");
    return ids;
}

void write_ids_text(std::ostream& out, const std::vector<uint32_t>& ids) {
    for (size_t i = 0; i < ids.size(); ++i) {
        if (i) out.put(' ');
        out << ids[i];
    }
    if (!ids.empty()) out.put('\n');
}

std::vector<uint32_t> read_ids_text(std::istream& in) {
    std::vector<uint32_t> ids;
    uint64_t v;
    while (in >> v) ids.push_back(static_cast<uint32_t>(v));
    return ids;
}

} // namespace lmtk
