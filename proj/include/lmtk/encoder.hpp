#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "lmtk/corpus.hpp"
#include "lmtk/vocab.hpp"

namespace lmtk {

// Longest-prefix-match automaton over vocabulary surfaces: a code-point
// trie whose accepting nodes carry the token id. Immutable once compiled;
// safe to share across concurrent encode calls.
class MatchAutomaton {
public:
    // Throws DuplicateSurface if two surfaces collide.
    static MatchAutomaton compile(const Vocabulary& vocab);

    // Longest surface that prefixes text[pos..]; returns its token id and
    // byte length, or {kNoMatch, 0} when nothing matches.
    struct Match {
        uint32_t id;
        uint32_t byte_len;
    };
    Match longest_match(std::string_view text, size_t pos) const;

    size_t vocab_size() const { return vocab_size_; }
    // Ids in [vocab_size, vocab_size + 256) are reserved byte escapes.
    uint32_t escape_id(unsigned char byte) const {
        return static_cast<uint32_t>(vocab_size_) + byte;
    }

    static constexpr uint32_t kNoMatch = 0xFFFFFFFFu;

private:
    struct Node {
        uint32_t token_id = kNoMatch;
        uint32_t first_edge = kNoMatch;
    };
    struct Edge {
        char32_t cp;
        uint32_t node;
        uint32_t next_edge;
    };
    uint32_t child(uint32_t node, char32_t cp) const;
    uint32_t ensure_child(uint32_t node, char32_t cp);

    std::vector<Node> nodes_;
    std::vector<Edge> edges_;
    size_t vocab_size_ = 0;
};

// Greedy left-to-right longest match over preprocessed text. Code points
// without a vocabulary entry are emitted as byte-escape ids, so every
// input encodes. Throws InvalidUtf8 on malformed input.
std::vector<uint32_t> encode(std::string_view text, const MatchAutomaton& a);

// Inverse of encode: concatenates surfaces (escape ids contribute their raw
// byte) and maps the sentinel back to a space. Throws UnknownId.
std::string decode(const std::vector<uint32_t>& ids, const Vocabulary& vocab,
                   const SentinelConfig& cfg);

// Same, but keeps the sentinel form.
std::string decode_preprocessed(const std::vector<uint32_t>& ids, const Vocabulary& vocab);

// Binary id stream: magic "LMTK", one version byte, little-endian u32 ids.
void write_ids_binary(std::ostream& out, const std::vector<uint32_t>& ids);
std::vector<uint32_t> read_ids_binary(std::istream& in);

// Text id stream: whitespace-separated decimal ids.
void write_ids_text(std::ostream& out, const std::vector<uint32_t>& ids);
std::vector<uint32_t> read_ids_text(std::istream& in);

} // namespace lmtk
