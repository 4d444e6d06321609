#pragma once

#include <cstdint>
#include <string_view>

namespace lmtk {

// Polynomial rolling hash over bytes, modulo the Mersenne prime 2^61 - 1.
// Digests are used as count-table keys; collisions are always resolved by
// comparing surfaces, so the hash only has to be fast and well spread.
class RollingHash {
public:
    static constexpr uint64_t kModulus = (1ULL << 61) - 1;
    static constexpr uint64_t kDefaultBase = 0x100000001B3ULL;

    explicit RollingHash(uint64_t base = kDefaultBase) : base_(base % kModulus) {}

    static uint64_t mulmod(uint64_t a, uint64_t b) {
        __uint128_t p = static_cast<__uint128_t>(a) * b;
        uint64_t lo = static_cast<uint64_t>(p & kModulus);
        uint64_t hi = static_cast<uint64_t>(p >> 61);
        uint64_t r = lo + hi;
        if (r >= kModulus) r -= kModulus;
        return r;
    }

    static uint64_t addmod(uint64_t a, uint64_t b) {
        uint64_t r = a + b;
        if (r >= kModulus) r -= kModulus;
        return r;
    }

    uint64_t base() const { return base_; }

    // digest(w) = sum_i w[i] * base^(n-1-i) mod p, bytes offset by 1 so that
    // leading zero bytes still contribute.
    uint64_t hash(std::string_view window) const {
        uint64_t h = 0;
        for (unsigned char c : window) h = addmod(mulmod(h, base_), c + 1u);
        return h;
    }

    // Appends one byte to a running digest.
    uint64_t extend(uint64_t digest, unsigned char incoming) const {
        return addmod(mulmod(digest, base_), incoming + 1u);
    }

    // Fixed-width roll: given digest of w[0..n), produces the digest of
    // w[1..n+1). `pow_n1` must be base^(n-1) mod p.
    uint64_t roll(uint64_t digest, unsigned char outgoing, unsigned char incoming,
                  uint64_t pow_n1) const {
        uint64_t drop = mulmod(outgoing + 1u, pow_n1);
        uint64_t h = digest >= drop ? digest - drop : digest + kModulus - drop;
        return extend(h, incoming);
    }

    uint64_t pow(uint64_t e) const {
        uint64_t r = 1, b = base_;
        while (e) {
            if (e & 1) r = mulmod(r, b);
            b = mulmod(b, b);
            e >>= 1;
        }
        return r;
    }

private:
    uint64_t base_;
};

} // namespace lmtk
