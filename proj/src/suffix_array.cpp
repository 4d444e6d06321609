#include "lmtk/suffix_array.hpp"

#include <algorithm>
#include <cstring>
#include <numeric>

namespace lmtk {

std::vector<int32_t> build_suffix_array(std::string_view text) {
    const int32_t n = static_cast<int32_t>(text.size());
    std::vector<int32_t> sa(n), rnk(n), tmp(n);
    if (n == 0) return sa;

    std::vector<int32_t> cnt(std::max<int32_t>(256, n) + 1, 0);
    for (int32_t i = 0; i < n; ++i) rnk[i] = static_cast<unsigned char>(text[i]);
    for (int32_t i = 0; i < n; ++i) ++cnt[rnk[i] + 1];
    for (int32_t i = 0; i < 256; ++i) cnt[i + 1] += cnt[i];
    for (int32_t i = 0; i < n; ++i) sa[cnt[rnk[i]]++] = i;

    // Compress initial classes.
    tmp[sa[0]] = 0;
    for (int32_t j = 1; j < n; ++j)
        tmp[sa[j]] = tmp[sa[j - 1]] + (rnk[sa[j]] != rnk[sa[j - 1]] ? 1 : 0);
    rnk.swap(tmp);
    int32_t classes = rnk[sa[n - 1]] + 1;

    std::vector<int32_t> order2(n);
    for (int32_t k = 1; classes < n && k < n; k <<= 1) {
        // Sort by second key: suffixes whose second half is empty come first.
        int32_t p = 0;
        for (int32_t i = n - k; i < n; ++i) order2[p++] = i;
        for (int32_t j = 0; j < n; ++j)
            if (sa[j] >= k) order2[p++] = sa[j] - k;
        // Stable counting sort by first key.
        std::fill(cnt.begin(), cnt.begin() + classes + 1, 0);
        for (int32_t i = 0; i < n; ++i) ++cnt[rnk[i] + 1];
        for (int32_t i = 0; i < classes; ++i) cnt[i + 1] += cnt[i];
        for (int32_t j = 0; j < n; ++j) sa[cnt[rnk[order2[j]]]++] = order2[j];
        // Recompute classes.
        auto second = [&](int32_t i) { return i + k < n ? rnk[i + k] : -1; };
        tmp[sa[0]] = 0;
        for (int32_t j = 1; j < n; ++j) {
            bool same = rnk[sa[j]] == rnk[sa[j - 1]] && second(sa[j]) == second(sa[j - 1]);
            tmp[sa[j]] = tmp[sa[j - 1]] + (same ? 0 : 1);
        }
        rnk.swap(tmp);
        classes = rnk[sa[n - 1]] + 1;
    }
    return sa;
}

namespace {

// -1 / 0 / +1 comparison of suffix text[pos..) against pattern, where a
// proper prefix of the pattern compares less.
int suffix_cmp(std::string_view text, size_t pos, std::string_view pattern) {
    size_t avail = text.size() - pos;
    size_t m = std::min(avail, pattern.size());
    int c = std::memcmp(text.data() + pos, pattern.data(), m);
    if (c != 0) return c;
    return avail < pattern.size() ? -1 : 0;
}

} // namespace

std::pair<size_t, size_t> sa_find(std::string_view text, const std::vector<int32_t>& sa,
                                  std::string_view pattern) {
    size_t lo = 0, hi = sa.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (suffix_cmp(text, sa[mid], pattern) < 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    size_t begin = lo;
    hi = sa.size();
    while (lo < hi) {
        size_t mid = (lo + hi) / 2;
        if (suffix_cmp(text, sa[mid], pattern) <= 0)
            lo = mid + 1;
        else
            hi = mid;
    }
    return {begin, lo};
}

} // namespace lmtk
