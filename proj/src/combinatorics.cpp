#include "gbc/combinatorics.hpp"

#include <algorithm>
#include <bit>
#include <mutex>

#include "gbc/errors.hpp"

namespace gbc {

int binom(int n, int k) {
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return static_cast<int>(r);
}

int shuffle_sign(std::uint32_t sub, std::uint32_t full) {
    std::uint32_t rest = full & ~sub;
    int inversions = 0;
    for (std::uint32_t s = sub; s; s &= s - 1) {
        int bit = std::countr_zero(s);
        inversions += std::popcount(rest & ((1u << bit) - 1));
    }
    return (inversions & 1) ? -1 : 1;
}

int insert_sign(int pos, std::uint32_t mask) {
    int below = std::popcount(mask & ((1u << pos) - 1));
    return (below & 1) ? -1 : 1;
}

std::vector<int> mask_to_indices(std::uint32_t mask) {
    std::vector<int> out;
    for (std::uint32_t s = mask; s; s &= s - 1) out.push_back(std::countr_zero(s) + 1);
    return out;
}

namespace {

IndexTable build_table(int n, int degree) {
    IndexTable t;
    t.n = n;
    t.degree = degree;
    t.rank.fill(-1);
    for (std::uint32_t m = 0; m < (1u << n); ++m)
        if (std::popcount(m) == degree) t.masks.push_back(m);
    // ascending masks are in colex order; re-sort by the index tuples
    std::sort(t.masks.begin(), t.masks.end(), [](std::uint32_t a, std::uint32_t b) {
        std::uint32_t x = a, y = b;
        while (x && y) {
            int i = std::countr_zero(x), j = std::countr_zero(y);
            if (i != j) return i < j;
            x &= x - 1;
            y &= y - 1;
        }
        return false;
    });
    for (std::size_t i = 0; i < t.masks.size(); ++i)
        t.rank[t.masks[i]] = static_cast<std::int16_t>(i);
    return t;
}

} // namespace

const IndexTable& index_table(int n, int degree) {
    if (n < 0 || n > kMaxDim || degree < 0 || degree > n)
        throw DimensionError("index_table: bad (n, degree)");
    static std::array<std::array<IndexTable, kMaxDim + 1>, kMaxDim + 1> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (int nn = 0; nn <= kMaxDim; ++nn)
            for (int d = 0; d <= nn; ++d) cache[nn][d] = build_table(nn, d);
    });
    return cache[n][degree];
}

const std::vector<SubsetSplit>& subset_splits(std::uint32_t mask, int sub_size) {
    static std::array<std::array<std::vector<SubsetSplit>, kMaxDim + 1>, 1 << kMaxDim> cache;
    static std::once_flag once;
    std::call_once(once, [] {
        for (std::uint32_t m = 0; m < (1u << kMaxDim); ++m) {
            // enumerate all subsets of m
            std::uint32_t sub = m;
            while (true) {
                cache[m][std::popcount(sub)].push_back(
                    {sub, static_cast<std::int8_t>(shuffle_sign(sub, m))});
                if (sub == 0) break;
                sub = (sub - 1) & m;
            }
        }
    });
    if (sub_size < 0 || sub_size > kMaxDim) throw DimensionError("subset_splits: bad size");
    return cache[mask][sub_size];
}

} // namespace gbc
