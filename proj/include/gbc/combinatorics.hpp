#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace gbc {

// Hard cap on the fiber dimension; dense multi-index tables below are
// sized for it.
inline constexpr int kMaxDim = 8;

int binom(int n, int k);

// Increasing multi-indices of a fixed degree over {1..n}, stored as
// bitmasks (bit i set <=> basis index i+1 is present), listed in
// lexicographic order of the index tuples.
struct IndexTable {
    int n = 0;
    int degree = 0;
    std::vector<std::uint32_t> masks;
    // mask -> position in `masks`, -1 for masks of the wrong shape
    std::array<std::int16_t, 1 << kMaxDim> rank{};
};

const IndexTable& index_table(int n, int degree);

// One way of splitting `mask` into (sub, mask\sub) together with the
// sign of the shuffle that sorts the concatenation (sub, mask\sub)
// back into increasing order.
struct SubsetSplit {
    std::uint32_t sub;
    std::int8_t sign;
};

// All subsets of `mask` with `sub_size` elements, with shuffle signs.
const std::vector<SubsetSplit>& subset_splits(std::uint32_t mask, int sub_size);

// Sign of the permutation sorting (sub, full\sub) into full; sub must be
// a subset of full.
int shuffle_sign(std::uint32_t sub, std::uint32_t full);

// Sign of e_pos ^ e_mask relative to e_{mask | 1<<pos}; pos must not be
// in mask. Equals (-1)^(number of elements of mask below pos).
int insert_sign(int pos, std::uint32_t mask);

// 1-based indices of the set bits, ascending.
std::vector<int> mask_to_indices(std::uint32_t mask);

} // namespace gbc
