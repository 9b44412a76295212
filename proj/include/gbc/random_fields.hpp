#pragma once

#include <cstdint>
#include <random>
#include <string_view>

#include "gbc/double_form.hpp"

namespace gbc {

// Named substream discipline: every random object in a run is drawn from
// substream(seed, name) so that a single manifest seed reproduces the
// whole run and streams stay independent of evaluation order.
std::mt19937_64 substream(std::uint64_t seed, std::string_view name);

DoubleForm random_double_form(int n, int p, int q, std::mt19937_64& rng);

// Symmetric coefficients, generically violating the first Bianchi
// identity when p >= 2.
DoubleForm random_symmetric_form(int n, int p, std::mt19937_64& rng);

// Sum of products of symmetric (1,1) forms; satisfies the first Bianchi
// identity by construction.
CurvatureStructure random_bianchi_structure(int n, std::mt19937_64& rng, int terms = 3);

} // namespace gbc
