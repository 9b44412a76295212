#include "gbc/random_fields.hpp"

namespace gbc {

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 14695981039346656037ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

std::mt19937_64 substream(std::uint64_t seed, std::string_view name) {
    std::uint64_t tag = fnv1a(name);
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(tag), static_cast<std::uint32_t>(tag >> 32)};
    return std::mt19937_64(seq);
}

DoubleForm random_double_form(int n, int p, int q, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DoubleForm out(n, p, q);
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j < out.cols(); ++j) out.at(i, j) = u(rng);
    return out;
}

DoubleForm random_symmetric_form(int n, int p, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DoubleForm out(n, p, p);
    for (int i = 0; i < out.rows(); ++i)
        for (int j = 0; j <= i; ++j) {
            double v = u(rng);
            out.at(i, j) = v;
            out.at(j, i) = v;
        }
    return out;
}

CurvatureStructure random_bianchi_structure(int n, std::mt19937_64& rng, int terms) {
    DoubleForm sum(n, 2, 2);
    for (int t = 0; t < terms; ++t) {
        DoubleForm a = random_symmetric_form(n, 1, rng);
        DoubleForm b = random_symmetric_form(n, 1, rng);
        sum += wedge(a, b);
    }
    CurvatureStructure cs{sum.symmetrized(), BianchiFlag::verified};
    return cs;
}

} // namespace gbc
