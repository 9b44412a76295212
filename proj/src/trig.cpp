#include "gbc/trig.hpp"

#include <cmath>

#include "gbc/errors.hpp"

namespace gbc {

namespace {

constexpr double kHalfPi = 1.5707963267948966;

// term value with the phase of axis a (and b) advanced by quarter turns;
// each advance corresponds to one derivative, modulo the freq factor
double term_value(const TrigTerm& t, const std::vector<double>& x, int a, int sa, int b,
                  int sb) {
    double v = t.amp;
    for (std::size_t c = 0; c < x.size(); ++c) {
        double ph = t.phase[c];
        if (static_cast<int>(c) == a) ph += sa * kHalfPi;
        if (static_cast<int>(c) == b) ph += sb * kHalfPi;
        v *= std::sin(t.freq[c] * x[c] + ph);
    }
    return v;
}

} // namespace

TrigScalar::TrigScalar(int dim, std::vector<TrigTerm> terms) : dim_(dim), terms_(std::move(terms)) {
    for (const TrigTerm& t : terms_)
        if (static_cast<int>(t.freq.size()) != dim || static_cast<int>(t.phase.size()) != dim)
            throw DimensionError("TrigScalar: term arity mismatch");
}

TrigScalar TrigScalar::random(int dim, int n_terms, double amplitude, int max_freq,
                              std::mt19937_64& rng) {
    std::uniform_int_distribution<int> fdist(0, max_freq);
    std::uniform_real_distribution<double> pdist(0.0, 2.0 * kHalfPi * 2.0);
    std::uniform_real_distribution<double> adist(0.3, 1.0);
    std::vector<TrigTerm> terms;
    for (int t = 0; t < n_terms; ++t) {
        TrigTerm term;
        term.amp = (rng() & 1u ? 1.0 : -1.0) * adist(rng) * amplitude / n_terms;
        term.freq.resize(dim);
        term.phase.resize(dim);
        bool nonzero = false;
        while (!nonzero) {
            for (int a = 0; a < dim; ++a) {
                term.freq[a] = fdist(rng);
                nonzero = nonzero || term.freq[a] != 0.0;
            }
        }
        for (int a = 0; a < dim; ++a)
            term.phase[a] = term.freq[a] == 0.0 ? kHalfPi : pdist(rng);
        terms.push_back(std::move(term));
    }
    return TrigScalar(dim, std::move(terms));
}

double TrigScalar::value(const std::vector<double>& x) const {
    double s = 0.0;
    for (const TrigTerm& t : terms_) s += term_value(t, x, -1, 0, -1, 0);
    return s;
}

double TrigScalar::d1(const std::vector<double>& x, int a) const {
    double s = 0.0;
    for (const TrigTerm& t : terms_) s += t.freq[a] * term_value(t, x, a, 1, -1, 0);
    return s;
}

double TrigScalar::d2(const std::vector<double>& x, int a, int b) const {
    double s = 0.0;
    for (const TrigTerm& t : terms_) {
        double f = t.freq[a] * t.freq[b];
        if (f == 0.0) continue;
        s += a == b ? f * term_value(t, x, a, 2, -1, 0) : f * term_value(t, x, a, 1, b, 1);
    }
    return s;
}

} // namespace gbc
