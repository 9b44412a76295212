#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gbc {

// One product term amp * prod_a sin(freq_a x_a + phase_a). Derivatives
// only shift phases by pi/2 and multiply by freq, so all orders are exact.
struct TrigTerm {
    double amp = 0.0;
    std::vector<double> freq;
    std::vector<double> phase;
};

// Trigonometric polynomial scalar field with exact derivatives. Integer
// frequencies make it periodic on [0,2pi]^dim; random() draws terms with
// at least one nonzero frequency each, so the field has zero mean over
// the period box.
class TrigScalar {
public:
    TrigScalar() = default;
    TrigScalar(int dim, std::vector<TrigTerm> terms);

    static TrigScalar random(int dim, int n_terms, double amplitude, int max_freq,
                             std::mt19937_64& rng);

    int dim() const { return dim_; }
    bool empty() const { return terms_.empty(); }

    double value(const std::vector<double>& x) const;
    double d1(const std::vector<double>& x, int a) const;
    double d2(const std::vector<double>& x, int a, int b) const;

private:
    int dim_ = 0;
    std::vector<TrigTerm> terms_;
};

} // namespace gbc
