#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "mwca/metric.hpp"
#include "mwca/tensor.hpp"

// Seeded synthetic inputs for self-tests. Draws are derived from raw
// mt19937_64 output instead of std::uniform_real_distribution, so the same
// seed produces the same data on every standard library.

namespace mwca::synthetic {

inline double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Standard normal via Box-Muller on raw uniform draws.
inline double normal(std::mt19937_64& rng) {
    const double u1 = (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
    const double u2 = uniform01(rng);
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
}

inline Index uniform_int(std::mt19937_64& rng, Index lo, Index hi) {
    return lo + static_cast<Index>(uniform01(rng) *
                                   static_cast<double>(hi - lo + 1));
}

inline Tensor<double> gaussian_tensor(std::mt19937_64& rng,
                                      const Shape& shape) {
    Tensor<double> t(shape);
    for (Index i = 0; i < t.size(); ++i) t.flat()[i] = normal(rng);
    return t;
}

/// Strictly positive entries, normalized to total mass 1; marginals are
/// strictly positive by construction.
inline Tensor<double> positive_frequencies(std::mt19937_64& rng,
                                           const Shape& shape) {
    Tensor<double> t(shape);
    for (Index i = 0; i < t.size(); ++i) t.flat()[i] = 0.1 + uniform01(rng);
    t.flat() /= t.flat().sum();
    return t;
}

/// Diagonal weights in [0.5, 1.5).
inline ModeMetric<double> positive_metric(std::mt19937_64& rng,
                                          const Shape& shape) {
    std::vector<Vector<double>> w;
    w.reserve(shape.size());
    for (Index n : shape) {
        Vector<double> wm(n);
        for (Index i = 0; i < n; ++i) wm[i] = 0.5 + uniform01(rng);
        w.push_back(std::move(wm));
    }
    return ModeMetric<double>(std::move(w));
}

/// Integer counts in [0, max_count] with at least one positive entry.
inline Tensor<double> counts(std::mt19937_64& rng, const Shape& shape,
                             Index max_count = 50) {
    Tensor<double> t(shape);
    double total = 0;
    for (Index i = 0; i < t.size(); ++i) {
        t.flat()[i] = static_cast<double>(uniform_int(rng, 0, max_count));
        total += t.flat()[i];
    }
    if (total == 0) t.flat()[0] = 1;
    return t;
}

inline Shape shape(std::mt19937_64& rng, Index order, Index min_dim,
                   Index max_dim) {
    Shape s(static_cast<std::size_t>(order));
    for (auto& n : s) n = uniform_int(rng, min_dim, max_dim);
    return s;
}

}  // namespace mwca::synthetic
