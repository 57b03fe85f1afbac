#pragma once

#include <random>
#include <span>

#include "mwca/synthetic.hpp"
#include "mwca/tensor.hpp"

namespace testsupport {

using mwca::Index;
using mwca::Shape;

// Rank-1 tensor a_1 (x) ... (x) a_d, built elementwise.
inline mwca::Tensord outer(const std::vector<mwca::Vectord>& vecs) {
    Shape shape;
    for (const auto& v : vecs) shape.push_back(v.size());
    mwca::Tensord t(shape);
    mwca::detail::for_each_index(shape, [&](std::span<const Index> idx) {
        double p = 1.0;
        for (std::size_t a = 0; a < vecs.size(); ++a) p *= vecs[a][idx[a] - 1];
        t.at(idx) = p;
    });
    return t;
}

inline mwca::Matrixd gaussian_matrix(std::mt19937_64& rng, Index rows,
                                     Index cols) {
    mwca::Matrixd m(rows, cols);
    for (Index j = 0; j < cols; ++j)
        for (Index i = 0; i < rows; ++i)
            m(i, j) = mwca::synthetic::normal(rng);
    return m;
}

}  // namespace testsupport
