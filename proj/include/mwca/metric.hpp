#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "mwca/tensor.hpp"

namespace mwca {

/// Diagonal SPD inner-product weights, one positive vector per mode. The
/// weights are the diagonal of M_mu; the induced metric matrix is
/// N_mu = M_mu^2. For correspondence analysis the weights are the isometry
/// diagonal D_mu^{-1} = 1/sqrt(marginal).
template <typename Scalar>
class ModeMetric {
  public:
    explicit ModeMetric(std::vector<Vector<Scalar>> weights)
        : weights_(std::move(weights)) {
        for (std::size_t mu = 0; mu < weights_.size(); ++mu)
            for (Index i = 0; i < weights_[mu].size(); ++i)
                if (!(weights_[mu][i] > Scalar(0)))
                    throw std::invalid_argument(
                        "metric weight at mode " + std::to_string(mu + 1) +
                        ", index " + std::to_string(i + 1) +
                        " is not positive");
    }

    static ModeMetric identity(const Shape& shape) {
        std::vector<Vector<Scalar>> w;
        w.reserve(shape.size());
        for (Index n : shape) w.push_back(Vector<Scalar>::Ones(n));
        return ModeMetric(std::move(w));
    }

    Index order() const { return static_cast<Index>(weights_.size()); }

    const Vector<Scalar>& weights(Index mode) const {
        if (mode < 1 || mode > order())
            throw std::invalid_argument("mode " + std::to_string(mode) +
                                        " out of range [1," +
                                        std::to_string(order()) + "]");
        return weights_[static_cast<std::size_t>(mode - 1)];
    }

    ModeMetric inverse() const {
        std::vector<Vector<Scalar>> inv;
        inv.reserve(weights_.size());
        for (const auto& w : weights_) inv.push_back(w.cwiseInverse());
        return ModeMetric(std::move(inv));
    }

  private:
    std::vector<Vector<Scalar>> weights_;
};

/// Per-mode slice sums of a tensor; for a frequency tensor each vector f^mu
/// sums to 1 and is the mode's marginal distribution.
template <typename Scalar>
class Marginals {
  public:
    explicit Marginals(std::vector<Vector<Scalar>> sums)
        : sums_(std::move(sums)) {}

    Index order() const { return static_cast<Index>(sums_.size()); }

    const Vector<Scalar>& mode(Index mu) const {
        if (mu < 1 || mu > order())
            throw std::invalid_argument("mode " + std::to_string(mu) +
                                        " out of range [1," +
                                        std::to_string(order()) + "]");
        return sums_[static_cast<std::size_t>(mu - 1)];
    }

    Scalar total() const { return sums_.empty() ? Scalar(0) : sums_[0].sum(); }

  private:
    std::vector<Vector<Scalar>> sums_;
};

namespace detail {

// In-place scaling of every element by factors[i_mode - 1].
template <typename Scalar>
void scale_mode(Tensor<Scalar>& t, Index mode, const Vector<Scalar>& factors) {
    Index left, right;
    mode_split(t.shape(), mode, left, right);
    const Index n = t.dim(mode);
    auto& flat = t.flat();
    for (Index r = 0; r < right; ++r)
        for (Index k = 0; k < n; ++k) {
            const Scalar f = factors[k];
            const Index base = left * (k + n * r);
            for (Index l = 0; l < left; ++l) flat[base + l] *= f;
        }
}

}  // namespace detail

/// Divide a nonnegative count tensor by its total so the entries sum to 1.
template <typename Scalar>
Tensor<Scalar> relative_frequencies(const Tensor<Scalar>& counts) {
    Scalar total = 0;
    for (Index i = 0; i < counts.size(); ++i) {
        if (counts.flat()[i] < Scalar(0))
            throw std::invalid_argument(
                "contingency data must be nonnegative");
        total += counts.flat()[i];
    }
    if (!(total > Scalar(0)))
        throw std::invalid_argument(
            "contingency data has no positive entry");
    Tensor<Scalar> f = counts;
    f.flat() /= total;
    return f;
}

template <typename Scalar>
Marginals<Scalar> marginals(const Tensor<Scalar>& f) {
    std::vector<Vector<Scalar>> sums;
    sums.reserve(static_cast<std::size_t>(f.order()));
    for (Index mu = 1; mu <= f.order(); ++mu)
        sums.push_back(unfold(f, mu).rowwise().sum());
    return Marginals<Scalar>(std::move(sums));
}

/// Correspondence-analysis metric: weights 1/sqrt(f^mu_i), i.e. the
/// diagonal of D_mu^{-1} with D_mu = diag(sqrt(f^mu)). Every marginal entry
/// must be strictly positive; drop empty slices first if needed.
template <typename Scalar>
ModeMetric<Scalar> ca_metric(const Marginals<Scalar>& m) {
    std::vector<Vector<Scalar>> w;
    w.reserve(static_cast<std::size_t>(m.order()));
    for (Index mu = 1; mu <= m.order(); ++mu) {
        const Vector<Scalar>& f = m.mode(mu);
        Vector<Scalar> wm(f.size());
        for (Index i = 0; i < f.size(); ++i) {
            if (!(f[i] > Scalar(0)))
                throw std::invalid_argument(
                    "zero marginal at mode " + std::to_string(mu) +
                    ", index " + std::to_string(i + 1) +
                    "; drop the empty slice or fix the data");
            wm[i] = Scalar(1) / std::sqrt(f[i]);
        }
        w.push_back(std::move(wm));
    }
    return ModeMetric<Scalar>(std::move(w));
}

/// nu(F) = (M_1,...,M_d) F for diagonal M_mu: every element is scaled by
/// the product of its per-mode weights. Maps the weighted space
/// isometrically onto the standard one.
template <typename Scalar>
Tensor<Scalar> isometry_apply(const Tensor<Scalar>& f,
                              const ModeMetric<Scalar>& m) {
    if (m.order() != f.order())
        throw std::invalid_argument("metric order does not match tensor");
    Tensor<Scalar> x = f;
    for (Index mu = 1; mu <= f.order(); ++mu) {
        if (m.weights(mu).size() != f.dim(mu))
            throw std::invalid_argument(
                "metric weight length mismatch at mode " + std::to_string(mu));
        detail::scale_mode(x, mu, m.weights(mu));
    }
    return x;
}

template <typename Scalar>
Tensor<Scalar> isometry_inverse(const Tensor<Scalar>& x,
                                const ModeMetric<Scalar>& m) {
    return isometry_apply(x, m.inverse());
}

/// ||F||_M, computed as the standard norm of nu(F) so the isometry and the
/// weighted norm share one formula.
template <typename Scalar>
Scalar weighted_norm(const Tensor<Scalar>& f, const ModeMetric<Scalar>& m) {
    return isometry_apply(f, m).norm();
}

}  // namespace mwca
