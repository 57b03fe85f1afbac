#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwca/tensor.hpp"

namespace mwca {

/// Singular values at or below rank_tolerance * sigma_max count as zero;
/// they mark the numerical rank boundary. Requesting ranks past it is an
/// error because the scaled core needs every retained sigma invertible.
inline constexpr double rank_tolerance = 1e-12;

template <typename Scalar>
struct SvdResult {
    Matrix<Scalar> u;      // orthonormal columns, m x r
    Vector<Scalar> sigma;  // nonincreasing, >= 0, length r
    Matrix<Scalar> v;      // orthonormal columns, n x r
};

/// Per-column orientation statistic sum_j sgn(u_jk) u_jk^2; the column is
/// flipped when the statistic is negative, so the majority of the mass
/// points along the positive direction. A zero statistic keeps the sign.
template <typename Scalar>
Vector<Scalar> orientation_signs(const Matrix<Scalar>& u) {
    Vector<Scalar> signs(u.cols());
    for (Index k = 0; k < u.cols(); ++k) {
        Scalar stat = 0;
        for (Index j = 0; j < u.rows(); ++j) {
            const Scalar x = u(j, k);
            stat += (x < Scalar(0) ? -x * x : x * x);
        }
        signs[k] = stat < Scalar(0) ? Scalar(-1) : Scalar(1);
    }
    return signs;
}

/// Fix column signs of u by the majority rule, applying the same flips to
/// the companion's matching columns. Idempotent and deterministic.
template <typename Scalar>
std::pair<Matrix<Scalar>, Matrix<Scalar>> sign_fix(
    const Matrix<Scalar>& u, const Matrix<Scalar>& companion) {
    if (u.cols() != companion.cols())
        throw std::invalid_argument(
            "sign_fix: column count mismatch (" + std::to_string(u.cols()) +
            " vs " + std::to_string(companion.cols()) + ")");
    const Vector<Scalar> signs = orientation_signs(u);
    return {u * signs.asDiagonal(), companion * signs.asDiagonal()};
}

/// Thin SVD (Eigen BDCSVD), truncated to `rank` columns when given,
/// sign-fixed so the output is deterministic.
template <typename Scalar>
SvdResult<Scalar> svd(const Matrix<Scalar>& m,
                      std::optional<Index> rank = std::nullopt) {
    const Index full = std::min(m.rows(), m.cols());
    if (rank && (*rank < 1 || *rank > full))
        throw std::invalid_argument("svd: rank " + std::to_string(*rank) +
                                    " out of range [1," +
                                    std::to_string(full) + "]");
    Eigen::BDCSVD<Matrix<Scalar>> dec(m,
                                      Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Index r = rank.value_or(full);
    SvdResult<Scalar> out;
    out.sigma = dec.singularValues().head(r);
    auto [u, v] = sign_fix<Scalar>(dec.matrixU().leftCols(r),
                                   dec.matrixV().leftCols(r));
    out.u = std::move(u);
    out.v = std::move(v);
    return out;
}

/// Count of singular values above the rank boundary.
template <typename Scalar>
Index numerical_rank(const Vector<Scalar>& sigma) {
    if (sigma.size() == 0) return 0;
    const Scalar cut = static_cast<Scalar>(rank_tolerance) * sigma[0];
    Index r = 0;
    while (r < sigma.size() && sigma[r] > cut) ++r;
    return r;
}

template <typename Scalar>
struct TuckerDecomposition {
    std::vector<Matrix<Scalar>> factors;     // U_mu, n_mu x r_mu, orthonormal
    Tensor<Scalar> core;                     // shape (r_1,...,r_d)
    std::vector<Vector<Scalar>> mode_sigma;  // per-mode singular values
    Shape ranks;                             // multilinear rank
    std::vector<Scalar> fit_history;         // filled by hooi only

    Index order() const { return static_cast<Index>(factors.size()); }
};

template <typename Scalar>
Tensor<Scalar> reconstruct(const TuckerDecomposition<Scalar>& dec) {
    return ttm(dec.core, dec.factors);
}

namespace detail {

template <typename Scalar>
Index resolve_mode_rank(const Vector<Scalar>& sigma,
                        const std::optional<Shape>& ranks, Index mode) {
    const Index nrank = numerical_rank(sigma);
    if (!ranks) {
        if (nrank == 0)
            throw std::invalid_argument(
                "mode " + std::to_string(mode) +
                " unfolding has numerical rank 0 (zero tensor?)");
        return nrank;
    }
    const Index want = (*ranks)[static_cast<std::size_t>(mode - 1)];
    if (want < 1)
        throw std::invalid_argument("requested rank at mode " +
                                    std::to_string(mode) + " must be >= 1");
    if (want > nrank)
        throw std::invalid_argument(
            "requested rank " + std::to_string(want) + " at mode " +
            std::to_string(mode) + " exceeds the numerical rank " +
            std::to_string(nrank) + " of that unfolding");
    return want;
}

template <typename Scalar>
void check_rank_request(const Tensor<Scalar>& t,
                        const std::optional<Shape>& ranks) {
    if (ranks && static_cast<Index>(ranks->size()) != t.order())
        throw std::invalid_argument("rank tuple has " +
                                    std::to_string(ranks->size()) +
                                    " entries, tensor order is " +
                                    std::to_string(t.order()));
}

}  // namespace detail

/// Tucker basis from the leading left singular vectors of every unfolding;
/// the core is the input contracted with the transposed factors. An empty
/// rank request means full (numerical) multilinear rank.
template <typename Scalar>
TuckerDecomposition<Scalar> hosvd(const Tensor<Scalar>& t,
                                  std::optional<Shape> ranks = std::nullopt) {
    detail::check_rank_request(t, ranks);
    const Index d = t.order();
    TuckerDecomposition<Scalar> dec;
    dec.factors.resize(static_cast<std::size_t>(d));
    dec.mode_sigma.resize(static_cast<std::size_t>(d));
    dec.ranks.resize(static_cast<std::size_t>(d));

    std::vector<std::optional<Matrix<Scalar>>> transposed(
        static_cast<std::size_t>(d));
    for (Index mu = 1; mu <= d; ++mu) {
        const SvdResult<Scalar> s = svd(unfold(t, mu));
        const Index r = detail::resolve_mode_rank(s.sigma, ranks, mu);
        auto& u = dec.factors[static_cast<std::size_t>(mu - 1)];
        u = s.u.leftCols(r);
        dec.mode_sigma[static_cast<std::size_t>(mu - 1)] = s.sigma.head(r);
        dec.ranks[static_cast<std::size_t>(mu - 1)] = r;
        transposed[static_cast<std::size_t>(mu - 1)] = u.transpose();
    }
    dec.core = ttm(t, transposed);
    return dec;
}

/// Sequentially truncated variant: each mode's basis comes from the current
/// working tensor, which is contracted with U_mu^T before moving on.
template <typename Scalar>
TuckerDecomposition<Scalar> st_hosvd(const Tensor<Scalar>& t,
                                     std::optional<Shape> ranks = std::nullopt) {
    detail::check_rank_request(t, ranks);
    const Index d = t.order();
    TuckerDecomposition<Scalar> dec;
    dec.factors.resize(static_cast<std::size_t>(d));
    dec.mode_sigma.resize(static_cast<std::size_t>(d));
    dec.ranks.resize(static_cast<std::size_t>(d));

    Tensor<Scalar> work = t;
    for (Index mu = 1; mu <= d; ++mu) {
        const SvdResult<Scalar> s = svd(unfold(work, mu));
        const Index r = detail::resolve_mode_rank(s.sigma, ranks, mu);
        auto& u = dec.factors[static_cast<std::size_t>(mu - 1)];
        u = s.u.leftCols(r);
        dec.mode_sigma[static_cast<std::size_t>(mu - 1)] = s.sigma.head(r);
        dec.ranks[static_cast<std::size_t>(mu - 1)] = r;
        work = ttm(work, mu, Matrix<Scalar>(u.transpose()));
    }
    dec.core = std::move(work);
    return dec;
}

/// Alternating refinement of the truncated-HOSVD basis. Each sweep
/// maximizes the core norm one mode at a time; the fit sequence
/// ||core|| is nondecreasing. Stops when the relative fit change drops
/// below `tol` or after `max_iters` sweeps.
///
/// The per-mode singular values are recomputed from the unfoldings of the
/// final reconstruction; unlike the HOSVD ones they are not the singular
/// values of the input's unfoldings, so identity checks based on them are
/// experimental (see the verifier documentation).
template <typename Scalar>
TuckerDecomposition<Scalar> hooi(const Tensor<Scalar>& t,
                                 std::optional<Shape> ranks = std::nullopt,
                                 int max_iters = 50, Scalar tol = Scalar(1e-10)) {
    TuckerDecomposition<Scalar> dec = hosvd(t, std::move(ranks));
    const Index d = t.order();

    Scalar prev_fit = dec.core.norm();
    dec.fit_history.push_back(prev_fit);
    for (int iter = 0; iter < max_iters; ++iter) {
        for (Index mu = 1; mu <= d; ++mu) {
            // Contract every mode but mu, then take the leading subspace.
            std::vector<std::optional<Matrix<Scalar>>> others(
                static_cast<std::size_t>(d));
            for (Index eta = 1; eta <= d; ++eta)
                if (eta != mu)
                    others[static_cast<std::size_t>(eta - 1)] =
                        dec.factors[static_cast<std::size_t>(eta - 1)]
                            .transpose();
            const Tensor<Scalar> g = ttm(t, others);
            Eigen::BDCSVD<Matrix<Scalar>> s(unfold(g, mu), Eigen::ComputeThinU);
            dec.factors[static_cast<std::size_t>(mu - 1)] =
                s.matrixU().leftCols(
                    dec.ranks[static_cast<std::size_t>(mu - 1)]);
        }
        std::vector<std::optional<Matrix<Scalar>>> transposed(
            static_cast<std::size_t>(d));
        for (Index mu = 1; mu <= d; ++mu)
            transposed[static_cast<std::size_t>(mu - 1)] =
                dec.factors[static_cast<std::size_t>(mu - 1)].transpose();
        dec.core = ttm(t, transposed);
        const Scalar fit = dec.core.norm();
        dec.fit_history.push_back(fit);
        const Scalar denom = std::max(fit, std::numeric_limits<Scalar>::min());
        if (std::abs(fit - prev_fit) / denom < tol) break;
        prev_fit = fit;
    }

    for (Index mu = 1; mu <= d; ++mu) {
        auto& u = dec.factors[static_cast<std::size_t>(mu - 1)];
        u = u * orientation_signs(u).asDiagonal();
    }
    std::vector<std::optional<Matrix<Scalar>>> transposed(
        static_cast<std::size_t>(d));
    for (Index mu = 1; mu <= d; ++mu)
        transposed[static_cast<std::size_t>(mu - 1)] =
            dec.factors[static_cast<std::size_t>(mu - 1)].transpose();
    dec.core = ttm(t, transposed);

    const Tensor<Scalar> rec = reconstruct(dec);
    for (Index mu = 1; mu <= d; ++mu) {
        Eigen::BDCSVD<Matrix<Scalar>> s(unfold(rec, mu));
        dec.mode_sigma[static_cast<std::size_t>(mu - 1)] =
            s.singularValues().head(
                dec.ranks[static_cast<std::size_t>(mu - 1)]);
    }
    return dec;
}

}  // namespace mwca
