#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mwca/decompose.hpp"
#include "mwca/metric.hpp"
#include "mwca/tensor.hpp"

namespace mwca {

inline constexpr double default_verify_tolerance = 1e-9;
inline constexpr double barycentric_weight_tolerance = 1e-12;

enum class DecompositionMethod { hosvd, st_hosvd, hooi };

inline const char* to_string(DecompositionMethod m) {
    switch (m) {
        case DecompositionMethod::hosvd: return "hosvd";
        case DecompositionMethod::st_hosvd: return "st_hosvd";
        case DecompositionMethod::hooi: return "hooi";
    }
    return "unknown";
}

inline std::optional<DecompositionMethod> parse_method(const std::string& s) {
    if (s == "hosvd") return DecompositionMethod::hosvd;
    if (s == "st_hosvd") return DecompositionMethod::st_hosvd;
    if (s == "hooi") return DecompositionMethod::hooi;
    return std::nullopt;
}

template <typename Scalar>
TuckerDecomposition<Scalar> decompose(const Tensor<Scalar>& x,
                                      std::optional<Shape> ranks,
                                      DecompositionMethod method) {
    switch (method) {
        case DecompositionMethod::hosvd: return hosvd(x, std::move(ranks));
        case DecompositionMethod::st_hosvd:
            return st_hosvd(x, std::move(ranks));
        case DecompositionMethod::hooi: return hooi(x, std::move(ranks));
    }
    throw std::invalid_argument("unknown decomposition method");
}

/// Core scaled by the singular-value inverses: B with
/// B_{i1..id} = C_{i1..id} / (sigma^1_{i1} * ... * sigma^d_{id}).
template <typename Scalar>
Tensor<Scalar> scaled_core(const TuckerDecomposition<Scalar>& dec) {
    Tensor<Scalar> b = dec.core;
    for (Index mu = 1; mu <= dec.order(); ++mu) {
        const Vector<Scalar>& s =
            dec.mode_sigma[static_cast<std::size_t>(mu - 1)];
        for (Index i = 0; i < s.size(); ++i)
            if (!(s[i] > Scalar(0)))
                throw std::invalid_argument(
                    "singular value " + std::to_string(i + 1) + " at mode " +
                    std::to_string(mu) + " is not positive; the scaled core "
                    "needs invertible sigma");
        detail::scale_mode(b, mu, Vector<Scalar>(s.cwiseInverse()));
    }
    return b;
}

/// Per-mode coordinate systems of a weighted-space tensor F under diagonal
/// metric weights M: the decomposition of X = nu(F), the standard-space
/// components Y = U Sigma, the weighted-space components W = M^{-1} Y, the
/// scaled components Z = M^2 W, and the scaled core B. For the CA metric
/// (weights 1/sqrt(marginal)) W = D Y and Z = D^{-1} Y.
template <typename Scalar>
struct MwcaResult {
    TuckerDecomposition<Scalar> decomposition;
    std::vector<Matrix<Scalar>> y;
    std::vector<Matrix<Scalar>> w;
    std::vector<Matrix<Scalar>> z;
    Tensor<Scalar> b;
    ModeMetric<Scalar> metric;
    Marginals<Scalar> marginals;
    std::vector<Vector<Scalar>> inertia;  // squared singular values
    Tensor<Scalar> frequencies;           // the analyzed weighted-space tensor

    Index order() const { return static_cast<Index>(y.size()); }
};

/// Decompose X = nu(F) and derive all coordinate systems. This is the
/// metric-generic engine; run_mwca wires it to the CA metric.
template <typename Scalar>
MwcaResult<Scalar> weighted_decomposition(
    const Tensor<Scalar>& f, ModeMetric<Scalar> metric,
    std::optional<Shape> ranks = std::nullopt,
    DecompositionMethod method = DecompositionMethod::hosvd) {
    const Tensor<Scalar> x = isometry_apply(f, metric);
    TuckerDecomposition<Scalar> dec = decompose(x, std::move(ranks), method);

    const Index d = f.order();
    std::vector<Matrix<Scalar>> y, w, z;
    std::vector<Vector<Scalar>> inertia;
    y.reserve(d);
    w.reserve(d);
    z.reserve(d);
    inertia.reserve(d);
    for (Index mu = 1; mu <= d; ++mu) {
        const auto& u = dec.factors[static_cast<std::size_t>(mu - 1)];
        const auto& s = dec.mode_sigma[static_cast<std::size_t>(mu - 1)];
        const Vector<Scalar>& mw = metric.weights(mu);
        y.push_back(u * s.asDiagonal());
        w.push_back(mw.cwiseInverse().asDiagonal() * y.back());
        z.push_back(mw.cwiseAbs2().asDiagonal() * w.back());
        inertia.push_back(s.cwiseAbs2());
    }

    Tensor<Scalar> b = scaled_core(dec);
    Marginals<Scalar> marg = marginals(f);
    return MwcaResult<Scalar>{std::move(dec),   std::move(y),
                              std::move(w),     std::move(z),
                              std::move(b),     std::move(metric),
                              std::move(marg),  std::move(inertia),
                              f};
}

/// Multiway correspondence analysis of a nonnegative count tensor:
/// frequencies, marginals, CA metric, HOSVD of the isometry image, and the
/// derived Y/W/Z/B. The leading constant component (the trivial CA axis)
/// is retained.
template <typename Scalar>
MwcaResult<Scalar> run_mwca(const Tensor<Scalar>& counts,
                            std::optional<Shape> ranks = std::nullopt,
                            DecompositionMethod method =
                                DecompositionMethod::hosvd) {
    const Tensor<Scalar> f = relative_frequencies(counts);
    ModeMetric<Scalar> metric = ca_metric(marginals(f));
    return weighted_decomposition(f, std::move(metric), std::move(ranks),
                                  method);
}

/// Classical CA coordinates of a two-way table: rows and columns of the
/// doubly weighted matrix, each side sign-fixed by its own majority rule
/// (exactly what the multiway pipeline does at order 2).
template <typename Scalar>
struct CaResult {
    Matrix<Scalar> row_y, col_y;
    Matrix<Scalar> row_w, col_w;
    Matrix<Scalar> row_z, col_z;
    Vector<Scalar> sigma;
    Vector<Scalar> row_masses, col_masses;
};

namespace detail {

template <typename Scalar>
Vector<Scalar> checked_positive_masses(const Vector<Scalar>& m,
                                       const char* side) {
    for (Index i = 0; i < m.size(); ++i)
        if (!(m[i] > Scalar(0)))
            throw std::invalid_argument("zero " + std::string(side) +
                                        " marginal at index " +
                                        std::to_string(i + 1));
    return m;
}

}  // namespace detail

/// The doubly weighted matrix diag(1/sqrt(row sums)) F diag(1/sqrt(col
/// sums)) of a frequency matrix; the matrix-CA counterpart of nu(F).
template <typename Scalar>
Matrix<Scalar> ca_weighted_matrix(const Matrix<Scalar>& freq) {
    const Vector<Scalar> r = detail::checked_positive_masses<Scalar>(
        freq.rowwise().sum(), "row");
    const Vector<Scalar> c = detail::checked_positive_masses<Scalar>(
        freq.colwise().sum().transpose(), "column");
    return r.cwiseSqrt().cwiseInverse().asDiagonal() * freq *
           c.cwiseSqrt().cwiseInverse().asDiagonal();
}

template <typename Scalar>
CaResult<Scalar> run_ca(const Matrix<Scalar>& counts,
                        std::optional<Index> rank = std::nullopt) {
    Scalar total = 0;
    for (Index j = 0; j < counts.cols(); ++j)
        for (Index i = 0; i < counts.rows(); ++i) {
            if (counts(i, j) < Scalar(0))
                throw std::invalid_argument(
                    "contingency data must be nonnegative");
            total += counts(i, j);
        }
    if (!(total > Scalar(0)))
        throw std::invalid_argument("contingency data has no positive entry");

    const Matrix<Scalar> freq = counts / total;
    const Vector<Scalar> rm = freq.rowwise().sum();
    const Vector<Scalar> cm = freq.colwise().sum().transpose();
    const Matrix<Scalar> x = ca_weighted_matrix(freq);

    SvdResult<Scalar> s = svd(x);
    const Index nrank = numerical_rank(s.sigma);
    if (rank && *rank > nrank)
        throw std::invalid_argument("requested rank " + std::to_string(*rank) +
                                    " exceeds the numerical rank " +
                                    std::to_string(nrank) + " of the table");
    const Index r = rank.value_or(nrank);

    CaResult<Scalar> out;
    out.sigma = s.sigma.head(r);
    const Matrix<Scalar> u = s.u.leftCols(r) *
                             orientation_signs<Scalar>(s.u.leftCols(r))
                                 .asDiagonal();
    const Matrix<Scalar> v = s.v.leftCols(r) *
                             orientation_signs<Scalar>(s.v.leftCols(r))
                                 .asDiagonal();
    out.row_y = u * out.sigma.asDiagonal();
    out.col_y = v * out.sigma.asDiagonal();
    out.row_w = rm.cwiseSqrt().asDiagonal() * out.row_y;
    out.col_w = cm.cwiseSqrt().asDiagonal() * out.col_y;
    out.row_z = rm.cwiseSqrt().cwiseInverse().asDiagonal() * out.row_y;
    out.col_z = cm.cwiseSqrt().cwiseInverse().asDiagonal() * out.col_y;
    out.row_masses = rm;
    out.col_masses = cm;
    return out;
}

/// Outcome of one identity check. The relative residual divides the
/// largest elementwise deviation by max(1, ||LHS||_inf) so near-zero rows
/// do not blow it up; pass means relative residual <= tolerance (plus the
/// weight-sum bound for the barycentric check).
template <typename Scalar>
struct VerificationReport {
    std::string check;
    Index mode = 0;
    Scalar max_abs_residual = 0;
    Scalar relative_residual = 0;
    Scalar tolerance = 0;
    bool pass = false;
    Shape ranks;
    Scalar weight_sum_error = 0;  // barycentric check only
};

namespace detail {

// M_d (x)K ... (x)K M_{skip+1} (x)K M_{skip-1} (x)K ... (x)K M_1.
template <typename Scalar>
Matrix<Scalar> kron_descending_skip(const std::vector<Matrix<Scalar>>& mats,
                                    Index skip_mode) {
    Matrix<Scalar> out;
    bool first = true;
    for (Index mu = static_cast<Index>(mats.size()); mu >= 1; --mu) {
        if (mu == skip_mode) continue;
        const auto& m = mats[static_cast<std::size_t>(mu - 1)];
        out = first ? m : Matrix<Scalar>(kronecker(out, m));
        first = false;
    }
    return out;
}

template <typename Scalar>
VerificationReport<Scalar> make_report(std::string check, Index mode,
                                       const Matrix<Scalar>& lhs,
                                       const Matrix<Scalar>& rhs,
                                       Scalar tolerance, Shape ranks) {
    VerificationReport<Scalar> rep;
    rep.check = std::move(check);
    rep.mode = mode;
    rep.max_abs_residual = (lhs - rhs).cwiseAbs().maxCoeff();
    rep.relative_residual =
        rep.max_abs_residual /
        std::max(Scalar(1), lhs.cwiseAbs().maxCoeff());
    rep.tolerance = tolerance;
    rep.pass = rep.relative_residual <= tolerance;
    rep.ranks = std::move(ranks);
    return rep;
}

}  // namespace detail

/// Component-link identity in the standard space: the mode-mu components
/// Y_mu = U_mu Sigma_mu must equal
/// X^(mu) (Y_d (x)K ... (x)K Y_{mu+1} (x)K Y_{mu-1} (x)K ... (x)K Y_1)
/// (B^(mu))^T with B the scaled core. Exact when `dec` decomposes x at its
/// exact multilinear rank; at truncated ranks pass the rank-r
/// reconstruction together with a fresh decomposition of it.
template <typename Scalar>
VerificationReport<Scalar> verify_component_link_euclidean(
    const Tensor<Scalar>& x, const TuckerDecomposition<Scalar>& dec,
    Index mode, Scalar tolerance = Scalar(default_verify_tolerance)) {
    const Index d = x.order();
    if (d < 2)
        throw std::invalid_argument(
            "component-link checks need order >= 2");
    detail::check_unfold_mode(d, mode);

    std::vector<Matrix<Scalar>> y;
    y.reserve(d);
    for (Index mu = 1; mu <= d; ++mu)
        y.push_back(dec.factors[static_cast<std::size_t>(mu - 1)] *
                    dec.mode_sigma[static_cast<std::size_t>(mu - 1)]
                        .asDiagonal());

    const Tensor<Scalar> b = scaled_core(dec);
    const Matrix<Scalar> chain = detail::kron_descending_skip(y, mode);
    const Matrix<Scalar> rhs =
        unfold(x, mode) * chain * unfold(b, mode).transpose();
    return detail::make_report<Scalar>(
        "component_link_euclidean", mode,
        y[static_cast<std::size_t>(mode - 1)], rhs, tolerance, dec.ranks);
}

/// Component-link identity in the weighted space: W_mu must equal
/// F^(mu) (M_d^2 W_d (x)K ... skipping mu ... (x)K M_1^2 W_1) (B^(mu))^T.
/// Same exactness condition as the standard-space check.
template <typename Scalar>
VerificationReport<Scalar> verify_component_link_metric(
    const Tensor<Scalar>& f, const MwcaResult<Scalar>& res, Index mode,
    Scalar tolerance = Scalar(default_verify_tolerance)) {
    const Index d = f.order();
    if (d < 2)
        throw std::invalid_argument(
            "component-link checks need order >= 2");
    detail::check_unfold_mode(d, mode);
    if (res.metric.order() != d)
        throw std::invalid_argument("metric order does not match tensor");

    std::vector<Matrix<Scalar>> weighted;
    weighted.reserve(d);
    for (Index mu = 1; mu <= d; ++mu)
        weighted.push_back(res.metric.weights(mu).cwiseAbs2().asDiagonal() *
                           res.w[static_cast<std::size_t>(mu - 1)]);

    const Matrix<Scalar> chain = detail::kron_descending_skip(weighted, mode);
    const Matrix<Scalar> rhs =
        unfold(f, mode) * chain * unfold(res.b, mode).transpose();
    return detail::make_report<Scalar>(
        "component_link_metric", mode,
        res.w[static_cast<std::size_t>(mode - 1)], rhs, tolerance,
        res.decomposition.ranks);
}

/// Barycentric correspondence: every row of the scaled components Z_mu is
/// a 1/sigma-scaled weighted combination of the other modes' scaled
/// components, the weights being the conditional frequencies F/f^mu (which
/// sum to one per slice). The sum is evaluated literally, element by
/// element, with B_mu = Sigma_mu B^(mu).
///
/// Hypothesis: the decomposition ranks equal the exact multilinear rank of
/// the analyzed tensor; anything lower is reported as an error.
template <typename Scalar>
VerificationReport<Scalar> verify_barycentric(
    const MwcaResult<Scalar>& res, Index mode,
    Scalar tolerance = Scalar(default_verify_tolerance)) {
    const Index d = res.order();
    if (d < 2)
        throw std::invalid_argument("barycentric check needs order >= 2");
    detail::check_unfold_mode(d, mode);

    const Tensor<Scalar> x = isometry_apply(res.frequencies, res.metric);
    for (Index mu = 1; mu <= d; ++mu) {
        Eigen::BDCSVD<Matrix<Scalar>> s(unfold(x, mu));
        const Index full = numerical_rank<Scalar>(s.singularValues());
        const Index got = res.decomposition.ranks[
            static_cast<std::size_t>(mu - 1)];
        if (got != full)
            throw std::invalid_argument(
                "barycentric check requires full multilinear rank: mode " +
                std::to_string(mu) + " was decomposed at rank " +
                std::to_string(got) + ", exact rank is " +
                std::to_string(full));
    }

    const Tensor<Scalar>& f = res.frequencies;
    const Shape& ranks = res.decomposition.ranks;
    const Index n_mu = f.dim(mode);
    const Index r_mu = ranks[static_cast<std::size_t>(mode - 1)];
    const Vector<Scalar>& sigma =
        res.decomposition.mode_sigma[static_cast<std::size_t>(mode - 1)];
    const Vector<Scalar>& f_mu = res.marginals.mode(mode);
    const Matrix<Scalar> b_mu =
        sigma.asDiagonal() * unfold(res.b, mode);

    // Component odometer over the other modes, mapped to B_mu's columns by
    // the same combined-index rule as the unfolding.
    Shape other_ranks;
    for (Index mu = 1; mu <= d; ++mu)
        if (mu != mode)
            other_ranks.push_back(ranks[static_cast<std::size_t>(mu - 1)]);

    Matrix<Scalar> rhs = Matrix<Scalar>::Zero(n_mu, r_mu);
    Vector<Scalar> weight_sums = Vector<Scalar>::Zero(n_mu);
    detail::for_each_index(f.shape(), [&](std::span<const Index> idx) {
        const Index i_mu = idx[static_cast<std::size_t>(mode - 1)];
        const Scalar weight =
            f.at(idx) / f_mu[i_mu - 1];
        weight_sums[i_mu - 1] += weight;

        Index col = 0;
        detail::for_each_index(other_ranks, [&](std::span<const Index> comp) {
            Scalar zprod = 1;
            std::size_t pos = 0;
            for (Index mu = 1; mu <= d; ++mu) {
                if (mu == mode) continue;
                zprod *= res.z[static_cast<std::size_t>(mu - 1)](
                    idx[static_cast<std::size_t>(mu - 1)] - 1, comp[pos] - 1);
                ++pos;
            }
            for (Index l = 0; l < r_mu; ++l)
                rhs(i_mu - 1, l) += weight * zprod * b_mu(l, col);
            ++col;
        });
    });
    for (Index l = 0; l < r_mu; ++l) rhs.col(l) /= sigma[l];

    VerificationReport<Scalar> rep = detail::make_report<Scalar>(
        "barycentric", mode, res.z[static_cast<std::size_t>(mode - 1)], rhs,
        tolerance, ranks);
    rep.weight_sum_error =
        (weight_sums.array() - Scalar(1)).abs().maxCoeff();
    rep.pass = rep.pass &&
               rep.weight_sum_error <= Scalar(barycentric_weight_tolerance);
    return rep;
}

/// Relative discrepancy ||a - b|| / ||a|| between the tensor-metric and
/// matrix-metric weighted matricizations.
template <typename Scalar>
Scalar relative_error_ca_mwca(const Matrix<Scalar>& f_tilde,
                              const Matrix<Scalar>& a_tilde) {
    if (f_tilde.rows() != a_tilde.rows() || f_tilde.cols() != a_tilde.cols())
        throw std::invalid_argument("matrices must have equal shapes");
    const Scalar denom = f_tilde.norm();
    if (!(denom > Scalar(0)))
        throw std::invalid_argument("reference matrix has zero norm");
    return (f_tilde - a_tilde).norm() / denom;
}

/// The two isometry routes for one mode of a frequency tensor: the mode-k
/// unfolding of nu(F) under the tensor CA metric, versus the doubly
/// weighted mode-k unfolding under the matrix CA metric. They coincide
/// exactly when the other modes are independent.
template <typename Scalar>
Scalar ca_mwca_relative_error(const Tensor<Scalar>& frequencies, Index mode) {
    const Tensor<Scalar> x =
        isometry_apply(frequencies, ca_metric(marginals(frequencies)));
    const Matrix<Scalar> tensor_route = unfold(x, mode);
    const Matrix<Scalar> matrix_route =
        ca_weighted_matrix<Scalar>(unfold(frequencies, mode));
    return relative_error_ca_mwca(tensor_route, matrix_route);
}

}  // namespace mwca
