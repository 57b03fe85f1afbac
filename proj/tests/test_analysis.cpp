#include <doctest.h>

#include <cmath>
#include <random>

#include "mwca/analysis.hpp"
#include "support.hpp"

using namespace mwca;
using testsupport::gaussian_matrix;
using testsupport::outer;

namespace {

Tensord positive_counts(std::mt19937_64& rng, const Shape& shape,
                        Index max_count = 20) {
    Tensord t(shape);
    for (Index i = 0; i < t.size(); ++i)
        t.flat()[i] = 1.0 + static_cast<double>(
                                synthetic::uniform_int(rng, 0, max_count));
    return t;
}

}  // namespace

TEST_CASE("mwca of a product measure is the rank-1 square-root tensor") {
    Vectord p(2), q(3), r(4);
    p << 0.4, 0.6;
    q << 0.25, 0.5, 0.25;
    r << 0.1, 0.2, 0.3, 0.4;
    Tensord counts = outer({p, q, r});
    counts.flat() *= 1000.0;  // arbitrary scale, frequencies are scale-free

    const auto res = run_mwca(counts);
    CHECK(res.decomposition.ranks == Shape{1, 1, 1});

    // nu(F) has entries sqrt(p_i q_j r_k)
    const Tensord x = isometry_apply(res.frequencies, res.metric);
    const Tensord want = outer({Vectord(p.cwiseSqrt()), Vectord(q.cwiseSqrt()),
                                Vectord(r.cwiseSqrt())});
    CHECK((x.flat() - want.flat()).cwiseAbs().maxCoeff() <= 1e-12);

    for (Index mu = 1; mu <= 3; ++mu)
        CHECK(res.decomposition.mode_sigma[static_cast<std::size_t>(mu - 1)]
                  [0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("mwca of the uniform table keeps only the trivial component") {
    Tensord counts(Shape{2, 2, 2});
    counts.flat().setOnes();
    const auto res = run_mwca(counts);
    CHECK(res.decomposition.ranks == Shape{1, 1, 1});
    for (Index mu = 0; mu < 3; ++mu) {
        CHECK(res.y[static_cast<std::size_t>(mu)].cols() == 1);
        CHECK(res.decomposition.mode_sigma[static_cast<std::size_t>(mu)][0] ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mwca reports zero marginals with mode and index") {
    Tensord counts(Shape{2, 3});
    counts(1, 1) = 4;
    counts(2, 1) = 2;
    counts(1, 3) = 1;  // column 2 stays empty
    try {
        run_mwca(counts);
        FAIL("expected an exception");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("mode 2") != std::string::npos);
        CHECK(msg.find("index 2") != std::string::npos);
    }
}

TEST_CASE("mwca coordinate systems satisfy their defining relations") {
    std::mt19937_64 rng(211);
    const Tensord counts = positive_counts(rng, Shape{3, 4, 2});
    const auto res = run_mwca(counts);

    for (Index mu = 1; mu <= 3; ++mu) {
        const auto& y = res.y[static_cast<std::size_t>(mu - 1)];
        const auto& s =
            res.decomposition.mode_sigma[static_cast<std::size_t>(mu - 1)];

        // columns orthogonal with norms sigma
        const Matrixd gram = y.transpose() * y;
        CHECK((gram - Matrixd(s.cwiseAbs2().asDiagonal())).norm() <=
              1e-10 * s[0] * s[0]);

        // W = D Y and Z = D^{-1} Y with D = diag(sqrt(marginal))
        const Vectord d = res.marginals.mode(mu).cwiseSqrt();
        CHECK((res.w[static_cast<std::size_t>(mu - 1)] -
               d.asDiagonal() * y).cwiseAbs().maxCoeff() <= 1e-12);
        CHECK((res.z[static_cast<std::size_t>(mu - 1)] -
               d.cwiseInverse().asDiagonal() * y).cwiseAbs().maxCoeff() <=
              1e-12);

        // inertia accounts for the whole weighted mass
        const Tensord x = isometry_apply(res.frequencies, res.metric);
        CHECK(res.inertia[static_cast<std::size_t>(mu - 1)].sum() ==
              doctest::Approx(x.norm() * x.norm()).epsilon(1e-10));
    }
}

TEST_CASE("the scaled core unfolds consistently with the reversed Kronecker "
          "chain of sigma inverses") {
    std::mt19937_64 rng(223);
    const Tensord counts = positive_counts(rng, Shape{2, 3, 3});
    const auto res = run_mwca(counts);
    const auto& dec = res.decomposition;

    for (Index mu = 1; mu <= 3; ++mu) {
        std::vector<Matrixd> inv_sigma;
        for (Index eta = 1; eta <= 3; ++eta)
            inv_sigma.push_back(
                Matrixd(dec.mode_sigma[static_cast<std::size_t>(eta - 1)]
                            .cwiseInverse()
                            .asDiagonal()));
        Matrixd chain;
        bool first = true;
        for (Index eta = 3; eta >= 1; --eta) {
            if (eta == mu) continue;
            chain = first ? inv_sigma[static_cast<std::size_t>(eta - 1)]
                          : Matrixd(kronecker(
                                chain,
                                inv_sigma[static_cast<std::size_t>(eta - 1)]));
            first = false;
        }
        const Matrixd want =
            inv_sigma[static_cast<std::size_t>(mu - 1)] *
            unfold(dec.core, mu) * chain.transpose();
        CHECK((unfold(res.b, mu) - want).cwiseAbs().maxCoeff() <= 1e-10);
    }
}

TEST_CASE("component link holds in the standard space at full rank") {
    std::mt19937_64 rng(227);
    const Tensord t = synthetic::gaussian_tensor(rng, Shape{3, 4, 5});
    const auto dec = hosvd(t);
    for (Index mu = 1; mu <= 3; ++mu) {
        const auto rep = verify_component_link_euclidean(t, dec, mu, 1e-10);
        CHECK(rep.pass);
        CHECK(rep.relative_residual <= 1e-10);
        CHECK(rep.mode == mu);
        CHECK(rep.ranks == dec.ranks);
    }
}

TEST_CASE("component link is scalar-exact on an elementary tensor") {
    std::mt19937_64 rng(229);
    Vectord a(3), b(2), c(4);
    for (Index i = 0; i < 3; ++i) a[i] = synthetic::normal(rng);
    for (Index i = 0; i < 2; ++i) b[i] = synthetic::normal(rng);
    for (Index i = 0; i < 4; ++i) c[i] = synthetic::normal(rng);
    const Tensord t = outer({a, b, c});
    const auto dec = hosvd(t, Shape{1, 1, 1});
    for (Index mu = 1; mu <= 3; ++mu)
        CHECK(verify_component_link_euclidean(t, dec, mu, 1e-12).pass);
}

TEST_CASE("under truncation the identity needs the reconstruction with its "
          "own decomposition") {
    std::mt19937_64 rng(233);
    const Tensord t = synthetic::gaussian_tensor(rng, Shape{4, 4, 4});
    const auto dec = hosvd(t, Shape{2, 2, 2});
    const Tensord rec = reconstruct(dec);

    // against the original tensor the truncated identity fails...
    CHECK(verify_component_link_euclidean(t, dec, 1).relative_residual >
          1e-3);
    // ...and the truncated factors do not fit the reconstruction either
    CHECK(verify_component_link_euclidean(rec, dec, 1).relative_residual >
          1e-3);

    // decomposing the reconstruction (exact multilinear rank 2,2,2) does it
    const auto fresh = hosvd(rec, Shape{2, 2, 2});
    for (Index mu = 1; mu <= 3; ++mu)
        CHECK(verify_component_link_euclidean(rec, fresh, mu, 1e-10).pass);
}

TEST_CASE("the metric component link reduces to the standard one under the "
          "identity metric") {
    std::mt19937_64 rng(239);
    const Tensord f = synthetic::gaussian_tensor(rng, Shape{3, 3, 4});
    const auto res =
        weighted_decomposition(f, ModeMetric<double>::identity(f.shape()));
    const auto dec = hosvd(isometry_apply(
        f, ModeMetric<double>::identity(f.shape())));
    for (Index mu = 1; mu <= 3; ++mu) {
        const auto metric_rep = verify_component_link_metric(f, res, mu);
        const auto euclid_rep = verify_component_link_euclidean(f, dec, mu);
        CHECK(metric_rep.pass);
        CHECK(metric_rep.max_abs_residual == euclid_rep.max_abs_residual);
        CHECK(metric_rep.relative_residual == euclid_rep.relative_residual);
    }
}

TEST_CASE("the metric component link holds for random diagonal metrics") {
    std::mt19937_64 rng(241);
    const Shape shape{3, 2, 4, 3};
    const Tensord f = synthetic::gaussian_tensor(rng, shape);
    const auto metric = synthetic::positive_metric(rng, shape);
    const auto res = weighted_decomposition(f, metric);
    for (Index mu = 1; mu <= 4; ++mu) {
        const auto rep = verify_component_link_metric(f, res, mu, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.relative_residual <= 1e-9);
    }
}

TEST_CASE("the barycentric correspondence holds at full rank") {
    std::mt19937_64 rng(251);
    const Tensord f = synthetic::positive_frequencies(rng, Shape{2, 3, 4});
    const auto res = weighted_decomposition(f, ca_metric(marginals(f)));
    for (Index mu = 1; mu <= 3; ++mu) {
        const auto rep = verify_barycentric(res, mu, 1e-9);
        CHECK(rep.pass);
        CHECK(rep.max_abs_residual <= 1e-9);
        CHECK(rep.weight_sum_error <= 1e-12);
    }
}

TEST_CASE("the barycentric check rejects truncated ranks") {
    std::mt19937_64 rng(257);
    const Tensord counts = positive_counts(rng, Shape{3, 3, 3});
    const auto res = run_mwca(counts, Shape{2, 2, 2});
    CHECK_THROWS_WITH_AS(verify_barycentric(res, 1),
                         doctest::Contains("full multilinear rank"),
                         std::invalid_argument);
}

TEST_CASE("relative error between the two weighting routes") {
    SUBCASE("identical inputs give zero") {
        Matrixd a(2, 3);
        a << 1, 2, 3, 4, 5, 6;
        CHECK(relative_error_ca_mwca(a, a) == 0.0);
    }
    SUBCASE("shape mismatches and zero references are rejected") {
        const Matrixd a = Matrixd::Ones(2, 2);
        CHECK_THROWS_AS(relative_error_ca_mwca(a, Matrixd(Matrixd::Ones(2, 3))),
                        std::invalid_argument);
        CHECK_THROWS_AS(relative_error_ca_mwca(Matrixd(Matrixd::Zero(2, 2)),
                                               a),
                        std::invalid_argument);
    }
    SUBCASE("a product measure makes both routes coincide") {
        Vectord p(2), q(3), r(2);
        p << 0.3, 0.7;
        q << 0.2, 0.5, 0.3;
        r << 0.45, 0.55;
        const Tensord f = outer({p, q, r});
        for (Index k = 1; k <= 3; ++k)
            CHECK(ca_mwca_relative_error(f, k) <= 1e-12);
    }
}

TEST_CASE("two-way mwca agrees with classical ca coordinatewise") {
    std::mt19937_64 rng(263);
    for (int rep = 0; rep < 20; ++rep) {
        const Shape shape = synthetic::shape(rng, 2, 2, 6);
        const Tensord counts = positive_counts(rng, shape);
        const auto res = run_mwca(counts);
        const auto ca = run_ca(Matrixd(unfold(counts, 1)));

        REQUIRE(res.y[0].cols() == ca.row_y.cols());
        CHECK((res.y[0] - ca.row_y).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.y[1] - ca.col_y).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.w[0] - ca.row_w).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.w[1] - ca.col_w).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.z[0] - ca.row_z).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.z[1] - ca.col_z).cwiseAbs().maxCoeff() <= 1e-10);
        CHECK((res.decomposition.mode_sigma[0] - ca.sigma)
                  .cwiseAbs()
                  .maxCoeff() <= 1e-12);
    }
}

TEST_CASE("classical ca of an independence table is purely trivial") {
    Vectord p(3), q(4);
    p << 0.2, 0.5, 0.3;
    q << 0.1, 0.4, 0.25, 0.25;
    const Matrixd counts = 1000.0 * p * q.transpose();
    const auto ca = run_ca(counts);
    CHECK(ca.sigma.size() == 1);
    CHECK(ca.sigma[0] == doctest::Approx(1.0).epsilon(1e-12));

    const SvdResult<double> s =
        svd(ca_weighted_matrix(Matrixd(counts / counts.sum())));
    for (Index i = 1; i < s.sigma.size(); ++i) CHECK(s.sigma[i] <= 1e-12);
}

TEST_CASE("classical ca of a symmetric table has coinciding clouds") {
    Matrixd counts(2, 2);
    counts << 5, 1,
              1, 3;
    const auto ca = run_ca(counts);
    CHECK((ca.row_y - ca.col_y).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK((ca.row_z - ca.col_z).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("classical ca validates its input") {
    CHECK_THROWS_AS(run_ca(Matrixd(Matrixd::Zero(2, 2))),
                    std::invalid_argument);
    Matrixd neg(2, 2);
    neg << 1, -1, 1, 1;
    CHECK_THROWS_AS(run_ca(neg), std::invalid_argument);
    Matrixd empty_col(2, 2);
    empty_col << 1, 0, 2, 0;
    CHECK_THROWS_AS(run_ca(empty_col), std::invalid_argument);
    Matrixd fine(2, 2);
    fine << 1, 2, 3, 4;
    CHECK_THROWS_AS(run_ca(fine, 3), std::invalid_argument);
}

TEST_CASE("coordinates are invariant under count scaling") {
    std::mt19937_64 rng(269);
    const Tensord counts = positive_counts(rng, Shape{2, 4, 3});
    const auto base = run_mwca(counts);
    for (double scale : {7.0, 2.5}) {
        Tensord scaled = counts;
        scaled.flat() *= scale;
        const auto res = run_mwca(scaled);
        for (std::size_t mu = 0; mu < 3; ++mu) {
            CHECK((res.y[mu] - base.y[mu]).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((res.w[mu] - base.w[mu]).cwiseAbs().maxCoeff() <= 1e-12);
            CHECK((res.z[mu] - base.z[mu]).cwiseAbs().maxCoeff() <= 1e-12);
        }
    }
}

TEST_CASE("the full pipeline also runs on the other decomposition backends") {
    std::mt19937_64 rng(271);
    const Tensord counts = positive_counts(rng, Shape{2, 3, 3});
    for (auto method : {DecompositionMethod::st_hosvd,
                        DecompositionMethod::hooi}) {
        const auto res = run_mwca(counts, std::nullopt, method);
        const Tensord x = isometry_apply(res.frequencies, res.metric);
        CHECK((reconstruct(res.decomposition).flat() - x.flat()).norm() <=
              1e-10 * x.norm());
        for (Index mu = 1; mu <= 3; ++mu)
            CHECK(verify_component_link_metric(res.frequencies, res, mu, 1e-9)
                      .pass);
    }
}
