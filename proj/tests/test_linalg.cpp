#include <catch2/catch_amalgamated.hpp>

#include "nbrange/linalg.hpp"
#include "nbrange/rng.hpp"
#include "oracles.hpp"

using namespace nbrange;

TEST_CASE("hankel shapes and entries") {
    CVec h80(80);
    for (int i = 0; i < 80; ++i) h80[i] = cdouble(i + 1, 0);

    const CMat m = hankel(h80, 41);
    CHECK(m.rows() == 40);
    CHECK(m.cols() == 41);
    CHECK(m(0, 40) == h80[40]);
    CHECK(m(39, 40) == h80[79]);

    const CMat small = hankel(CVec{1.0, 2.0, 3.0}, 2);
    CHECK(small.rows() == 2);
    CHECK(small.cols() == 2);
    CHECK(small(0, 0) == cdouble(1, 0));
    CHECK(small(0, 1) == cdouble(2, 0));
    CHECK(small(1, 0) == cdouble(2, 0));
    CHECK(small(1, 1) == cdouble(3, 0));

    CHECK_THROWS_AS(hankel(h80, 81), std::invalid_argument);
    CHECK_THROWS_AS(hankel(h80, 0), std::invalid_argument);
}

TEST_CASE("hankel rows are unit-stride windows of h") {
    Rng rng(11);
    for (int rep = 0; rep < 20; ++rep) {
        const int k = 2 + static_cast<int>(rng.uniform() * 60);
        const int L = 1 + static_cast<int>(rng.uniform() * k);
        CVec h(k);
        for (auto& v : h) v = cdouble(rng.uniform(-1, 1), rng.uniform(-1, 1));
        const CMat m = hankel(h, L);
        REQUIRE(m.rows() == k - L + 1);
        for (int r = 0; r < m.rows(); ++r)
            for (int c = 0; c < L; ++c) REQUIRE(m(r, c) == h[r + c]);
    }
}

TEST_CASE("eig_hermitian on diagonal matrices") {
    CMat eye = CMat::identity(3);
    auto d1 = eig_hermitian(eye);
    for (double v : d1.eigenvalues) CHECK(v == Catch::Approx(1.0));

    CMat diag(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = 1.0;
    diag(2, 2) = 2.0;
    auto d2 = eig_hermitian(diag);
    CHECK(d2.eigenvalues[0] == Catch::Approx(3.0));
    CHECK(d2.eigenvalues[1] == Catch::Approx(2.0));
    CHECK(d2.eigenvalues[2] == Catch::Approx(1.0));
}

TEST_CASE("eig_hermitian rejects non-Hermitian input") {
    CMat a(2, 2);
    a(0, 1) = cdouble(1.0, 0.0);
    a(1, 0) = cdouble(0.5, 0.0);
    CHECK_THROWS_AS(eig_hermitian(a), std::invalid_argument);
}

TEST_CASE("eig_hermitian matches power-iteration oracle on a Gram matrix") {
    Rng rng(42);
    const CMat h = oracle::random_matrix(10, 6, rng);
    const CMat g = gram(h);

    const auto dec = eig_hermitian(g);
    const auto expected = oracle::psd_eigenvalues(g, 777);

    REQUIRE(dec.eigenvalues.size() == expected.size());
    const double scale = std::max(1.0, expected.front());
    for (size_t i = 0; i < expected.size(); ++i)
        CHECK(std::abs(dec.eigenvalues[i] - expected[i]) <= 1e-8 * scale);

    // Gram eigenvalues are nonnegative
    for (double v : dec.eigenvalues) CHECK(v >= -1e-10);
}

TEST_CASE("eig_hermitian invariants: residual, unitarity, trace") {
    Rng rng(7);
    for (int rep = 0; rep < 8; ++rep) {
        const int n = 3 + static_cast<int>(rng.uniform() * 10);
        const CMat a = oracle::random_hermitian(n, rng);
        const auto dec = eig_hermitian(a);
        const double an = frobenius_norm(a);

        // || A v_i - lambda_i v_i ||
        for (int i = 0; i < n; ++i) {
            CVec v(n);
            for (int r = 0; r < n; ++r) v[r] = dec.eigenvectors(r, i);
            CVec av = oracle::mat_vec(a, v);
            double res = 0.0;
            for (int r = 0; r < n; ++r) res += std::norm(av[r] - dec.eigenvalues[i] * v[r]);
            CHECK(std::sqrt(res) <= 1e-8 * std::max(1.0, an));
        }

        // V^H V = I
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                cdouble dot = 0.0;
                for (int r = 0; r < n; ++r) dot += std::conj(dec.eigenvectors(r, i)) * dec.eigenvectors(r, j);
                const double want = (i == j) ? 1.0 : 0.0;
                CHECK(std::abs(dot - want) <= 1e-8);
            }
        }

        // trace(A) = sum of eigenvalues
        double tr = 0.0;
        for (int i = 0; i < n; ++i) tr += a(i, i).real();
        double sum = 0.0;
        for (double v : dec.eigenvalues) sum += v;
        CHECK(std::abs(tr - sum) <= 1e-8 * std::max(1.0, an));

        // reconstruction A = V Lambda V^H
        double resid = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                cdouble s = 0.0;
                for (int k = 0; k < n; ++k)
                    s += dec.eigenvectors(i, k) * dec.eigenvalues[k] * std::conj(dec.eigenvectors(j, k));
                resid += std::norm(s - a(i, j));
            }
        }
        CHECK(std::sqrt(resid) <= 1e-8 * std::max(1.0, an));
    }
}

TEST_CASE("project_psd keeps PSD input and clips negative eigenvalues") {
    CMat psd(2, 2);
    psd(0, 0) = 2.0;
    psd(1, 1) = 0.5;
    psd(0, 1) = cdouble(0.3, 0.1);
    psd(1, 0) = std::conj(psd(0, 1));
    // make it PSD for sure: Gram of itself
    const CMat g = gram(psd);
    const CMat pg = project_psd(g);
    double diff = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) diff = std::max(diff, std::abs(pg(i, j) - g(i, j)));
    CHECK(diff <= 1e-10 * std::max(1.0, max_abs(g)));

    CMat d(2, 2);
    d(0, 0) = 1.0;
    d(1, 1) = -2.0;
    const CMat pd = project_psd(d);
    CHECK(pd(0, 0).real() == Catch::Approx(1.0));
    CHECK(std::abs(pd(1, 1)) <= 1e-12);
    CHECK(std::abs(pd(0, 1)) <= 1e-12);
}

TEST_CASE("project_psd matches spectral oracle on random Hermitian input") {
    Rng rng(2024);
    const CMat a = oracle::random_hermitian(8, rng);
    const CMat got = project_psd(a);
    const CMat want = oracle::psd_projection(a, 31337);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) CHECK(std::abs(got(i, j) - want(i, j)) <= 1e-8);
}

TEST_CASE("project_psd is idempotent and non-expansive") {
    Rng rng(5);
    for (int rep = 0; rep < 6; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform() * 8);
        const CMat a = oracle::random_hermitian(n, rng);
        const CMat b = oracle::random_hermitian(n, rng);
        const CMat pa = project_psd(a);
        const CMat pb = project_psd(b);
        const CMat ppa = project_psd(pa);

        double idem = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) idem = std::max(idem, std::abs(ppa(i, j) - pa(i, j)));
        CHECK(idem <= 1e-10 * std::max(1.0, max_abs(pa)));

        double dp = 0.0, dab = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dp += std::norm(pa(i, j) - pb(i, j));
                dab += std::norm(a(i, j) - b(i, j));
            }
        CHECK(std::sqrt(dp) <= std::sqrt(dab) + 1e-12);
    }
}
