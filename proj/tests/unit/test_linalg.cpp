#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"
#include "qtm/errors.hpp"
#include "qtm/linalg.hpp"

using namespace qtm;
using Catch::Approx;

namespace {

CMatrix random_matrix(Eigen::Index n, unsigned seed) {
    std::srand(seed);
    return CMatrix::Random(n, n);
}

} // namespace

TEST_CASE("kron matches the block definition", "[linalg]") {
    const CMatrix a = random_matrix(2, 1);
    const CMatrix b = random_matrix(3, 2);
    const CMatrix k = linalg::kron(a, b);
    REQUIRE(k.rows() == 6);
    for (Eigen::Index i = 0; i < 2; ++i) {
        for (Eigen::Index j = 0; j < 2; ++j) {
            CHECK(linalg::max_abs(k.block(3 * i, 3 * j, 3, 3) - a(i, j) * b) < 1e-15);
        }
    }
}

TEST_CASE("matrix_exp agrees with an eigendecomposition oracle", "[linalg]") {
    for (unsigned seed = 1; seed <= 5; ++seed) {
        const CMatrix a = random_matrix(4, seed) * (0.5 * seed);
        const CMatrix expected = testing::exp_by_eigen(a);
        CHECK(linalg::max_abs(linalg::matrix_exp(a) - expected) < 1e-10 * linalg::max_abs(expected));
    }
}

TEST_CASE("matrix_exp of an anti-Hermitian matrix is unitary", "[linalg]") {
    const CMatrix h = random_matrix(24, 7);
    const CMatrix herm = (h + h.adjoint()) * 10.0;
    const CMatrix u = linalg::matrix_exp(Complex(0.0, -1.0) * herm);
    CHECK(linalg::max_abs(u.adjoint() * u - CMatrix::Identity(24, 24)) < 1e-11);
}

TEST_CASE("matrix_exp rejects non-square input", "[linalg]") {
    CHECK_THROWS_AS(linalg::matrix_exp(CMatrix::Zero(2, 3)), std::invalid_argument);
}

TEST_CASE("matrix_log_psd inverts the exponential on positive matrices", "[linalg]") {
    const CMatrix h = random_matrix(3, 3);
    const CMatrix herm = h + h.adjoint();
    const CMatrix pos = linalg::matrix_exp(herm);
    CHECK(linalg::max_abs(linalg::matrix_log_psd(pos) - herm) < 1e-11);
}

TEST_CASE("null_vector solves a singular system with a constraint", "[linalg]") {
    CMatrix a(3, 3);
    a << -1, 1, 0, //
        1, -2, 1,  //
        0, 1, -1;
    CRowVector ones = CRowVector::Ones(3);
    const CVector x = linalg::null_vector(a, ones);
    CHECK(linalg::max_abs(a * x) < 1e-14);
    CHECK(x.sum().real() == Approx(1.0).epsilon(1e-14));
    CHECK(x(0).real() == Approx(1.0 / 3.0).epsilon(1e-13));
}

TEST_CASE("null_vector reports degenerate and missing kernels", "[linalg]") {
    const CRowVector ones = CRowVector::Ones(3);
    SECTION("two-dimensional kernel") {
        CMatrix a = CMatrix::Zero(3, 3);
        a(0, 0) = 1.0;
        try {
            (void)linalg::null_vector(a, ones);
            FAIL("expected SolverError");
        } catch (const SolverError& e) {
            CHECK(e.kind() == SolverError::Kind::DegenerateKernel);
        }
    }
    SECTION("no kernel") {
        CHECK_THROWS_AS(linalg::null_vector(CMatrix::Identity(3, 3), ones), SolverError);
    }
}

TEST_CASE("vec and unvec are inverse column-stacking maps", "[linalg]") {
    const CMatrix m = random_matrix(3, 11);
    const CVector v = linalg::vec(m);
    CHECK(v(1) == m(1, 0));
    CHECK(v(3) == m(0, 1));
    CHECK(linalg::unvec(v, 3) == m);
}

TEST_CASE("hermitian_eigenvalues are ascending and real", "[linalg]") {
    CMatrix m = CMatrix::Zero(2, 2);
    m(0, 1) = Complex(0.0, 1.0);
    m(1, 0) = Complex(0.0, -1.0);
    const Eigen::VectorXd e = linalg::hermitian_eigenvalues(m);
    CHECK(e(0) == Approx(-1.0));
    CHECK(e(1) == Approx(1.0));
    CHECK(linalg::is_hermitian(m));
    m(0, 1) = 2.0;
    CHECK_FALSE(linalg::is_hermitian(m));
}
