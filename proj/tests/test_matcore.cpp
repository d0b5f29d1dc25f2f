#include <catch2/catch_amalgamated.hpp>

#include "support/helpers.hpp"
#include "support/oracles.hpp"

#include "qcst/matcore.hpp"
#include "qcst/rng.hpp"
#include "qcst/states.hpp"

using namespace qcst;

TEST_CASE("norms of the frozen 3x3 match externally computed values", "[matcore]") {
    ComplexMatrix m = testutil::frozen_3x3();
    CHECK(nuclear_norm(m) == Catch::Approx(testutil::frozen_3x3_nuclear).epsilon(1e-13));
    CHECK(operator_norm(m) == Catch::Approx(testutil::frozen_3x3_operator).epsilon(1e-13));
    CHECK(frobenius_norm(m) == Catch::Approx(testutil::frozen_3x3_frobenius).epsilon(1e-13));
    auto svals = singular_values(m);
    REQUIRE(svals.size() == 3);
    CHECK(svals(0) >= svals(1));
    CHECK(svals(1) >= svals(2));
}

TEST_CASE("norm ordering holds on random matrices", "[matcore]") {
    RngStream rng(501);
    for (int trial = 0; trial < 40; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_below(10));
        ComplexMatrix x = testutil::random_complex(d, d, rng);
        double op = operator_norm(x), fr = frobenius_norm(x), nu = nuclear_norm(x);
        CHECK(op <= fr * (1 + 1e-12));
        CHECK(fr <= nu * (1 + 1e-12));
        CHECK(nu <= d * op * (1 + 1e-12));
    }
}

TEST_CASE("norms reject non-finite input", "[matcore]") {
    ComplexMatrix bad = ComplexMatrix::Zero(2, 2);
    bad(0, 0) = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(nuclear_norm(bad), InvalidInputError);
    CHECK_THROWS_AS(operator_norm(bad), InvalidInputError);
    CHECK_THROWS_AS(frobenius_norm(bad), InvalidInputError);
}

TEST_CASE("hermitian_eig reconstructs 1000 seeded matrices", "[matcore]") {
    int count = 0;
    for (std::uint64_t seed = 0; count < 1000; ++seed) {
        for (int d = 2; d <= 32 && count < 1000; d += 3, ++count) {
            RngStream rng = RngStream::derive(seed, {static_cast<std::uint64_t>(d)});
            ComplexMatrix a = testutil::random_hermitian(d, rng);
            EigResult eig = hermitian_eig(a);
            ComplexMatrix back =
                eig.eigenvectors * eig.eigenvalues.asDiagonal() * eig.eigenvectors.adjoint();
            REQUIRE((back - a).norm() <= 1e-10 * std::max(1.0, a.norm()));
            REQUIRE((eig.eigenvectors.adjoint() * eig.eigenvectors -
                     ComplexMatrix::Identity(d, d))
                        .norm() <= 1e-12 * d);
            for (Eigen::Index i = 0; i + 1 < eig.eigenvalues.size(); ++i)
                REQUIRE(eig.eigenvalues(i) <= eig.eigenvalues(i + 1));
        }
    }
    REQUIRE(count == 1000);
}

TEST_CASE("hermitian_eig agrees with the Jacobi oracle", "[matcore]") {
    RngStream rng(907);
    for (int d : {2, 3, 5, 7, 12}) {
        ComplexMatrix a = testutil::random_hermitian(d, rng);
        RealVector lam = hermitian_eigenvalues(a);
        auto oracle_lam = oracle::jacobi_eigenvalues(a);
        REQUIRE(oracle_lam.size() == static_cast<std::size_t>(d));
        for (int i = 0; i < d; ++i)
            CHECK(lam(i) == Catch::Approx(oracle_lam[static_cast<std::size_t>(i)])
                                .margin(1e-10 * std::max(1.0, a.norm())));
    }
}

TEST_CASE("hermitian_eig rejects non-Hermitian input", "[matcore]") {
    ComplexMatrix a(2, 2);
    a << Complex(1, 0), Complex(2, 1), Complex(0, 0), Complex(3, 0);
    CHECK_THROWS_AS(hermitian_eig(a), InvalidInputError);
    CHECK_THROWS_AS(hermitian_eigenvalues(a), InvalidInputError);
    CHECK_THROWS_AS(HermitianMatrix(a), InvalidInputError);
    ComplexMatrix rect = ComplexMatrix::Zero(2, 3);
    CHECK_THROWS_AS(HermitianMatrix(rect), InvalidInputError);
}

TEST_CASE("HermitianMatrix keeps entries as given", "[matcore]") {
    RngStream rng(11);
    ComplexMatrix a = testutil::random_hermitian(4, rng);
    HermitianMatrix h(a);
    CHECK(h.dim() == 4);
    CHECK((h.mat() - a).norm() == 0.0);
}

TEST_CASE("numerical_rank thresholds relative to the top eigenvalue", "[matcore]") {
    RealVector lam(3);
    lam << 1e-15, 1e-5, 1.0;
    CHECK(numerical_rank(lam) == 2);
    lam << -0.2, 0.0, 0.0;
    CHECK(numerical_rank(lam) == 0);
    CHECK(numerical_rank(RealVector()) == 0);
}

TEST_CASE("psd_sqrt squares back to the input", "[matcore]") {
    RngStream rng(77);
    for (int d : {2, 5, 9}) {
        ComplexMatrix g = testutil::random_complex(d, d, rng);
        ComplexMatrix a = g * g.adjoint();
        ComplexMatrix b = psd_sqrt(a);
        CHECK((b * b - a).norm() <= 1e-10 * std::max(1.0, a.norm()));
        CHECK(hermiticity_residual(b) <= 1e-14);
    }
}

TEST_CASE("psd_sqrt clamps round-off negatives and rejects real ones", "[matcore]") {
    ComplexMatrix tiny = ComplexMatrix::Zero(2, 2);
    tiny(0, 0) = 1.0;
    tiny(1, 1) = -1e-12; // inside the clamp window
    ComplexMatrix b = psd_sqrt(tiny);
    CHECK(b(1, 1).real() == 0.0);

    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.0;
    neg(1, 1) = -1e-3;
    CHECK_THROWS_AS(psd_sqrt(neg), InvalidInputError);
}

TEST_CASE("psd_clamp projects onto the PSD cone", "[matcore]") {
    ComplexMatrix a = ComplexMatrix::Zero(3, 3);
    a(0, 0) = 2.0;
    a(1, 1) = -0.5;
    a(2, 2) = 0.25;
    ComplexMatrix c = psd_clamp(a);
    CHECK(c(0, 0).real() == Catch::Approx(2.0));
    CHECK(c(1, 1).real() == Catch::Approx(0.0).margin(1e-15));
    CHECK(c(2, 2).real() == Catch::Approx(0.25));

    RngStream rng(3);
    ComplexMatrix h = testutil::random_hermitian(5, rng);
    ComplexMatrix once = psd_clamp(h);
    CHECK(hermitian_eigenvalues(once)(0) >= -1e-14);
    CHECK((psd_clamp(once) - once).norm() <= 1e-12);
}

TEST_CASE("DensityMatrix validates its invariants", "[matcore]") {
    ComplexMatrix good = ComplexMatrix::Zero(2, 2);
    good(0, 0) = 0.75;
    good(1, 1) = 0.25;
    DensityMatrix rho(good, 2);
    CHECK(rho.dim() == 2);
    CHECK(rho.rank_hint().value() == 2);
    CHECK(rho.rank() == 2);

    ComplexMatrix off_trace = good;
    off_trace(0, 0) = 0.75 + 1e-9;
    CHECK_THROWS_AS(DensityMatrix(off_trace), InvalidInputError);
    ComplexMatrix near_trace = good;
    near_trace(0, 0) = 0.75 + 1e-11; // within the trace budget
    CHECK_NOTHROW(DensityMatrix(near_trace));

    ComplexMatrix indefinite = ComplexMatrix::Zero(2, 2);
    indefinite(0, 0) = 1.5;
    indefinite(1, 1) = -0.5;
    CHECK_THROWS_AS(DensityMatrix(indefinite), InvalidInputError);

    ComplexMatrix skew = good;
    skew(0, 1) = Complex(0.1, 0.1);
    CHECK_THROWS_AS(DensityMatrix(skew), InvalidInputError);
}

TEST_CASE("DensityMatrix rank matches construction rank", "[matcore]") {
    RngStream rng(4242);
    for (int r = 1; r <= 4; ++r) {
        DensityMatrix rho = random_rank_r_density(6, r, rng);
        CHECK(rho.rank() == r);
        CHECK(rho.rank_hint().value() == r);
    }
}

TEST_CASE("fidelity of a state with itself is one", "[matcore]") {
    RngStream rng(88);
    for (int d : {2, 4, 7}) {
        DensityMatrix rho = random_rank_r_density(d, std::min(d, 3), rng);
        double f = fidelity(rho, rho);
        CHECK(f == Catch::Approx(1.0).margin(1e-10));
    }
}

TEST_CASE("fidelity is symmetric and bounded", "[matcore]") {
    RngStream rng(89);
    for (int trial = 0; trial < 25; ++trial) {
        int d = 2 + static_cast<int>(rng.uniform_below(7));
        DensityMatrix rho = random_rank_r_density(d, 1 + static_cast<int>(rng.uniform_below(d)), rng);
        DensityMatrix sig = random_rank_r_density(d, 1 + static_cast<int>(rng.uniform_below(d)), rng);
        double fab = fidelity(rho, sig);
        double fba = fidelity(sig, rho);
        CHECK(fab == Catch::Approx(fba).margin(1e-10));
        CHECK(fab >= 0.0);
        CHECK(fab <= 1.0 + 1e-8);
    }
}

TEST_CASE("fidelity against a pure state reduces to an expectation", "[matcore]") {
    RngStream rng(90);
    for (int d : {3, 5, 8}) {
        DensityMatrix pure = random_rank_r_density(d, 1, rng);
        DensityMatrix sig = random_rank_r_density(d, 2, rng);
        double f = fidelity(pure, sig);
        double overlap = trace_inner(pure.mat(), sig.mat()).real();
        CHECK(f == Catch::Approx(overlap).margin(1e-8));
    }
}

TEST_CASE("fidelity known values", "[matcore]") {
    int d = 4;
    ComplexMatrix e0 = ComplexMatrix::Zero(d, d);
    e0(0, 0) = 1.0;
    ComplexMatrix e1 = ComplexMatrix::Zero(d, d);
    e1(1, 1) = 1.0;
    ComplexMatrix mixed = ComplexMatrix::Identity(d, d) / d;
    CHECK(fidelity(e0, e1) == Catch::Approx(0.0).margin(1e-14));
    CHECK(fidelity(e0, mixed) == Catch::Approx(1.0 / d).margin(1e-12));
    CHECK(fidelity(mixed, mixed) == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("fidelity rejects bad inputs", "[matcore]") {
    ComplexMatrix a = ComplexMatrix::Identity(2, 2) / 2.0;
    ComplexMatrix b = ComplexMatrix::Identity(3, 3) / 3.0;
    CHECK_THROWS_AS(fidelity(a, b), InvalidInputError);

    ComplexMatrix neg = ComplexMatrix::Zero(2, 2);
    neg(0, 0) = 1.5;
    neg(1, 1) = -0.5;
    CHECK_THROWS_AS(fidelity(a, neg), InvalidInputError);
}

TEST_CASE("kron follows the row-major index convention", "[matcore]") {
    ComplexMatrix sx(2, 2), sz(2, 2);
    sx << 0, 1, 1, 0;
    sz << 1, 0, 0, -1;
    ComplexMatrix k = kron(sx, sz);
    REQUIRE(k.rows() == 4);
    // (i1,i2),(j1,j2) entry is sx(i1,j1) * sz(i2,j2)
    CHECK(k(0, 2) == Complex(1, 0));  // sx(0,1) * sz(0,0)
    CHECK(k(1, 3) == Complex(-1, 0)); // sx(0,1) * sz(1,1)
    CHECK(k(2, 0) == Complex(1, 0));
    CHECK(k(0, 0) == Complex(0, 0));

    RngStream rng(5);
    ComplexMatrix a = testutil::random_complex(2, 3, rng);
    ComplexMatrix b = testutil::random_complex(3, 2, rng);
    ComplexMatrix c = testutil::random_complex(3, 2, rng);
    ComplexMatrix d = testutil::random_complex(2, 3, rng);
    CHECK((kron(a, c) * kron(b, d) - kron(a * b, c * d)).norm() <= 1e-12);
}

TEST_CASE("trace_inner matches the entrywise sum", "[matcore]") {
    RngStream rng(6);
    ComplexMatrix x = testutil::random_complex(3, 3, rng);
    ComplexMatrix y = testutil::random_complex(3, 3, rng);
    Complex manual = 0.0;
    for (Eigen::Index i = 0; i < 3; ++i)
        for (Eigen::Index j = 0; j < 3; ++j)
            manual += std::conj(x(i, j)) * y(i, j);
    Complex got = trace_inner(x, y);
    CHECK(std::abs(got - manual) <= 1e-13);
}
