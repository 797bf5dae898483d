#include <catch2/catch_amalgamated.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <numbers>
#include <random>

#include "cycrir/network.hpp"
#include "support.hpp"

using namespace cycrir;
using testsup::multiset_distance;

namespace {

RationalFn first_order(double k, double tau) { return RationalFn(ComplexPoly({k}), ComplexPoly({tau, 1.0})); }

RationalFn second_order_example() { return RationalFn(ComplexPoly({3.0}), ComplexPoly({1.0, 4.0, 3.0})); }

std::vector<cplx> matrix_eigenvalues(const Eigen::MatrixXd& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m, /*computeEigenvectors=*/false);
    std::vector<cplx> out;
    for (int i = 0; i < m.rows(); ++i) out.push_back(es.eigenvalues()(i));
    return out;
}

}  // namespace

TEST_CASE("network construction guards") {
    CHECK_THROWS_AS(CyclicNetwork(4, 1.0, first_order(1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(CyclicNetwork(3, -1.0, first_order(1.0, 1.0)), ValidationError);
    CHECK_THROWS_AS(CyclicNetwork(3, 1.0, RationalFn(ComplexPoly({1.0}), ComplexPoly({1.0, -1.0}))), ValidationError);
    CHECK_THROWS_AS(CyclicNetwork(3, 1.0, RationalFn(ComplexPoly({1.0, 0.0, 1.0}), ComplexPoly({1.0, 1.0}))),
                    ValidationError);
}

TEST_CASE("build_interconnection") {
    SECTION("n=3, mu=2 layout") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const Eigen::MatrixXd a = build_interconnection(net);
        Eigen::MatrixXd expected(3, 3);
        expected << 0, 0, -2, -2, 0, 0, 0, -2, 0;
        CHECK((a - expected).norm() == 0.0);
    }
    SECTION("characteristic polynomial of the n=3, mu=2 matrix is s^3+8") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const auto eig = matrix_eigenvalues(build_interconnection(net));
        CHECK(multiset_distance(eig, poly_roots(ComplexPoly({1.0, 0.0, 0.0, 8.0}))) < 1e-9);
    }
    SECTION("row sums equal -mu") {
        const CyclicNetwork net(5, 1.0, first_order(1.0, 1.0));
        const Eigen::MatrixXd a = build_interconnection(net);
        for (int i = 0; i < 5; ++i) CHECK(a.row(i).sum() == Catch::Approx(-1.0));
    }
}

TEST_CASE("circulant_eigenvalues") {
    SECTION("n=3, mu=2: cube roots of -8") {
        const auto lam = circulant_eigenvalues(3, 2.0);
        REQUIRE(lam.size() == 3);
        CHECK(std::abs(lam[0] - 2.0 * std::polar(1.0, std::numbers::pi / 3.0)) < 1e-12);
        CHECK(std::abs(lam[1] - cplx(-2.0, 0.0)) < 1e-12);
        CHECK(std::abs(lam[2] - 2.0 * std::polar(1.0, 5.0 * std::numbers::pi / 3.0)) < 1e-12);
    }
    SECTION("n=9 contains mu e^{j pi/9}") {
        for (double mu : {3.0, 5.0}) {
            const auto lam = circulant_eigenvalues(9, mu);
            CHECK(std::abs(lam[0] - mu * std::polar(1.0, std::numbers::pi / 9.0)) < 1e-12);
        }
    }
    SECTION("even n rejected") { CHECK_THROWS_AS(circulant_eigenvalues(4, 1.0), ValidationError); }
    SECTION("agreement with roots of s^n + mu^n") {
        for (int n : {3, 5, 7, 9, 11, 13, 15, 17, 19, 21}) {
            for (double mu : {0.5, 1.0, 3.0, 5.0}) {
                std::vector<cplx> c(static_cast<std::size_t>(n) + 1, cplx(0.0));
                c[0] = cplx(1.0);
                c[static_cast<std::size_t>(n)] = cplx(std::pow(mu, n));
                CHECK(multiset_distance(circulant_eigenvalues(n, mu), poly_roots(ComplexPoly(std::move(c)))) < 1e-9);
            }
        }
    }
    SECTION("matches the interconnection matrix spectrum") {
        for (int n : {3, 5, 9, 15, 21}) {
            for (double mu : {0.5, 1.0, 3.0, 5.0}) {
                const CyclicNetwork net(n, mu, first_order(0.1, 1.0));
                CHECK(multiset_distance(matrix_eigenvalues(build_interconnection(net)), circulant_eigenvalues(n, mu)) <
                      1e-9);
            }
        }
    }
}

TEST_CASE("modal_subsystem") {
    SECTION("h=1/(s+1), lambda=1 gives the marginal 1/s") {
        const RationalFn g = modal_subsystem(first_order(1.0, 1.0), cplx(1.0));
        CHECK(g.num().degree() == 0);
        CHECK(g.num().coeffs()[0] == cplx(1.0));
        REQUIRE(g.den().degree() == 1);
        CHECK(std::abs(g.den().coeffs()[0] - cplx(1.0)) < 1e-15);
        CHECK(std::abs(g.den().coeffs()[1]) < 1e-15);
    }
    SECTION("second-order benchmark form 3 lambda/((s+1)(s+3) - 3 lambda)") {
        const cplx lambda = 5.0 * std::polar(1.0, std::numbers::pi / 3.0);
        const RationalFn g = modal_subsystem(second_order_example(), lambda);
        CHECK(std::abs(g.num().coeffs()[0] - 3.0 * lambda) < 1e-12);
        REQUIRE(g.den().degree() == 2);
        CHECK(std::abs(g.den().coeffs()[0] - cplx(1.0)) < 1e-12);
        CHECK(std::abs(g.den().coeffs()[1] - cplx(4.0)) < 1e-12);
        CHECK(std::abs(g.den().coeffs()[2] - (cplx(3.0) - 3.0 * lambda)) < 1e-12);
    }
    SECTION("first-order pole lands at (lambda K - 1)/tau") {
        const double k = 2.0, tau = 0.5;
        const cplx lambda = 3.0 * std::polar(1.0, 0.7);
        const RationalFn g = modal_subsystem(first_order(k, tau), lambda);
        const auto poles = poly_roots(g.den());
        REQUIRE(poles.size() == 1);
        CHECK(std::abs(poles[0] - (lambda * k - 1.0) / tau) < 1e-12);
    }
}

TEST_CASE("modal_set classification") {
    SECTION("n=3, mu=2, K=tau=1: conjugate modes are exactly marginal") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const ModalSet ms = modal_set(net);
        CHECK(ms.unstable_indices.empty());
        CHECK(ms.marginal_indices == std::vector<int>{1, 3});
    }
    SECTION("n=9, mu=3, K=tau=1: modes with 3 cos(theta_k) > 1") {
        const CyclicNetwork net(9, 3.0, first_order(1.0, 1.0));
        const ModalSet ms = modal_set(net);
        std::vector<int> expected;
        for (int k = 1; k <= 9; ++k) {
            const double theta = (2.0 * k - 1.0) * std::numbers::pi / 9.0;
            if (3.0 * std::cos(theta) > 1.0) expected.push_back(k);
        }
        CHECK(ms.unstable_indices == expected);
        CHECK(ms.unstable_indices == std::vector<int>{1, 2, 8, 9});
        CHECK(ms.marginal_indices.empty());
    }
    SECTION("small gain: all modes stable") {
        const CyclicNetwork net(3, 0.1, first_order(1.0, 1.0));
        const ModalSet ms = modal_set(net);
        CHECK(ms.unstable_indices.empty());
        CHECK(ms.marginal_indices.empty());
    }
}

TEST_CASE("characteristic_poly") {
    SECTION("unperturbed first-order: (tau s + 1)^n + (K mu)^n") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const ComplexPoly p = characteristic_poly(net);
        const ComplexPoly expected = poly_pow(ComplexPoly({1.0, 1.0}), 3) + ComplexPoly({8.0});
        CHECK((p - expected).max_coeff_magnitude() < 1e-12);
        const double s3 = std::sqrt(3.0);
        CHECK(multiset_distance(poly_roots(p), {cplx(-3, 0), cplx(0, s3), cplx(0, -s3)}) < 1e-9);
    }
    SECTION("generic first-order parameters") {
        const double k = 2.0, tau = 0.5, mu = 1.5;
        const CyclicNetwork net(5, mu, first_order(k, tau));
        const ComplexPoly p = characteristic_poly(net);
        const ComplexPoly expected = poly_pow(ComplexPoly({tau, 1.0}), 5) + ComplexPoly({std::pow(k * mu, 5)});
        CHECK((p - expected).max_coeff_magnitude() <= 1e-12 * expected.max_coeff_magnitude());
    }
    SECTION("constant delta = -0.5 gives (s+1)^3 + 1, stable") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const DiagPerturbation delta = DiagPerturbation::broadcast(RationalFn::constant(cplx(-0.5)), 3);
        const ComplexPoly p = characteristic_poly(net, &delta);
        const ComplexPoly expected = poly_pow(ComplexPoly({1.0, 1.0}), 3) + ComplexPoly({1.0});
        CHECK((p - expected).max_coeff_magnitude() < 1e-12);
        const auto rep = classify_stability(p);
        CHECK(rep.classification == StabilityClass::stable);
        CHECK(multiset_distance(rep.roots, {cplx(-2, 0), cplx(-0.5, std::sqrt(3.0) / 2.0), cplx(-0.5, -std::sqrt(3.0) / 2.0)}) <
              1e-9);
    }
    SECTION("length mismatch rejected") {
        const CyclicNetwork net(3, 2.0, first_order(1.0, 1.0));
        const DiagPerturbation delta = DiagPerturbation::broadcast(RationalFn::constant(cplx(-0.5)), 5);
        CHECK_THROWS_AS(characteristic_poly(net, &delta), ValidationError);
    }
    SECTION("root canceling the common denominator is flagged indeterminate") {
        // delta_i = s/(s+2): den+num has root -1, which is also the pole of h.
        const CyclicNetwork net(3, 1.0, first_order(1.0, 1.0));
        const RationalFn d(ComplexPoly({1.0, 0.0}), ComplexPoly({1.0, 2.0}));
        const DiagPerturbation delta = DiagPerturbation::broadcast(d, 3);
        CHECK_THROWS_AS(characteristic_poly(net, &delta), NumericalError);
    }
    SECTION("real configurations give real polynomials") {
        const CyclicNetwork net(5, 1.5, second_order_example());
        CHECK(characteristic_poly(net).is_real());
        const DiagPerturbation delta = DiagPerturbation::broadcast(
            RationalFn(ComplexPoly({0.2, -0.1}), ComplexPoly({1.0, 1.0})), 5);
        CHECK(characteristic_poly(net, &delta).is_real());
    }
}

TEST_CASE("determinant identity at sampled points") {
    std::mt19937 rng(50607);
    std::uniform_real_distribution<double> coin(-0.4, 0.4), su(-3.0, 3.0);
    const CyclicNetwork net(5, 1.3, second_order_example());
    std::vector<RationalFn> ds;
    for (int i = 0; i < 5; ++i) ds.push_back(RationalFn::constant(cplx(coin(rng))));
    const DiagPerturbation delta(ds);
    const ComplexPoly p = characteristic_poly(net, &delta);
    const Eigen::MatrixXd a = build_interconnection(net);
    int checked = 0;
    for (int trial = 0; trial < 200 && checked < 100; ++trial) {
        const cplx s(su(rng), su(rng));
        cplx hval;
        try {
            hval = net.h.eval(s);
        } catch (const NumericalError&) {
            continue;
        }
        Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(5, 5);
        for (int r = 0; r < 5; ++r)
            for (int c = 0; c < 5; ++c)
                m(r, c) -= a(r, c) * (cplx(1.0) + ds[static_cast<std::size_t>(c)].num().coeffs()[0]) * hval;
        const cplx det = m.determinant();
        const cplx denpow = poly_pow(net.h.den(), 5).eval(s);
        CHECK(std::abs(p.eval(s) - det * denpow) <= 1e-8 * (std::abs(det * denpow) + std::abs(p.eval(s)) + 1.0));
        ++checked;
    }
    CHECK(checked == 100);
}

TEST_CASE("modal equivalence for homogeneous constant perturbation") {
    const CyclicNetwork net(5, 2.0, second_order_example());
    const cplx delta(-0.3, 0.0);
    const DiagPerturbation dp = DiagPerturbation::broadcast(RationalFn::constant(delta), 5);
    const ComplexPoly p = characteristic_poly(net, &dp);
    std::vector<cplx> modal_roots;
    for (const cplx& lam : circulant_eigenvalues(5, 2.0)) {
        const ComplexPoly den = net.h.den() - (lam * (cplx(1.0) + delta)) * net.h.num();
        for (const cplx& r : poly_roots(den)) modal_roots.push_back(r);
    }
    CHECK(multiset_distance(poly_roots(p), modal_roots) < 1e-7);
}

TEST_CASE("nominal_roots") {
    SECTION("n=9, mu=3, K=tau=1 strictly unstable with margin 3 cos(pi/9) - 1") {
        const auto rep = nominal_roots(CyclicNetwork(9, 3.0, first_order(1.0, 1.0)));
        CHECK(rep.classification == StabilityClass::strictly_unstable);
        CHECK(rep.stability_margin == Catch::Approx(3.0 * std::cos(std::numbers::pi / 9.0) - 1.0).epsilon(1e-9));
    }
    SECTION("n=3, mu=2, K=tau=1 marginal with roots at +-j sqrt(3)") {
        const auto rep = nominal_roots(CyclicNetwork(3, 2.0, first_order(1.0, 1.0)));
        CHECK(rep.classification == StabilityClass::marginal);
        CHECK(rep.n_axis == 2);
    }
    SECTION("small gain stable") {
        const auto rep = nominal_roots(CyclicNetwork(3, 0.5, first_order(1.0, 1.0)));
        CHECK(rep.classification == StabilityClass::stable);
    }
}
