#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cycrir/rational.hpp"
#include "support.hpp"

using namespace cycrir;

TEST_CASE("rat_eval on worked examples") {
    const RationalFn h1(ComplexPoly({1.0}), ComplexPoly({1.0, 1.0}));
    CHECK(std::abs(rat_eval(h1, cplx(0.0)) - cplx(1.0)) < 1e-15);

    // DC gain of 3/((s+1)(s+3)) is 1.
    const RationalFn h2(ComplexPoly({3.0}), ComplexPoly({1.0, 4.0, 3.0}));
    CHECK(std::abs(rat_eval(h2, cplx(0.0)) - cplx(1.0)) < 1e-15);

    SECTION("evaluation at a pole names the location") {
        try {
            rat_eval(h1, cplx(-1.0, 0.0));
            FAIL("expected NumericalError");
        } catch (const NumericalError& e) {
            CHECK(std::string(e.what()).find("pole") != std::string::npos);
            CHECK(std::string(e.what()).find("-1") != std::string::npos);
        }
    }
}

TEST_CASE("construction guards") {
    CHECK_THROWS_AS(RationalFn(ComplexPoly({1.0}), ComplexPoly()), ValidationError);
    // (s+1)/((s+1)(s+2)) has a shared root.
    CHECK_THROWS_AS(RationalFn(ComplexPoly({1.0, 1.0}), ComplexPoly({1.0, 3.0, 2.0})), NumericalError);
    // Nearly shared root within tol_cancel.
    CHECK_THROWS_AS(RationalFn(ComplexPoly({1.0, 1.0 + 1e-9}), ComplexPoly({1.0, 3.0, 2.0})), NumericalError);
    // Distinct roots pass.
    CHECK_NOTHROW(RationalFn(ComplexPoly({1.0, 0.5}), ComplexPoly({1.0, 3.0, 2.0})));
}

TEST_CASE("evaluation identity against the defining polynomials") {
    std::mt19937 rng(999);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    for (int trial = 0; trial < 40; ++trial) {
        const RationalFn g = testsup::random_stable_proper(rng, 4);
        for (int k = 0; k < 10; ++k) {
            const cplx s(u(rng), u(rng));
            cplx v;
            try {
                v = rat_eval(g, s);
            } catch (const NumericalError&) {
                continue;  // sampled on top of a pole
            }
            const cplx lhs = v * g.den().eval(s);
            const cplx rhs = g.num().eval(s);
            CHECK(std::abs(lhs - rhs) <= 1e-10 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("properness and reciprocal") {
    const RationalFn strictly(ComplexPoly({1.0}), ComplexPoly({1.0, 1.0}));
    CHECK(strictly.is_proper());
    CHECK(strictly.is_strictly_proper());

    const RationalFn biproper(ComplexPoly({2.0, 1.0}), ComplexPoly({1.0, 1.0}));
    CHECK(biproper.is_proper());
    CHECK_FALSE(biproper.is_strictly_proper());

    const RationalFn phi = strictly.reciprocal();
    CHECK(phi.num().degree() == 1);
    CHECK_FALSE(phi.is_proper());
}
