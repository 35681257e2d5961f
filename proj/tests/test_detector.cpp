#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "udw/detector.hpp"

using namespace udw;

TEST_CASE("mu is Hermitian with the chosen phase convention") {
    for (double t : {-1.3, 0.0, 2.2}) {
        Mat2 m = mu(t, 1.7);
        CHECK((m - m.adjoint()).norm() < 1e-15);
        CHECK((m - ref::mu(t, 1.7)).norm() < 1e-15);
        // <g|mu|e> carries e^{-i Omega t}
        CHECK(std::abs(m(0, 1) - std::polar(1.0, -1.7 * t)) < 1e-15);
    }
}

TEST_CASE("mu products match explicit multiplication") {
    ref::Rng rng(4);
    for (int n = 0; n <= 7; ++n)
        for (int rep = 0; rep < 5; ++rep) {
            std::vector<double> ts;
            Eigen::Matrix2cd want = Eigen::Matrix2cd::Identity();
            for (int i = 0; i < n; ++i) {
                ts.push_back(rng.uni(-3, 3));
                want = want * ref::mu(ts.back(), 0.9);
            }
            if (n > 0) CHECK((mu_product(ts, 0.9) - want).norm() < 1e-13);
            DetVec a{rng.cuni(), rng.cuni()}, b{rng.cuni(), rng.cuni()};
            cplx me = a.vec().dot(want * b.vec());
            CHECK(std::abs(matrix_element(a, ts, b, 0.9) - me) < 1e-13);
        }
}

TEST_CASE("complement is a unit vector orthogonal to the state") {
    ref::Rng rng(5);
    for (int i = 0; i < 20; ++i) {
        DetVec s = DetVec{rng.cuni(), rng.cuni()}.normalized();
        DetVec c = s.complement();
        CHECK(std::abs(inner(s, c)) < 1e-15);
        CHECK(std::abs(c.norm() - 1.0) < 1e-15);
    }
    CHECK(std::abs(inner(DetVec::ground(), DetVec::excited())) == 0.0);
}

TEST_CASE("detector region brackets the switching and smearing supports") {
    DetectorSpec d;
    d.chi = Profile::bump(1.5, 2.0);
    d.f = Profile::indicator(3, 0.4, {1.0, 0.0, 0.0});
    auto r = d.region();
    CHECK(r.t_on == 0.5);
    CHECK(r.t_off == 3.5);
    CHECK(r.radius == 0.4);
    CHECK(r.center[0] == 1.0);
    d.coupling = -0.1;
    CHECK_THROWS_AS(d.validate(), ConfigError);
}
