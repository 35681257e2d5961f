#include <catch_amalgamated.hpp>

#include "udw/scenarios.hpp"

using namespace udw;

namespace {

bool psd_unit_trace(const MatC& r) {
    Eigen::SelfAdjointEigenSolver<MatC> es(r);
    return es.eigenvalues().minCoeff() > -1e-12 && std::abs(r.trace() - 1.0) < 1e-10 && (r - r.adjoint()).norm() < 1e-12;
}

std::string message_of(const AbcConfig& c) {
    try {
        validate_geometry(c);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("geometry validation names the broken relation") {
    auto c = AbcConfig::defaults();
    auto g = validate_geometry(c);
    CHECK(g.ok);
    CHECK(g.relations.size() == 3);

    auto early = c;
    early.B.spec.chi = Profile::gaussian(0.3, 2.5);
    CHECK(message_of(early).find("causal future") != std::string::npos);

    auto near = c;
    near.A.spec.f = Profile::gaussian(1, 0.3, {6.0, 0, 0});
    CHECK(message_of(near).find("not spacelike") != std::string::npos);

    auto tiny = c;
    tiny.L = 6.0;
    CHECK(message_of(tiny).find("box too small") != std::string::npos);
}

TEST_CASE("zero couplings leave every reduced state at its initial value") {
    auto c = AbcConfig::defaults();
    c.A.spec.coupling = c.B.spec.coupling = c.C.spec.coupling = 0.0;
    c.A.psi = DetVec{std::sqrt(0.3), cplx(0.0, std::sqrt(0.7))};
    c.C.psi = DetVec{std::sqrt(0.5), std::sqrt(0.5)};
    c.modes = 4;
    auto r = run_abc(c);
    Eigen::Vector2cd a = c.A.psi.vec();
    CHECK((r.rho_A - a * a.adjoint()).norm() < 1e-14);
    CHECK(r.dist_A_trB < 1e-14);
    CHECK(r.dist_B_trA < 1e-14);
}

TEST_CASE("non-selective ABC run") {
    auto c = AbcConfig::defaults();
    c.selective = false;
    auto r = run_abc(c);
    CHECK(r.route_discrepancy <= 1e-10);
    CHECK(r.dist_A_trB <= 1e-10);
    // B's marginal is off only by the truncated mode sum failing to commute
    CHECK(r.dist_B_trA <= r.commute_defect);
    for (const auto* m : {&r.rho_AB, &r.rho_A, &r.rho_B}) CHECK(psd_unit_trace(*m));
}

TEST_CASE("selective ABC run") {
    auto r = run_abc(AbcConfig::defaults());
    CHECK(r.probability > 0.0);
    CHECK(r.route_discrepancy <= 1e-10);
    CHECK(r.dist_A_trB > 1e-3);
    CHECK(r.dist_A2_trB <= 1e-10);
    CHECK(r.min_eigenvalue > -1e-12);
    CHECK(r.max_trace_error < 1e-10);
}

TEST_CASE("unitary factorization with a single active detector is exact") {
    auto c = AbcConfig::defaults();
    c.A.spec.coupling = c.B.spec.coupling = 0.0;
    auto f = factorization_check(c, {4}, 2);
    REQUIRE(f.rows.size() == 1);
    CHECK(f.rows[0].u_vs_BCA <= 1e-9);
    CHECK(f.rows[0].u_vs_CBA <= 1e-9);
    CHECK(f.rows[0].comm_UA_M <= 1e-9);
}

TEST_CASE("the ordering of the timelike pair matters") {
    // with A switched off, U = U_B U_C up to the overlap of the Gaussian tails
    auto c = AbcConfig::defaults();
    c.A.spec.coupling = 0.0;
    auto f = factorization_check(c, {4}, 2);
    REQUIRE(f.rows.size() == 1);
    CHECK(f.rows[0].u_vs_BCA <= 1e-6);
    CHECK(f.rows[0].u_vs_CBA > 10.0 * f.rows[0].u_vs_BCA);
    CHECK(f.rows[0].u_vs_CBA > 1e-2);
}
