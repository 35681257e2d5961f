#include <catch_amalgamated.hpp>

#include "fixtures.hpp"
#include "udw/update.hpp"

using namespace udw;

namespace {

std::vector<Insertion> random_X(ref::Rng& r, const fx::Config& c, int n) {
    std::vector<Insertion> X;
    int d = c.st->dim();
    for (int k = 0; k < n; ++k) X.emplace_back(fx::random_event(r, d, -1.0, 6.0, d == 1 ? 0.0 : -3.0, d == 1 ? 10.0 : 3.0));
    return X;
}

} // namespace

TEST_CASE("mixture identity holds order by order") {
    ref::Rng rng(99);
    double worst = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto c = fx::random_config(rng, i);
        auto X = random_X(rng, c, 1 + i % 2);
        auto ns = ns_update(*c.st, c.m, X, 2);
        Series sum;
        sum.c.assign(3, 0.0);
        for (const auto& out : {c.m.s, c.m.sbar()}) {
            auto mo = c.m.with_outcome(out);
            auto sel = sel_update(*c.st, mo, X, 2, true);
            auto prod = fx::times(sel.denominator, sel.terms, 2);
            for (int k = 0; k <= 2; ++k) sum.c[k] += prod.at(k);
        }
        for (int k = 0; k <= 2; ++k)
            worst = std::max(worst, std::abs(sum.at(k) - ns.terms.at(k)) / std::max(1.0, std::abs(ns.terms.at(k))));
    }
    CHECK(worst <= 1e-9);
}

TEST_CASE("non-selective update is trivial at zeroth order and at zero coupling") {
    ref::Rng rng(5);
    auto c = fx::random_config(rng, 2);
    auto X = random_X(rng, c, 2);
    auto w = c.st->correlate(X);
    auto ns = ns_update(*c.st, c.m, X, 2);
    CHECK(std::abs(ns.terms.at(0) - w) < 1e-13);
    c.m.det.coupling = 0.0;
    CHECK(std::abs(sel_update(*c.st, c.m, X, 2, true).value - w) < 1e-13);
}

TEST_CASE("selective update falls back to the non-selective form outside the future") {
    auto st = BoxField::vacuum(make_box_modes(20.0, 0.0, 8));
    MeasurementSpec m;
    m.det.chi = Profile::gaussian(0.5);
    m.det.f = Profile::gaussian(1, 0.3, {0.0, 0, 0});
    m.psi = DetVec{std::sqrt(0.5), cplx(0.0, std::sqrt(0.5))};
    m.s = DetVec::excited();
    std::vector<Insertion> past{Insertion(-8.0, {1.0, 0, 0})};
    std::vector<Insertion> future{Insertion(8.0, {1.0, 0, 0})};
    CHECK_FALSE(sel_update(st, m, past, 2).selective_form);
    CHECK(sel_update(st, m, future, 2).selective_form);
}

TEST_CASE("orthogonal outcome with a decoupled detector has zero probability") {
    auto st = BoxField::vacuum(make_box_modes(10.0, 0.0, 4));
    MeasurementSpec m;
    m.det.f = Profile::gaussian(1, 0.3, {}, 1e-12);
    m.psi = DetVec::ground();
    m.s = DetVec::excited();
    std::vector<Insertion> X{Insertion(9.0, {0.0, 0, 0})};
    CHECK_THROWS_AS(sel_update(st, m, X, 2), ZeroProbabilityError);
}

TEST_CASE("third party outside the future only contributes its matrix element") {
    auto st = BoxField::vacuum(make_box_modes(30.0, 0.0, 6));
    MeasurementSpec m;
    m.det.chi = Profile::gaussian(0.4);
    m.det.f = Profile::gaussian(1, 0.3);
    m.psi = DetVec{std::sqrt(0.5), std::sqrt(0.5)};
    m.s = DetVec::ground();
    FiniteParty party;
    party.rho = Eigen::Matrix2cd::Identity() * 0.5;
    party.rho(0, 1) = cplx(0.1, 0.2);
    party.rho(1, 0) = cplx(0.1, -0.2);
    party.region.d = 1;
    party.region.center = {12.0, 0, 0};
    party.region.radius = 0.5;
    party.region.t_on = -1.0;
    party.region.t_off = 1.0;
    std::vector<Insertion> X{Insertion(0.0, {13.0, 0, 0})};
    cplx ns = ns_update(st, m, X, 2).value;
    for (auto mode : {UpdateMode::NonSelective, UpdateMode::Selective}) {
        CHECK(std::abs(extended_update(st, m, party, 0, 1, X, mode, 2) - party.rho(0, 1) * ns) < 1e-14);
    }
    CHECK(extended_update(st, m, party, 1, 1, {}, UpdateMode::NonSelective, 2) == cplx(0.5));
    CHECK_THROWS_AS(extended_update(st, m, party, 2, 0, X, UpdateMode::NonSelective, 2), DomainError);
}
