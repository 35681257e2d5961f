#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "udw/fieldstate.hpp"
#include "udw/oracle.hpp"

using namespace udw;
using Catch::Approx;

namespace {

std::vector<Insertion> random_points(ref::Rng& rng, int n, double L) {
    std::vector<Insertion> xs;
    for (int i = 0; i < n; ++i) xs.emplace_back(rng.uni(-1.0, 1.0), Vec3{rng.uni(0.0, L), 0.0, 0.0});
    return xs;
}

// thermal box two-point function by direct mode sum
cplx box_thermal_points(const BoxModes& m, double beta, const Insertion& a, const Insertion& b) {
    cplx s = 0.0;
    for (int n = 0; n < m.size(); ++n) {
        double w = m.omega[n], k = m.k[n], nb = 1.0 / std::expm1(beta * w);
        cplx ph = std::exp(cplx(0.0, -w * (a.t - b.t) + k * (a.x[0] - b.x[0])));
        s += ((1.0 + nb) * ph + nb * std::conj(ph)) / (2.0 * m.L * w);
    }
    return s;
}

} // namespace

TEST_CASE("Wick term counts") {
    CHECK(wick_term_count(2, true) == 1);
    CHECK(wick_term_count(4, true) == 3);
    CHECK(wick_term_count(6, true) == 15);
    CHECK(wick_term_count(3, true) == 0);
    // coherent 1-, 2-, 3-point functions
    CHECK(wick_term_count(1, false) == 1);
    CHECK(wick_term_count(2, false) == 2);
    CHECK(wick_term_count(3, false) == 4);
}

TEST_CASE("wick_sum matches brute-force pairings") {
    ref::Rng rng(3);
    for (int n = 1; n <= 8; ++n)
        for (bool centred : {true, false}) {
            std::vector<cplx> tab(n * n), mean;
            for (auto& v : tab) v = rng.cuni();
            if (!centred)
                for (int i = 0; i < n; ++i) mean.push_back(rng.cuni());
            auto pair = [&](int i, int j) { return tab[i * n + j]; };
            std::vector<int> idx(n);
            for (int i = 0; i < n; ++i) idx[i] = i;
            cplx want = ref::wick_bruteforce(idx, mean, pair);
            cplx got = wick_sum(n, centred ? nullptr : mean.data(), pair);
            CHECK(std::abs(got - want) <= 1e-12 * std::max(1.0, std::abs(want)));
        }
}

TEST_CASE("box vacuum two-point function is the mode sum") {
    for (bool zero : {false, true}) {
        double mass = zero ? 0.8 : 0.0;
        auto modes = make_box_modes(9.0, mass, 7, zero);
        auto st = BoxField::vacuum(modes);
        ref::Rng rng(5);
        for (int i = 0; i < 20; ++i) {
            auto p = random_points(rng, 2, 9.0);
            cplx want = ref::box_vacuum_points(9.0, mass, 7, zero, p[0].t, p[0].x[0], p[1].t, p[1].x[0]);
            CHECK(std::abs(st.w2(p[0], p[1]) - want) < 1e-14);
        }
    }
}

TEST_CASE("box thermal two-point function is the Bose-weighted mode sum") {
    auto modes = make_box_modes(7.0, 0.4, 6, true);
    auto st = BoxField::thermal(modes, 1.7);
    ref::Rng rng(6);
    for (int i = 0; i < 20; ++i) {
        auto p = random_points(rng, 2, 7.0);
        CHECK(std::abs(st.w2(p[0], p[1]) - box_thermal_points(modes, 1.7, p[0], p[1])) < 1e-13);
    }
}

TEST_CASE("coherent mean is twice the real part of the mode amplitudes") {
    auto modes = make_box_modes(10.0, 0.0, 3);
    Eigen::VectorXcd alpha(3);
    alpha << cplx(0.3, -0.1), cplx(-0.2, 0.25), cplx(0.05, 0.4);
    auto st = BoxField::coherent(modes, alpha);
    ref::Rng rng(8);
    for (int i = 0; i < 10; ++i) {
        double t = rng.uni(-3, 3), x = rng.uni(0, 10);
        cplx s = 0.0;
        for (int n = 0; n < 3; ++n)
            s += alpha(n) * std::exp(cplx(0.0, -modes.omega[n] * t + modes.k[n] * x)) / std::sqrt(20.0 * modes.omega[n]);
        CHECK(st.mean(Insertion(t, {x, 0, 0})) == Approx(2.0 * s.real()).margin(1e-14));
    }
}

TEST_CASE("two-point functions are Hermitian") {
    ref::Rng rng(9);
    auto modes = make_box_modes(8.0, 0.0, 6);
    auto st = BoxField::random_gaussian(modes, 21);
    auto smear = Profile::gaussian(1, 0.4);
    for (int i = 0; i < 20; ++i) {
        Insertion a(rng.uni(-2, 2), {rng.uni(0, 8), 0, 0}, &smear), b(rng.uni(-2, 2), {rng.uni(0, 8), 0, 0});
        CHECK(std::abs(st.w2(a, b) - std::conj(st.w2(b, a))) < 1e-14);
    }
    auto c3 = ContinuumField::vacuum(3, 0.0);
    auto sm3 = Profile::gaussian(3, 0.3);
    Insertion a(0.2, {0.0, 0.0, 0.0}, &sm3), b(-0.1, {1.2, 0.3, 0.0});
    CHECK(std::abs(c3.w2(a, b) - std::conj(c3.w2(b, a))) < 1e-14);
}

TEST_CASE("box n-point functions agree with the truncated Fock oracle") {
    // vacuum, coherent and thermal states, n <= 4
    auto modes = make_box_modes(10.0, 0.9, 3);
    auto fock = FockBasis::per_mode(3, 9);
    TruncatedSystem sys(modes, fock, {});
    Eigen::VectorXcd alpha(3);
    alpha << cplx(0.2, -0.1), cplx(-0.15, 0.1), cplx(0.1, 0.2);
    std::vector<BoxField> states{BoxField::vacuum(modes), BoxField::coherent(modes, alpha), BoxField::thermal(modes, 5.0)};
    auto smear = Profile::gaussian(1, 0.5);
    ref::Rng rng(10);
    double worst = 0.0;
    for (auto& st : states) {
        auto ens = sys.prepare(st);
        for (int n = 1; n <= 4; ++n)
            for (int rep = 0; rep < 4; ++rep) {
                auto xs = random_points(rng, n, 10.0);
                if (rep % 2) xs[0].smear = &smear;
                worst = std::max(worst, std::abs(st.wn(xs) - exact_expectation(sys, ens, xs)));
            }
    }
    CHECK(worst <= 1e-8);
}

TEST_CASE("squeezed thermal two-point function matches the oracle") {
    auto modes = make_box_modes(10.0, 0.9, 2);
    Eigen::MatrixXcd A(2, 2), B(2, 2);
    A << 0.1, cplx(0.05, 0.02), cplx(0.05, -0.02), -0.07;
    B << cplx(0.08, 0.01), 0.03, 0.03, cplx(-0.05, 0.02);
    auto st = BoxField::squeezed_thermal(modes, 4.0, A, B);
    TruncatedSystem sys(modes, FockBasis::per_mode(2, 16), {});
    auto ens = sys.prepare(st);
    ref::Rng rng(12);
    for (int i = 0; i < 10; ++i) {
        auto xs = random_points(rng, 2, 10.0);
        CHECK(std::abs(st.wn(xs) - exact_expectation(sys, ens, xs)) <= 1e-8);
    }
}

TEST_CASE("continuum massless point-point closed form") {
    auto st = ContinuumField::vacuum(3, 0.0);
    for (auto [R, dt] : {std::pair{1.0, 0.3}, {2.5, -1.0}, {0.4, 0.0}}) {
        Insertion a(dt, {R, 0, 0}), b(0.0, {0, 0, 0});
        CHECK(std::abs(st.w2(a, b) - ref::massless3_points(R, dt)) < 1e-12 * std::abs(ref::massless3_points(R, dt)));
    }
    Insertion o(0.0, {0, 0, 0});
    CHECK_THROWS_AS(st.w2(o, o), NumericGuardError);
}

TEST_CASE("continuum Gaussian-smeared against a point") {
    auto st = ContinuumField::vacuum(3, 0.0);
    auto sm = Profile::gaussian(3, 0.3, {}, 1.3);
    for (auto [R, dt] : {std::pair{1.0, 0.2}, {0.5, 0.9}, {2.0, -1.5}, {0.3, 0.0}}) {
        Insertion a(0.0, {0, 0, 0}, &sm), b(dt, {0, R, 0});
        // W(a, b) has e^{-i k (t_a - t_b)} = e^{+i k dt}
        cplx want = ref::massless3_gauss_point(R, -dt, 0.3, sm.l1_mass());
        CHECK(std::abs(st.w2(a, b) - want) < 1e-9 * std::max(1.0, std::abs(want)));
    }
}

TEST_CASE("continuum massive spacelike two-point function is m K1(ms)/(4 pi^2 s)") {
    auto st = ContinuumField::vacuum(3, 1.0);
    for (auto [R, dt] : {std::pair{1.0, 0.0}, {2.0, 1.0}, {0.7, 0.3}}) {
        Insertion a(dt, {R, 0, 0}), b(0.0, {0, 0, 0});
        double s = std::sqrt(R * R - dt * dt);
        cplx got = st.w2(a, b);
        CHECK(got.real() == Approx(ref::massive3_spacelike(1.0, s)).epsilon(1e-5));
        CHECK(std::abs(got.imag()) < 1e-5 * got.real());
    }
}

TEST_CASE("massless 1+1 continuum is rejected") {
    CHECK_THROWS_AS(ContinuumField::vacuum(1, 0.0), UnsupportedError);
    CHECK_NOTHROW(ContinuumField::vacuum(1, 0.5));
    CHECK_THROWS_AS(make_box_modes(5.0, 0.0, 4, true), UnsupportedError);
}

TEST_CASE("box commutator at spacelike separation shrinks with the mode count") {
    // smeared fields two box-widths of light travel apart; massive with zero mode
    auto sm = Profile::gaussian(1, 0.5);
    std::vector<double> c;
    for (int N : {8, 16, 32, 64}) {
        auto st = BoxField::vacuum(make_box_modes(20.0, 1.0, N + 1, true));
        Insertion a(0.0, {0.0, 0, 0}, &sm), b(1.0, {7.0, 0, 0}, &sm);
        c.push_back(std::abs(2.0 * st.w2(a, b).imag()));
    }
    INFO(c[0] << " " << c[1] << " " << c[2] << " " << c[3]);
    for (size_t i = 1; i < c.size(); ++i) CHECK(c[i] < c[i - 1]);
}

TEST_CASE("general Gaussian field reproduces a box state") {
    auto modes = make_box_modes(6.0, 0.0, 4);
    auto box = BoxField::thermal(modes, 2.0);
    GaussianGeneralField g(1, [&](const Insertion& a, const Insertion& b) { return box.w2c(a, b); }, nullptr, 6.0);
    ref::Rng rng(14);
    auto xs = random_points(rng, 4, 6.0);
    CHECK(std::abs(g.wn(xs) - box.wn(xs)) < 1e-13);
}
