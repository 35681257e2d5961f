#pragma once
// Test-side reference formulas. Deliberately written from scratch, sharing nothing with src/.

#include <gsl/gsl_sf_bessel.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "udw/common.hpp"

namespace ref {

using udw::cplx;
constexpr double pi = 3.14159265358979323846;

// sum over all perfect matchings of the centred points, plus mean factors for unmatched points;
// order within each pair is the original order. Plain recursion.
inline cplx wick_bruteforce(std::vector<int> idx, const std::vector<cplx>& mean,
                            const std::function<cplx(int, int)>& pair) {
    if (idx.empty()) return 1.0;
    int first = idx.front();
    std::vector<int> rest(idx.begin() + 1, idx.end());
    cplx s = 0.0;
    // first point left alone (mean)
    if (!mean.empty() && mean[first] != 0.0) s += mean[first] * wick_bruteforce(rest, mean, pair);
    for (size_t k = 0; k < rest.size(); ++k) {
        std::vector<int> r2;
        for (size_t j = 0; j < rest.size(); ++j)
            if (j != k) r2.push_back(rest[j]);
        s += pair(first, rest[k]) * wick_bruteforce(r2, mean, pair);
    }
    return s;
}

// 1+1 box vacuum, point fields: sum_n e^{-i w (t-t')} e^{i k (x-x')} / (2 L w)
inline cplx box_vacuum_points(double L, double m, int N, bool zero, double t, double x, double tp, double xp) {
    cplx s = 0.0;
    auto add = [&](int n) {
        double k = 2.0 * pi * n / L, w = std::sqrt(k * k + m * m);
        s += std::exp(cplx(0.0, -w * (t - tp) + k * (x - xp))) / (2.0 * L * w);
    };
    int used = 0;
    if (zero) {
        add(0);
        ++used;
    }
    for (int n = 1; used < N; ++n) {
        add(n);
        if (++used < N) {
            add(-n);
            ++used;
        }
    }
    return s;
}

// massive scalar in 3+1, spacelike separation s: m K_1(m s) / (4 pi^2 s)
inline double massive3_spacelike(double m, double s) { return m * gsl_sf_bessel_K1(m * s) / (4.0 * pi * pi * s); }

// massless 3+1 point-point
inline cplx massless3_points(double R, double dt) { return 1.0 / (4.0 * pi * pi * (R * R - dt * dt)); }

// massless 3+1, Gaussian-smeared (width sigma, normalised amplitude 1/(2 pi sigma^2)^{3/2} times A) against a point:
// W = int d^3k/((2pi)^3 2k) e^{-k^2 sigma^2/2} e^{-i k dt} e^{i k.R} = (1/(4 pi^2 R)) int_0^inf dk sin(kR) e^{-k^2 s^2/2} e^{-i k dt}
// composite Simpson on a long fine grid
inline cplx massless3_gauss_point(double R, double dt, double sigma, double amp_l1 = 1.0) {
    const double kmax = 12.0 / sigma;
    const int n = 200000;
    const double h = kmax / n;
    cplx s = 0.0;
    for (int i = 0; i <= n; ++i) {
        double k = i * h;
        double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        s += w * std::sin(k * R) * std::exp(-0.5 * k * k * sigma * sigma) * std::exp(cplx(0.0, -k * dt));
    }
    return amp_l1 * s * (h / 3.0) / (4.0 * pi * pi * R);
}

// mu(t) and products by explicit 2x2 multiplication
inline Eigen::Matrix2cd mu(double t, double Om) {
    Eigen::Matrix2cd m;
    m << 0.0, std::exp(cplx(0.0, -Om * t)), std::exp(cplx(0.0, Om * t)), 0.0;
    return m;
}

struct Rng {
    std::mt19937_64 g;
    explicit Rng(unsigned long s) : g(s) {}
    double uni(double a, double b) { return std::uniform_real_distribution<double>(a, b)(g); }
    cplx cuni() { return {uni(-1, 1), uni(-1, 1)}; }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(g); }
};

} // namespace ref
