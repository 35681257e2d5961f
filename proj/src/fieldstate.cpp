#include "udw/fieldstate.hpp"

#include <unsupported/Eigen/MatrixFunctions>
#include <gsl/gsl_sf_bessel.h>
#include <gsl/gsl_sf_dawson.h>

#include <bit>
#include <cmath>
#include <random>

#include "gsl_util.hpp"

namespace udw {

// ---- Wick ----

namespace {

template <class PairAt>
cplx wick_dp(int n, const cplx* mean, PairAt&& pair) {
    if (n == 0) return 1.0;
    if (!mean && (n % 2)) return 0.0;
    if (n > 20) throw DomainError("wick_sum: too many insertions");
    const unsigned full = (1u << n) - 1u;
    std::vector<cplx> f(static_cast<size_t>(full) + 1, 0.0);
    f[0] = 1.0;
    for (unsigned S = 1; S <= full; ++S) {
        if (!mean && (std::popcount(S) % 2)) continue;
        int i = std::countr_zero(S);
        unsigned rest = S & ~(1u << i);
        cplx acc = mean ? mean[i] * f[rest] : cplx(0.0);
        for (unsigned R = rest; R; R &= R - 1) {
            int j = std::countr_zero(R);
            acc += pair(i, j) * f[rest & ~(1u << j)];
        }
        f[S] = acc;
    }
    return f[full];
}

} // namespace

cplx wick_sum(int n, const cplx* mean, const std::function<cplx(int, int)>& pair) {
    return wick_dp(n, mean, pair);
}

cplx wick_sum(int n, const cplx* mean, const cplx* pairs) {
    return wick_dp(n, mean, [&](int i, int j) { return pairs[i * n + j]; });
}

long wick_term_count(int n, bool zero_mean) {
    if (n < 0) return 0;
    long t0 = 1, t1 = zero_mean ? 0 : 1;
    if (n == 0) return t0;
    for (int k = 2; k <= n; ++k) {
        long t2 = (zero_mean ? 0 : t1) + (k - 1) * t0;
        t0 = t1;
        t1 = t2;
    }
    return t1;
}

cplx FieldState::correlate(std::span<const Insertion> xs) const {
    const int n = static_cast<int>(xs.size());
    if (n == 0) return 1.0;
    const bool zm = zero_mean();
    if (zm && n % 2) return 0.0;
    std::vector<cplx> m;
    if (!zm) {
        m.resize(n);
        for (int i = 0; i < n; ++i) m[i] = mean(xs[i]);
    }
    std::vector<cplx> P(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) P[i * n + j] = w2c(xs[i], xs[j]);
    return wick_sum(n, zm ? nullptr : m.data(), P.data());
}

cplx FieldState::wn(std::span<const Event> pts) const {
    std::vector<Insertion> xs;
    xs.reserve(pts.size());
    for (const auto& e : pts) {
        if (e.d != dim()) throw DomainError("wn: event dimension does not match the field");
        xs.emplace_back(e);
    }
    return correlate(xs);
}

// ---- box ----

BoxModes make_box_modes(double L, double mass, int N, bool include_zero) {
    if (!(L > 0.0)) throw ConfigError("box.L", "box length must be positive");
    if (N < 1) throw ConfigError("box.modes", "need at least one mode");
    if (mass < 0.0) throw ConfigError("field.mass", "mass must be non-negative");
    if (include_zero && mass == 0.0) throw UnsupportedError("box: the k = 0 mode needs a positive mass");
    BoxModes m;
    m.L = L;
    m.mass = mass;
    if (include_zero) m.k.push_back(0.0);
    for (int j = 1; static_cast<int>(m.k.size()) < N; ++j) {
        m.k.push_back(2.0 * PI * j / L);
        if (static_cast<int>(m.k.size()) < N) m.k.push_back(-2.0 * PI * j / L);
    }
    for (double k : m.k) m.omega.push_back(std::sqrt(k * k + mass * mass));
    return m;
}

BoxField::BoxField(BoxModes m, std::string name) : modes_(std::move(m)), name_(std::move(name)) {
    const int N = modes_.size();
    alpha_ = VecC::Zero(N);
    M_ = MatC::Zero(N, N);
    N_ = MatC::Zero(N, N);
}

BoxField BoxField::vacuum(const BoxModes& m) { return BoxField(m, "box-vacuum"); }

BoxField BoxField::coherent(const BoxModes& m, const VecC& alpha) {
    if (alpha.size() != m.size()) throw ConfigError("field.alpha", "one amplitude per mode required");
    BoxField f(m, "box-coherent");
    f.alpha_ = alpha;
    return f;
}

BoxField BoxField::thermal(const BoxModes& m, double beta) {
    if (!(beta > 0.0)) throw ConfigError("field.beta", "inverse temperature must be positive");
    BoxField f(m, "box-thermal");
    f.beta_ = beta;
    for (int n = 0; n < m.size(); ++n) f.N_(n, n) = 1.0 / std::expm1(beta * m.omega[n]);
    return f;
}

BoxField BoxField::squeezed_thermal(const BoxModes& m, double beta, const MatC& A, const MatC& B) {
    const int N = m.size();
    if (A.rows() != N || A.cols() != N || B.rows() != N || B.cols() != N)
        throw ConfigError("field.squeeze", "A and B must be N x N");
    if ((A - A.adjoint()).norm() > 1e-12 || (B - B.transpose()).norm() > 1e-12)
        throw ConfigError("field.squeeze", "A must be Hermitian and B symmetric");
    BoxField f(m, "box-gaussian");
    f.beta_ = beta;
    f.A_ = A;
    f.B_ = B;
    f.diagonal_ = false;
    Eigen::VectorXd nb = Eigen::VectorXd::Zero(N);
    if (beta > 0.0)
        for (int n = 0; n < N; ++n) nb[n] = 1.0 / std::expm1(beta * m.omega[n]);
    MatC K(2 * N, 2 * N);
    K << A, B, -B.conjugate(), -A.conjugate();
    MatC E = (cplx(0.0, -1.0) * K).exp();
    MatC U = E.topLeftCorner(N, N), V = E.topRightCorner(N, N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            cplx mm = 0.0, nn = 0.0;
            for (int j = 0; j < N; ++j) {
                mm += U(a, j) * V(b, j) * (1.0 + nb[j]) + V(a, j) * U(b, j) * nb[j];
                nn += std::conj(U(a, j)) * U(b, j) * nb[j] + std::conj(V(a, j)) * V(b, j) * (1.0 + nb[j]);
            }
            f.M_(a, b) = mm;
            f.N_(a, b) = nn;
        }
    return f;
}

BoxField BoxField::random_gaussian(const BoxModes& m, unsigned seed, double beta, double strength) {
    const int N = m.size();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, strength);
    MatC A(N, N), B(N, N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            A(i, j) = cplx(g(rng), g(rng));
            B(i, j) = cplx(g(rng), g(rng));
        }
    A = 0.5 * (A + A.adjoint()).eval();
    B = 0.5 * (B + B.transpose()).eval();
    return squeezed_thermal(m, beta, A, B);
}

Eigen::VectorXcd box_coeff(const BoxModes& m, const Insertion& a) {
    const int N = m.size();
    Eigen::VectorXcd f(N);
    for (int n = 0; n < N; ++n) {
        double k = m.k[n], w = m.omega[n];
        double g = a.smear ? a.smear->radial_fourier(k) : 1.0;
        f[n] = std::polar(g / std::sqrt(2.0 * m.L * w), -w * a.t + k * a.x[0]);
    }
    return f;
}

BoxField::VecC BoxField::coeff(const Insertion& a) const { return box_coeff(modes_, a); }

double BoxField::mean(const Insertion& a) const {
    if (zero_mean()) return 0.0;
    return 2.0 * (coeff(a).transpose() * alpha_).value().real();
}

cplx BoxField::pair_from_coeff(const VecC& u, const VecC& v) const {
    if (diagonal_) {
        cplx s = 0.0;
        for (int n = 0; n < u.size(); ++n) {
            double nn = N_(n, n).real();
            s += u[n] * std::conj(v[n]) * (1.0 + nn) + std::conj(u[n]) * v[n] * nn;
        }
        return s;
    }
    VecC vb = v.conjugate();
    VecC ub = u.conjugate();
    cplx s = (u.transpose() * M_ * v).value();
    s += (u.transpose() * vb).value() + (u.transpose() * N_.transpose() * vb).value();
    s += (ub.transpose() * N_ * v).value();
    s += (ub.transpose() * M_.conjugate() * vb).value();
    return s;
}

cplx BoxField::w2c(const Insertion& a, const Insertion& b) const { return pair_from_coeff(coeff(a), coeff(b)); }

cplx BoxField::correlate(std::span<const Insertion> xs) const {
    const int n = static_cast<int>(xs.size());
    if (n == 0) return 1.0;
    const bool zm = zero_mean();
    if (zm && n % 2) return 0.0;
    std::vector<VecC> f(n);
    for (int i = 0; i < n; ++i) f[i] = coeff(xs[i]);
    std::vector<cplx> m;
    if (!zm) {
        m.resize(n);
        for (int i = 0; i < n; ++i) m[i] = 2.0 * (f[i].transpose() * alpha_).value().real();
    }
    std::vector<cplx> P(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) P[i * n + j] = pair_from_coeff(f[i], f[j]);
    return wick_sum(n, zm ? nullptr : m.data(), P.data());
}

// ---- continuum ----

cplx faddeeva_real(double x) {
    detail::gsl_quiet();
    return {std::exp(-x * x), 2.0 / std::sqrt(PI) * gsl_sf_dawson(x)};
}

ContinuumField::ContinuumField(int d, double mass, ContinuumOptions opt) : d_(d), m_(mass), opt_(opt) {
    if (d < 1 || d > 3) throw ConfigError("field.d", "spatial dimension must be 1, 2 or 3");
    if (mass < 0.0) throw ConfigError("field.mass", "mass must be non-negative");
    if (d == 1 && mass == 0.0) throw UnsupportedError("continuum: massless field in 1+1 dimensions is IR divergent");
    if (!(opt.eps > 0.0)) throw ConfigError("numerics.eps", "i-epsilon must be positive");
}

ContinuumField ContinuumField::coherent(int d, double mass, const Packet& p, ContinuumOptions opt) {
    ContinuumField f(d, mass, opt);
    f.coherent_ = true;
    f.packet_ = p;
    const GLRule& g = gauss_legendre(p.nodes);
    const double half = 6.0 * p.width;
    int total = 1;
    for (int i = 0; i < d; ++i) total *= p.nodes;
    const cplx amp = std::polar(p.amplitude, p.phase);
    for (int idx = 0; idx < total; ++idx) {
        Vec3 k{0, 0, 0};
        double w = 1.0;
        int r = idx;
        for (int ax = 0; ax < d; ++ax) {
            int j = r % p.nodes;
            r /= p.nodes;
            k[ax] = p.k0[ax] + half * g.x[j];
            w *= half * g.w[j];
        }
        double kk = 0.0, dk = 0.0;
        for (int ax = 0; ax < d; ++ax) {
            kk += k[ax] * k[ax];
            dk += (k[ax] - p.k0[ax]) * (k[ax] - p.k0[ax]);
        }
        double om = std::sqrt(kk + mass * mass);
        if (om == 0.0) throw DomainError("coherent packet samples the zero-frequency mode");
        f.pk_.push_back(k);
        f.pomega_.push_back(om);
        f.pw_.push_back(amp * std::exp(-dk / (2.0 * p.width * p.width)) * w /
                        (std::pow(2.0 * PI, d) * std::sqrt(2.0 * om)));
    }
    return f;
}

double ContinuumField::mean(const Insertion& a) const {
    if (!coherent_) return 0.0;
    cplx s = 0.0;
    for (size_t i = 0; i < pk_.size(); ++i) {
        double kx = 0.0, kk = 0.0;
        for (int ax = 0; ax < d_; ++ax) {
            kx += pk_[i][ax] * a.x[ax];
            kk += pk_[i][ax] * pk_[i][ax];
        }
        double g = a.smear ? a.smear->radial_fourier(std::sqrt(kk)) : 1.0;
        s += pw_[i] * g * std::polar(1.0, -pomega_[i] * a.t + kx);
    }
    return 2.0 * s.real();
}

namespace {

bool gaussian_or_point(const Insertion& a, int d) {
    return !a.smear || (a.smear->kind() == ProfileKind::Gaussian && a.smear->dim() == d) ||
           a.smear->kind() == ProfileKind::Delta;
}

double gauss_var(const Insertion& a) {
    return (a.smear && a.smear->kind() == ProfileKind::Gaussian) ? a.smear->width() * a.smear->width() : 0.0;
}

double gauss_pref(const Insertion& a) {
    if (!a.smear) return 1.0;
    return a.smear->radial_fourier(0.0);
}

} // namespace

cplx ContinuumField::point_point_massless3(double R, double dt) const {
    if (R == 0.0 && dt == 0.0) throw NumericGuardError("two-point function at coincident points");
    const double D = R * R - dt * dt;
    const double scale = std::max(R * R, dt * dt);
    if (std::abs(D) > 1e-10 * scale) return 1.0 / (4.0 * PI * PI * D);
    auto reg = [&](double e) {
        cplx z = cplx(dt, -e);
        return 1.0 / (4.0 * PI * PI * (R * R - z * z));
    };
    double e = opt_.eps * std::sqrt(scale);
    return 2.0 * reg(0.5 * e) - reg(e);
}

cplx ContinuumField::massless3_gauss(double R, double dt, double a, double pref) const {
    const double s = std::sqrt(a);
    const double c = pref / (4.0 * PI * PI);
    if (R < 1e-3 * s) {
        const double b = -dt;
        cplx M[6];
        M[0] = std::sqrt(PI) / (2.0 * s) * faddeeva_real(b / (2.0 * s));
        M[1] = (1.0 + I * b * M[0]) / (2.0 * a);
        for (int j = 2; j < 6; ++j) M[j] = (I * b * M[j - 1] + double(j - 1) * M[j - 2]) / (2.0 * a);
        return c * (M[1] - R * R * M[3] / 6.0 + R * R * R * R * M[5] / 120.0);
    }
    const double u1 = (R - dt) / (2.0 * s), u2 = (-R - dt) / (2.0 * s);
    cplx Ival = (std::sqrt(PI) / (2.0 * s)) * (faddeeva_real(u1) - faddeeva_real(u2)) / (2.0 * I);
    return c * Ival / R;
}

cplx ContinuumField::radial_k(const Insertion& a, const Insertion& b) const {
    const double R = spatial_distance(a.x, b.x, d_);
    const double dt = a.t - b.t;
    const bool points = (!a.smear || a.smear->is_delta()) && (!b.smear || b.smear->is_delta());
    auto Fa = [&](double k) { return a.smear ? a.smear->radial_fourier(k) : 1.0; };
    auto Fb = [&](double k) { return b.smear ? b.smear->radial_fourier(k) : 1.0; };
    // cutoff from the smearing envelopes
    double K;
    double va = gauss_var(a), vb = gauss_var(b);
    if (points) {
        K = 0.0;
    } else if ((va > 0.0 || !a.smear || a.smear->is_delta()) && (vb > 0.0 || !b.smear || b.smear->is_delta())) {
        K = std::sqrt(2.0 * -std::log(opt_.k_cut_weight) / (va + vb));
    } else {
        double wmin = 1e300;
        for (const Insertion* p : {&a, &b})
            if (p->smear && !p->smear->is_delta()) wmin = std::min(wmin, p->smear->width());
        K = 400.0 / wmin;
    }
    auto run = [&](double eps) {
        double Kc = K;
        if (eps > 0.0) Kc = std::max(Kc, -std::log(opt_.k_cut_weight) / eps);
        auto integrand = [&](double k, bool im) {
            double om = std::sqrt(k * k + m_ * m_);
            if (om == 0.0) return 0.0;
            double ang;
            if (d_ == 1) ang = 2.0 * std::cos(k * R);
            else if (d_ == 2) ang = 2.0 * PI * gsl_sf_bessel_J0(k * R) * k;
            else ang = 4.0 * PI * k * k * (k * R < 1e-8 ? 1.0 : std::sin(k * R) / (k * R));
            double pre = ang / (std::pow(2.0 * PI, d_) * 2.0 * om) * Fa(k) * Fb(k) * std::exp(-eps * om);
            return im ? -pre * std::sin(om * dt) : pre * std::cos(om * dt);
        };
        double re = 0.0, imv = 0.0;
        const int P = opt_.k_panels;
        for (int p = 0; p < P; ++p) {
            double lo = Kc * p / P, hi = Kc * (p + 1) / P;
            re += detail::integrate([&](double k) { return integrand(k, false); }, lo, hi, 1e-15, 1e-11);
            imv += detail::integrate([&](double k) { return integrand(k, true); }, lo, hi, 1e-15, 1e-11);
        }
        return cplx(re, imv);
    };
    if (!points) return run(0.0);
    if (R == 0.0 && dt == 0.0) throw NumericGuardError("two-point function at coincident points");
    double e = opt_.eps * std::max(R, std::abs(dt));
    return 2.0 * run(0.5 * e) - run(e);
}

cplx ContinuumField::w2c(const Insertion& a, const Insertion& b) const {
    if (d_ == 3 && m_ == 0.0 && gaussian_or_point(a, 3) && gaussian_or_point(b, 3)) {
        const double R = spatial_distance(a.x, b.x, 3);
        const double dt = a.t - b.t;
        const double av = 0.5 * (gauss_var(a) + gauss_var(b));
        const double pref = gauss_pref(a) * gauss_pref(b);
        if (av == 0.0) return pref * point_point_massless3(R, dt);
        return massless3_gauss(R, dt, av, pref);
    }
    return radial_k(a, b);
}

GaussianGeneralField::GaussianGeneralField(int d, PairFn w2c, MeanFn mean, double period, std::string name)
    : d_(d), w2c_(std::move(w2c)), mean_(std::move(mean)), period_(period), name_(std::move(name)) {
    if (!w2c_) throw ConfigError("field.w2", "a two-point function is required");
}

} // namespace udw
