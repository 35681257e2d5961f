#include "udw/oracle.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <functional>

namespace udw {

// ---- basis ----

FockBasis FockBasis::per_mode(int N, int nmax) {
    if (N < 1 || nmax < 0) throw ConfigError("oracle.nmax", "need N >= 1 and nmax >= 0");
    FockBasis b;
    b.N_ = N;
    b.cap_ = nmax;
    b.per_mode_ = true;
    std::vector<int> occ(N, 0);
    while (true) {
        b.index_[occ] = static_cast<int>(b.states_.size());
        b.states_.push_back(occ);
        int i = 0;
        while (i < N && occ[i] == nmax) occ[i++] = 0;
        if (i == N) break;
        ++occ[i];
    }
    return b;
}

FockBasis FockBasis::total(int N, int K) {
    if (N < 1 || K < 0) throw ConfigError("oracle.total", "need N >= 1 and K >= 0");
    FockBasis b;
    b.N_ = N;
    b.cap_ = K;
    b.per_mode_ = false;
    std::vector<int> occ(N, 0);
    std::function<void(int, int)> rec = [&](int mode, int left) {
        if (mode == N) {
            b.index_[occ] = static_cast<int>(b.states_.size());
            b.states_.push_back(occ);
            return;
        }
        for (int n = 0; n <= left; ++n) {
            occ[mode] = n;
            rec(mode + 1, left - n);
        }
        occ[mode] = 0;
    };
    rec(0, K);
    return b;
}

int FockBasis::index(const std::vector<int>& occ) const {
    auto it = index_.find(occ);
    return it == index_.end() ? -1 : it->second;
}

SpMat FockBasis::lowering(int mode) const {
    std::vector<Eigen::Triplet<cplx>> tr;
    for (int i = 0; i < size(); ++i) {
        const auto& occ = states_[i];
        if (occ[mode] == 0) continue;
        auto o = occ;
        --o[mode];
        int j = index(o);
        if (j >= 0) tr.emplace_back(j, i, std::sqrt(static_cast<double>(occ[mode])));
    }
    SpMat m(size(), size());
    m.setFromTriplets(tr.begin(), tr.end());
    return m;
}

MatC Ensemble::density() const {
    if (v.empty()) return {};
    MatC r = MatC::Zero(v[0].size(), v[0].size());
    for (size_t j = 0; j < v.size(); ++j) r += p[j] * v[j] * v[j].adjoint();
    return r;
}

// ---- system ----

TruncatedSystem::TruncatedSystem(BoxModes modes, FockBasis basis, std::vector<OracleDetector> dets, OracleOptions opt)
    : modes_(std::move(modes)), basis_(std::move(basis)), dets_(std::move(dets)), opt_(opt) {
    if (basis_.modes() != modes_.size()) throw ConfigError("oracle", "Fock basis and mode list disagree");
    if (dets_.size() > 3) throw ConfigError("oracle.detectors", "at most three detectors");
    const size_t total = static_cast<size_t>(basis_.size()) << dets_.size();
    if (total > opt_.dim_cap)
        throw ConfigError("oracle", "truncated dimension " + std::to_string(total) + " exceeds the cap " +
                                        std::to_string(opt_.dim_cap));
    for (int n = 0; n < modes_.size(); ++n) {
        a_.push_back(basis_.lowering(n));
        ad_.push_back(SpMat(a_.back().adjoint()));
    }
    for (const auto& d : dets_) {
        d.spec.validate();
        if (d.spec.f.dim() != 1) throw ConfigError("detector.smearing", "box backend is 1+1 dimensional");
        VecC c = VecC::Zero(modes_.size());
        for (int n = 0; n < modes_.size(); ++n) {
            bool on = d.modes.empty() || std::find(d.modes.begin(), d.modes.end(), n) != d.modes.end();
            if (!on) continue;
            double k = modes_.k[n], w = modes_.omega[n];
            c[n] = std::polar(d.spec.f.radial_fourier(k) / std::sqrt(2.0 * modes_.L * w), k * d.spec.f.center()[0]);
        }
        det_coeff_.push_back(c);
    }
}

SpMat TruncatedSystem::field_operator(const Insertion& x) const {
    VecC f = box_coeff(modes_, x);
    SpMat P(field_dim(), field_dim());
    for (int n = 0; n < modes_.size(); ++n) P += f[n] * a_[n] + std::conj(f[n]) * ad_[n];
    return P;
}

VecC TruncatedSystem::apply_fields(std::span<const Insertion> xs, const VecC& v) const {
    VecC w = v;
    for (size_t j = xs.size(); j-- > 0;) {
        VecC f = box_coeff(modes_, xs[j]);
        VecC out = VecC::Zero(w.size());
        for (int n = 0; n < modes_.size(); ++n) out += f[n] * (a_[n] * w) + std::conj(f[n]) * (ad_[n] * w);
        w = std::move(out);
    }
    return w;
}

MatC TruncatedSystem::embed_with(const VecC& v, const std::vector<DetVec>& ds) const {
    MatC Y(field_dim(), det_dim());
    for (int c = 0; c < det_dim(); ++c) {
        cplx amp = 1.0;
        for (int j = 0; j < det_count(); ++j) amp *= ((c >> j) & 1) ? ds[j].e : ds[j].g;
        Y.col(c) = amp * v;
    }
    return Y;
}

MatC TruncatedSystem::embed(const VecC& v) const {
    std::vector<DetVec> ds;
    for (const auto& d : dets_) ds.push_back(d.psi);
    return embed_with(v, ds);
}

std::pair<double, double> TruncatedSystem::window(unsigned mask) const {
    double lo = 1e300, hi = -1e300;
    QuadConfig q;
    q.window_sigmas = opt_.window_sigmas;
    for (int j = 0; j < det_count(); ++j) {
        if (!((mask >> j) & 1u)) continue;
        auto [a, b] = dets_[j].spec.chi.time_window(q);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

void TruncatedSystem::rhs(double t, const MatC& Y, MatC& out, unsigned mask) const {
    out.setZero(Y.rows(), Y.cols());
    const int dd = det_dim();
    for (int j = 0; j < det_count(); ++j) {
        if (!((mask >> j) & 1u)) continue;
        const auto& sp = dets_[j].spec;
        if (sp.chi.is_delta()) continue;
        double c = sp.coupling * sp.chi.eval(t);
        if (c == 0.0) continue;
        SpMat Phi(field_dim(), field_dim());
        for (int n = 0; n < modes_.size(); ++n) {
            if (det_coeff_[j][n] == 0.0) continue;
            cplx f = det_coeff_[j][n] * std::polar(1.0, -modes_.omega[n] * t);
            Phi += f * a_[n] + std::conj(f) * ad_[n];
        }
        MatC Z = Phi * Y;
        const unsigned bit = 1u << j;
        const cplx up = -I * c * std::polar(1.0, sp.gap * t);     // g -> e picks e^{i Omega t}
        const cplx down = -I * c * std::polar(1.0, -sp.gap * t);  // e -> g picks e^{-i Omega t}
        for (Eigen::Index col = 0; col < Y.cols(); ++col) {
            unsigned ci = static_cast<unsigned>(col % dd);
            Eigen::Index target = col - ci + (ci ^ bit);
            out.col(target) += ((ci & bit) ? down : up) * Z.col(col);
        }
    }
}

void TruncatedSystem::kick(MatC& Y, int j, bool backward) const {
    const auto& sp = dets_[j].spec;
    const double tc = sp.chi.center_t();
    MatC Phi = MatC::Zero(field_dim(), field_dim());
    for (int n = 0; n < modes_.size(); ++n) {
        if (det_coeff_[j][n] == 0.0) continue;
        cplx f = det_coeff_[j][n] * std::polar(1.0, -modes_.omega[n] * tc);
        Phi += MatC(f * a_[n] + std::conj(f) * ad_[n]);
    }
    Eigen::SelfAdjointEigenSolver<MatC> es(Phi);
    double th = sp.coupling * sp.chi.amplitude() * (backward ? -1.0 : 1.0);
    Eigen::VectorXd ev = es.eigenvalues();
    MatC V = es.eigenvectors();
    MatC C = V * (th * ev).array().cos().matrix().asDiagonal() * V.adjoint();
    MatC S = V * (th * ev).array().sin().matrix().asDiagonal() * V.adjoint();
    const int dd = det_dim();
    const unsigned bit = 1u << j;
    MatC out(Y.rows(), Y.cols());
    for (Eigen::Index col = 0; col < Y.cols(); ++col) {
        unsigned ci = static_cast<unsigned>(col % dd);
        Eigen::Index partner = col - ci + (ci ^ bit);
        cplx m = (ci & bit) ? std::polar(1.0, sp.gap * tc) : std::polar(1.0, -sp.gap * tc);
        out.col(col) = C * Y.col(col) - I * m * (S * Y.col(partner));
    }
    Y = std::move(out);
}

void TruncatedSystem::evolve_smooth(MatC& Y, unsigned mask, double t0, double t1, EvolutionReport& rep) const {
    if (t0 == t1) return;
    // Dormand-Prince 5(4)
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                            a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                            e6 = 22.0 / 525, e7 = -1.0 / 40;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(0.05, std::abs(t1 - t0));
    MatC k1, k2, k3, k4, k5, k6, k7, y5, tmp;
    rhs(t, Y, k1, mask);
    while (dir * (t1 - t) > 0.0) {
        if (rep.steps + rep.rejected > opt_.max_steps) throw NumericGuardError("oracle: step budget exhausted");
        if (dir * (t + h - t1) > 0.0) h = t1 - t;
        tmp = Y + h * a21 * k1;
        rhs(t + c2 * h, tmp, k2, mask);
        tmp = Y + h * (a31 * k1 + a32 * k2);
        rhs(t + c3 * h, tmp, k3, mask);
        tmp = Y + h * (a41 * k1 + a42 * k2 + a43 * k3);
        rhs(t + c4 * h, tmp, k4, mask);
        tmp = Y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4);
        rhs(t + c5 * h, tmp, k5, mask);
        tmp = Y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5);
        rhs(t + h, tmp, k6, mask);
        y5 = Y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
        rhs(t + h, y5, k7, mask);
        tmp = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
        Eigen::ArrayXXd scale = opt_.atol + opt_.rtol * Y.array().abs().max(y5.array().abs());
        double err = (tmp.array().abs() / scale).maxCoeff();
        if (!std::isfinite(err)) throw NumericGuardError("oracle: non-finite state during evolution");
        if (err <= 1.0) {
            t += h;
            Y.swap(y5);
            k1.swap(k7);
            ++rep.steps;
            rep.max_error = std::max(rep.max_error, err);
        } else {
            ++rep.rejected;
        }
        double fac = err > 0.0 ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (std::abs(h) < opt_.min_step && dir * (t1 - t) > opt_.min_step)
            throw NumericGuardError("oracle: step size underflow (stiff or badly scaled problem)");
    }
}

EvolutionReport TruncatedSystem::evolve(MatC& Y, unsigned mask, bool backward) const {
    EvolutionReport rep;
    // smooth window and delta kick times
    double lo = 1e300, hi = -1e300;
    std::vector<std::pair<double, int>> kicks;
    QuadConfig q;
    q.window_sigmas = opt_.window_sigmas;
    for (int j = 0; j < det_count(); ++j) {
        if (!((mask >> j) & 1u)) continue;
        const auto& chi = dets_[j].spec.chi;
        if (chi.is_delta()) {
            kicks.emplace_back(chi.center_t(), j);
            continue;
        }
        auto [a, b] = chi.time_window(q);
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    std::sort(kicks.begin(), kicks.end());
    if (lo > hi) lo = hi = kicks.empty() ? 0.0 : kicks.front().first;
    for (const auto& k : kicks) {
        lo = std::min(lo, k.first);
        hi = std::max(hi, k.first);
    }
    if (!backward) {
        double t = lo;
        for (const auto& [tk, j] : kicks) {
            evolve_smooth(Y, mask, t, tk, rep);
            kick(Y, j, false);
            t = tk;
        }
        evolve_smooth(Y, mask, t, hi, rep);
    } else {
        double t = hi;
        for (auto it = kicks.rbegin(); it != kicks.rend(); ++it) {
            evolve_smooth(Y, mask, t, it->first, rep);
            kick(Y, it->second, true);
            t = it->first;
        }
        evolve_smooth(Y, mask, t, lo, rep);
    }
    return rep;
}

MatC TruncatedSystem::unitary(unsigned mask, EvolutionReport* rep) const {
    const int dd = det_dim(), Df = field_dim();
    const int J = Df * dd;
    MatC Y = MatC::Zero(Df, static_cast<Eigen::Index>(J) * dd);
    for (int b = 0; b < J; ++b) Y(b / dd, static_cast<Eigen::Index>(b) * dd + b % dd) = 1.0;
    auto r = evolve(Y, mask);
    if (rep) *rep = r;
    MatC U(J, J);
    for (int b = 0; b < J; ++b)
        for (int k = 0; k < Df; ++k)
            for (int c = 0; c < dd; ++c) U(k * dd + c, b) = Y(k, static_cast<Eigen::Index>(b) * dd + c);
    return U;
}

VecC TruncatedSystem::vacuum() const {
    VecC v = VecC::Zero(field_dim());
    v[basis_.index(std::vector<int>(modes_.size(), 0))] = 1.0;
    return v;
}

VecC TruncatedSystem::coherent(const VecC& alpha, double* leakage) const {
    if (alpha.size() != modes_.size()) throw ConfigError("field.alpha", "one amplitude per mode required");
    VecC v(field_dim());
    for (int i = 0; i < field_dim(); ++i) {
        cplx amp = 1.0;
        const auto& occ = basis_.occupation(i);
        for (int n = 0; n < modes_.size(); ++n) {
            double lf = std::lgamma(occ[n] + 1.0);
            amp *= std::exp(-0.5 * std::norm(alpha[n]) - 0.5 * lf) * std::pow(alpha[n], occ[n]);
        }
        v[i] = amp;
    }
    double n2 = v.squaredNorm();
    if (leakage) *leakage = 1.0 - n2;
    return v / std::sqrt(n2);
}

Ensemble TruncatedSystem::prepare(const BoxField& st) const {
    if (st.modes().size() != modes_.size()) throw ConfigError("field", "field state and oracle modes disagree");
    Ensemble e;
    if (!st.diagonal() || st.beta() > 0.0) {
        const double beta = st.beta();
        std::vector<double> w(field_dim());
        double z = 0.0, zfull = 1.0;
        for (int i = 0; i < field_dim(); ++i) {
            double en = 0.0;
            for (int n = 0; n < modes_.size(); ++n) en += modes_.omega[n] * basis_.occupation(i)[n];
            w[i] = beta > 0.0 ? std::exp(-beta * en) : (en == 0.0 ? 1.0 : 0.0);
            z += w[i];
        }
        if (beta > 0.0)
            for (int n = 0; n < modes_.size(); ++n) zfull /= -std::expm1(-beta * modes_.omega[n]);
        e.leakage = beta > 0.0 ? 1.0 - z / zfull : 0.0;
        MatC S;
        if (!st.diagonal()) {
            const MatC& A = st.squeeze_A();
            const MatC& B = st.squeeze_B();
            SpMat H(field_dim(), field_dim());
            for (int m = 0; m < modes_.size(); ++m)
                for (int n = 0; n < modes_.size(); ++n) {
                    H += A(m, n) * SpMat(ad_[m] * a_[n]);
                    H += 0.5 * B(m, n) * SpMat(ad_[m] * ad_[n]);
                    H += 0.5 * std::conj(B(m, n)) * SpMat(a_[n] * a_[m]);
                }
            S = (cplx(0.0, -1.0) * MatC(H)).exp();
        }
        for (int i = 0; i < field_dim(); ++i) {
            double p = w[i] / z;
            if (p < 1e-300) continue;
            e.p.push_back(p);
            e.v.push_back(st.diagonal() ? VecC(VecC::Unit(field_dim(), i)) : VecC(S.col(i)));
        }
        return e;
    }
    double leak = 0.0;
    e.p.push_back(1.0);
    e.v.push_back(coherent(st.alpha(), &leak));
    e.leakage = leak;
    return e;
}

MatC TruncatedSystem::m_matrix(int j, const DetVec& s) const {
    if (j < 0 || j >= det_count()) throw DomainError("m_matrix: no such detector");
    const int dd = det_dim(), Df = field_dim();
    const unsigned bit = 1u << j;
    const DetVec& psi = dets_[j].psi;
    MatC Y = MatC::Zero(Df, static_cast<Eigen::Index>(Df) * dd);
    for (int k = 0; k < Df; ++k) {
        Y(k, static_cast<Eigen::Index>(k) * dd) = psi.g;
        Y(k, static_cast<Eigen::Index>(k) * dd + bit) = psi.e;
    }
    evolve(Y, bit);
    MatC M(Df, Df);
    for (int k = 0; k < Df; ++k)
        M.col(k) = std::conj(s.g) * Y.col(static_cast<Eigen::Index>(k) * dd) +
                   std::conj(s.e) * Y.col(static_cast<Eigen::Index>(k) * dd + bit);
    return M;
}

// ---- exact quantities ----

namespace {

// evolve every ensemble member at once; block j is member j
MatC evolve_ensemble(const TruncatedSystem& sys, const Ensemble& ens) {
    const int dd = sys.det_dim();
    MatC Y(sys.field_dim(), static_cast<Eigen::Index>(dd) * ens.v.size());
    for (size_t j = 0; j < ens.v.size(); ++j) Y.middleCols(static_cast<Eigen::Index>(j) * dd, dd) = sys.embed(ens.v[j]);
    sys.evolve(Y, sys.all_mask());
    return Y;
}

void need_single(const TruncatedSystem& sys) {
    if (sys.det_count() != 1) throw DomainError("oracle: expected a single-detector system");
}

} // namespace

cplx exact_expectation(const TruncatedSystem& sys, const Ensemble& ens, std::span<const Insertion> xs) {
    cplx s = 0.0;
    for (size_t j = 0; j < ens.v.size(); ++j) s += ens.p[j] * ens.v[j].dot(sys.apply_fields(xs, ens.v[j]));
    return s;
}

ExactUpdate exact_update(const TruncatedSystem& sys, const Ensemble& ens, ExactMode mode, const DetVec& s,
                         std::span<const Insertion> xs) {
    need_single(sys);
    MatC Y = evolve_ensemble(sys, ens);
    ExactUpdate r;
    if (mode == ExactMode::NonSelective) {
        for (size_t j = 0; j < ens.v.size(); ++j)
            for (int c = 0; c < 2; ++c) {
                VecC y = Y.col(static_cast<Eigen::Index>(2 * j + c));
                r.value += ens.p[j] * y.dot(sys.apply_fields(xs, y));
            }
        return r;
    }
    cplx num = 0.0;
    double den = 0.0;
    for (size_t j = 0; j < ens.v.size(); ++j) {
        VecC m = std::conj(s.g) * Y.col(static_cast<Eigen::Index>(2 * j)) +
                 std::conj(s.e) * Y.col(static_cast<Eigen::Index>(2 * j + 1));
        num += ens.p[j] * m.dot(sys.apply_fields(xs, m));
        den += ens.p[j] * m.squaredNorm();
    }
    if (den < 1e-14) throw ZeroProbabilityError("exact_update: outcome has zero probability");
    r.value = num / den;
    r.probability = den;
    return r;
}

double exact_povm(const TruncatedSystem& sys, const Ensemble& ens, const DetVec& s) {
    need_single(sys);
    MatC Y = evolve_ensemble(sys, ens);
    double den = 0.0;
    for (size_t j = 0; j < ens.v.size(); ++j) {
        VecC m = std::conj(s.g) * Y.col(static_cast<Eigen::Index>(2 * j)) +
                 std::conj(s.e) * Y.col(static_cast<Eigen::Index>(2 * j + 1));
        den += ens.p[j] * m.squaredNorm();
    }
    return den;
}

cplx exact_delta(const TruncatedSystem& sys, const Ensemble& ens, const DetVec& s, std::span<const Insertion> xs) {
    need_single(sys);
    MatC Y = evolve_ensemble(sys, ens);
    cplx num = 0.0;
    double den = 0.0;
    for (size_t j = 0; j < ens.v.size(); ++j) {
        VecC m = std::conj(s.g) * Y.col(static_cast<Eigen::Index>(2 * j)) +
                 std::conj(s.e) * Y.col(static_cast<Eigen::Index>(2 * j + 1));
        num += ens.p[j] * m.dot(sys.apply_fields(xs, m));
        den += ens.p[j] * m.squaredNorm();
    }
    return num - exact_expectation(sys, ens, xs) * den;
}

double trace_distance(const MatC& r1, const MatC& r2) {
    MatC d = r1 - r2;
    d = 0.5 * (d + d.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<MatC> es(d, Eigen::EigenvaluesOnly);
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

double spectral_norm(const MatC& m) {
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<MatC> svd(m);
    return svd.singularValues()(0);
}

SequentialReport sequential(const TruncatedSystem& sysA, const DetVec& a, const TruncatedSystem& sysB,
                            const DetVec& b, const Ensemble& rho) {
    if (sysA.field_dim() != sysB.field_dim()) throw ConfigError("sequential", "A and B must share the field space");
    SequentialReport r;
    MatC Ma = sysA.m_matrix(0, a), Mb = sysB.m_matrix(0, b);
    MatC R = rho.density();
    MatC Ea = Ma.adjoint() * Ma, Eb = Mb.adjoint() * Mb;
    auto tr = [](const MatC& m) { return m.trace().real(); };
    r.p_a = tr(Ma * R * Ma.adjoint());
    r.p_b = tr(Mb * R * Mb.adjoint());
    if (r.p_a < 1e-14 || r.p_b < 1e-14) throw ZeroProbabilityError("sequential: zero-probability outcome");
    r.rho_A = Ma * R * Ma.adjoint() / r.p_a;
    r.rho_B = Mb * R * Mb.adjoint() / r.p_b;
    MatC AB = Mb * Ma, BA = Ma * Mb;
    r.p_ab = tr(AB * R * AB.adjoint());
    r.p_ba = tr(BA * R * BA.adjoint());
    if (r.p_ab < 1e-14 || r.p_ba < 1e-14) throw ZeroProbabilityError("sequential: zero-probability joint outcome");
    r.rho_AB = AB * R * AB.adjoint() / r.p_ab;
    r.rho_BA = BA * R * BA.adjoint() / r.p_ba;
    r.trace_distance_AB_BA = trace_distance(r.rho_AB, r.rho_BA);
    r.comm_ab = spectral_norm(Ma * Mb - Mb * Ma);
    r.comm_ab_dag = spectral_norm(Ma * Mb.adjoint() - Mb.adjoint() * Ma);
    r.conditional = tr(r.rho_A * Eb);
    r.joint_over_marginal = (R * Ea * Eb).trace().real() / r.p_a;
    r.marginal_b = tr(R * Eb);
    r.bayes_residual = std::abs(r.conditional - r.joint_over_marginal);
    // tr(rho M_a^dag [E_b, M_a]) with [E_b, M_a] = M_b^dag [M_b, M_a] + [M_b^dag, M_a] M_b
    r.bayes_bound = spectral_norm(Ma) * spectral_norm(Mb) * (r.comm_ab + r.comm_ab_dag) / r.p_a;
    return r;
}

} // namespace udw
