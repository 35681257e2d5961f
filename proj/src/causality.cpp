#include "udw/causality.hpp"

#include <cmath>

#include "gsl_util.hpp"

namespace udw {

cplx DeltaReport::term_sum() const {
    cplx s = 0.0;
    for (const auto& [k, v] : terms) s += v;
    return s;
}

namespace {

std::vector<CausalRelation> relations(const FieldState& st, const MeasurementSpec& m, const std::vector<Event>& pts) {
    std::vector<CausalRelation> r;
    auto reg = m.interaction_region(st.period());
    for (const auto& e : pts) r.push_back(classify(e, reg));
    return r;
}

} // namespace

DeltaReport delta_n(const FieldState& st, const MeasurementSpec& m, const std::vector<Event>& pts, int order,
                    const QuadOptions& qo) {
    if (order < 1 || order > 2) throw DomainError("delta: order must be 1 or 2");
    m.validate();
    DeltaReport rep;
    rep.points = pts;
    rep.relation = relations(st, m, pts);
    rep.order = order;

    const double lam = m.det.coupling, Om = m.det.gap;
    const Profile* F = &m.det.f;
    const Vec3 xc = m.det.f.center();
    const int n = static_cast<int>(pts.size());
    std::vector<Insertion> X = as_insertions(pts);
    const cplx wX = st.correlate(X);
    const cplx sp = inner(m.s, m.psi);

    std::vector<Insertion> buf;
    auto corr = [&](std::initializer_list<int> layout, double t, double tp) {
        // layout codes: -1 phi(t), -2 phi(t'), -3 the X block
        buf.clear();
        for (int c : layout) {
            if (c == -1) buf.emplace_back(t, xc, F);
            else if (c == -2) buf.emplace_back(tp, xc, F);
            else buf.insert(buf.end(), X.begin(), X.end());
        }
        return st.correlate(buf);
    };

    cplx cov = 0.0, comm = 0.0;
    OrderedRule R1 = ordered_rule(m.det.chi, 1, qo.fine);
    for (size_t i = 0; i < R1.size(); ++i) {
        double t = R1.t[i];
        double tt[1] = {t};
        cplx z = std::conj(sp) * matrix_element(m.s, tt, m.psi, Om);
        if (z == 0.0) continue;
        cplx phiX = corr({-1, -3}, t, 0), Xphi = corr({-3, -1}, t, 0);
        cplx phi = n ? cplx(st.mean(Insertion(t, xc, F))) : cplx(1.0);
        cplx cv = n ? phiX - phi * wX : cplx(0.0);
        cov += R1.w[i] * 2.0 * z.imag() * cv;
        comm += R1.w[i] * I * z * (phiX - Xphi);
    }
    rep.terms.emplace_back("covariance", lam * cov);
    rep.terms.emplace_back("commutator", lam * comm);

    if (order >= 2) {
        cplx c1 = 0.0, c2 = 0.0, S = 0.0, St = 0.0;
        OrderedRule R2 = ordered_rule(m.det.chi, 2, qo.fine);
        for (size_t i = 0; i < R2.size(); ++i) {
            double t = R2.t[2 * i], tp = R2.t[2 * i + 1];
            double a_t[2] = {tp, t};
            double one_t[1] = {t}, one_tp[1] = {tp};
            cplx alpha = sp * matrix_element(m.psi, a_t, m.s, Om);
            cplx beta = std::conj(alpha);
            cplx gamma = matrix_element(m.psi, one_t, m.s, Om) * matrix_element(m.s, one_tp, m.psi, Om);
            double w = -R2.w[i];
            cplx pXp = corr({-1, -3, -2}, t, tp);   // <phi X phi'>
            cplx ppX = corr({-2, -1, -3}, t, tp);   // <phi' phi X>
            cplx pXq = corr({-2, -3, -1}, t, tp);   // <phi' X phi>
            cplx Xpp = corr({-3, -1, -2}, t, tp);   // <X phi phi'>
            cplx pp = corr({-1, -2}, t, tp), qp = corr({-2, -1}, t, tp);
            if (alpha != 0.0) c1 += w * alpha * (ppX - pXq);
            if (beta != 0.0) c2 += w * beta * (Xpp - pXp);
            cplx bg = beta - gamma;
            if (bg != 0.0) {
                S += w * bg * (pXp - pp * wX);
                St += w * std::conj(bg) * (pXq - qp * wX);
            }
        }
        double l2 = lam * lam;
        rep.terms.emplace_back("R-commutator-1", l2 * c1);
        rep.terms.emplace_back("R-commutator-2", l2 * c2);
        rep.terms.emplace_back("S", l2 * S);
        rep.terms.emplace_back("S-tilde", l2 * St);
    }
    rep.value = rep.term_sum();
    return rep;
}

DeltaReport delta1(const FieldState& st, const MeasurementSpec& m, const Event& x1, int order, const QuadOptions& qo) {
    return delta_n(st, m, {x1}, order, qo);
}

DeltaReport delta2(const FieldState& st, const MeasurementSpec& m, const Event& x1, const Event& x2, int order,
                   const QuadOptions& qo) {
    return delta_n(st, m, {x1, x2}, order, qo);
}

cplx delta2_eigen_closed(const FieldState& st, const MeasurementSpec& m, const Event& x1, const Event& x2,
                         const QuadOptions& qo) {
    auto is_basis = [](const DetVec& v, bool& ground) {
        if (std::abs(std::abs(v.g) - 1.0) < 1e-12 && std::abs(v.e) < 1e-12) { ground = true; return true; }
        if (std::abs(std::abs(v.e) - 1.0) < 1e-12 && std::abs(v.g) < 1e-12) { ground = false; return true; }
        return false;
    };
    bool pg = false, sg = false;
    if (!is_basis(m.psi, pg) || !is_basis(m.s, sg))
        throw DomainError("delta2_eigen_closed: s and psi must be detector eigenstates");
    if (!st.zero_mean()) throw DomainError("delta2_eigen_closed: needs a zero-mean state");
    const double sigma = (pg == sg) ? -1.0 : 1.0;
    const double sgn = pg ? -1.0 : 1.0;
    const double Om = m.det.gap, lam = m.det.coupling;
    const Vec3 xc = m.det.f.center();
    auto nodes = m.det.chi.time_nodes(qo.fine);
    auto amp = [&](const Event& xj) {
        cplx a = 0.0;
        for (const auto& nd : nodes)
            a += nd.w * std::polar(1.0, sgn * Om * nd.t) * st.w2c(Insertion(nd.t, xc, &m.det.f), Insertion(xj));
        return a;
    };
    cplx a1 = amp(x1), a2 = amp(x2);
    return sigma * lam * lam * 2.0 * (a1 * std::conj(a2)).real();
}

cplx momentum_amplitude(const MeasurementSpec& m, double mass, int d, const Event& xj, const MomentumOptions& mo) {
    const Profile& chi = m.det.chi;
    const Profile& F = m.det.f;
    const double Om = m.det.gap;
    const double R = spatial_distance(xj.x, F.center(), d);
    // cutoff: the larger k at which either Gaussian weight has dropped below e^{-cut}
    double K = 1e300;
    if (chi.kind() == ProfileKind::Gaussian) K = std::min(K, std::abs(Om) + std::sqrt(2.0 * mo.cut_exponent) / chi.width());
    if (F.kind() == ProfileKind::Gaussian) K = std::min(K, std::sqrt(2.0 * mo.cut_exponent) / F.width());
    if (!(K < 1e299)) throw UnsupportedError("momentum path needs a Gaussian switching or smearing");
    auto integrand = [&](double k, bool im) {
        double om = std::sqrt(k * k + mass * mass);
        if (om == 0.0) return 0.0;
        double ang;
        if (d == 1) ang = 2.0 * std::cos(k * R);
        else if (d == 2) ang = 2.0 * PI * k * std::cyl_bessel_j(0.0, k * R);
        else ang = 4.0 * PI * k * k * (k * R < 1e-8 ? 1.0 : std::sin(k * R) / (k * R));
        cplx v = ang / (std::pow(2.0 * PI, d) * 2.0 * om) * std::conj(chi.fourier(om + Om)) * F.radial_fourier(k) *
                 std::polar(1.0, om * xj.t);
        return im ? v.imag() : v.real();
    };
    double re = 0.0, imv = 0.0;
    for (int p = 0; p < mo.panels; ++p) {
        double lo = K * p / mo.panels, hi = K * (p + 1) / mo.panels;
        re += detail::integrate([&](double k) { return integrand(k, false); }, lo, hi, 1e-17, 1e-12);
        imv += detail::integrate([&](double k) { return integrand(k, true); }, lo, hi, 1e-17, 1e-12);
    }
    return {re, imv};
}

double delta2_momentum(const MeasurementSpec& m, double mass, int d, const Event& x1, const Event& x2,
                       const MomentumOptions& mo) {
    cplx A1 = momentum_amplitude(m, mass, d, x1, mo), A2 = momentum_amplitude(m, mass, d, x2, mo);
    double lam = m.det.coupling;
    return lam * lam * 2.0 * (A1 * std::conj(A2)).real();
}

std::vector<DeltaReport> spacelike_scan(const FieldState& st, const MeasurementSpec& m,
                                        const std::vector<std::vector<Event>>& tuples, ScanKind kind, int order,
                                        const QuadOptions& qo) {
    std::vector<DeltaReport> out;
    out.reserve(tuples.size());
    for (const auto& tup : tuples) {
        if (kind == ScanKind::Selective) {
            out.push_back(delta_n(st, m, tup, order, qo));
            continue;
        }
        DeltaReport r;
        r.points = tup;
        r.relation = relations(st, m, tup);
        r.order = order;
        auto X = as_insertions(tup);
        auto ns = ns_update(st, m, X, order, qo);
        // per-order pieces of w^NS - w
        double lp = 1.0;
        for (int k = 1; k <= order; ++k) {
            lp *= m.det.coupling;
            r.terms.emplace_back("order-" + std::to_string(k), lp * ns.terms.at(k));
        }
        r.value = r.term_sum();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace udw
