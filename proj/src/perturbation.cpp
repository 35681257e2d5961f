#include "udw/perturbation.hpp"

#include <cmath>
#include <iostream>

namespace udw {

void MeasurementSpec::validate() const {
    det.validate();
    if (std::abs(psi.norm() - 1.0) > 1e-10) throw ConfigError("psi", "detector state must be normalised");
    if (std::abs(s.norm() - 1.0) > 1e-10) throw ConfigError("s", "outcome state must be normalised");
    if (measurement_region) {
        measurement_region->validate();
        auto reg = interaction_region(measurement_region->period);
        if (measurement_region->t_on < reg.t_off - 1e-12)
            throw ConfigError("measurement.time", "projective measurement must happen after the switching ends");
    }
}

InteractionRegion MeasurementSpec::interaction_region(double period) const {
    return det.region(support_level, period);
}

InteractionRegion MeasurementSpec::meas_region(double period) const {
    if (measurement_region) {
        auto r = *measurement_region;
        if (period > 0.0) r.period = period;
        return r;
    }
    auto r = interaction_region(period);
    r.t_on = r.t_off;
    return r;
}

MeasurementSpec MeasurementSpec::with_outcome(const DetVec& outcome) const {
    MeasurementSpec m = *this;
    m.s = outcome;
    return m;
}

// ---- rules ----

namespace {

struct PanelGrid {
    double a, b;
    int panels;
    const GLRule* gl;
    const Profile* chi;

    // composite nodes on [a, upper], weights times chi
    void restricted(double upper, std::vector<Node>& out) const {
        out.clear();
        double h = (b - a) / panels;
        for (int p = 0; p < panels; ++p) {
            double lo = a + p * h;
            if (lo >= upper) break;
            double hi = std::min(lo + h, upper);
            double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            for (size_t i = 0; i < gl->x.size(); ++i) {
                double t = mid + half * gl->x[i];
                out.push_back({t, half * gl->w[i] * chi->eval(t)});
            }
        }
    }
};

void nest(const PanelGrid& g, int depth, int k, double upper, std::vector<double>& prefix, double w,
          OrderedRule& out) {
    std::vector<Node> nodes;
    g.restricted(upper, nodes);
    for (const auto& n : nodes) {
        prefix.push_back(n.t);
        if (depth + 1 == k) {
            out.t.insert(out.t.end(), prefix.begin(), prefix.end());
            out.w.push_back(w * n.w);
        } else {
            nest(g, depth + 1, k, n.t, prefix, w * n.w, out);
        }
        prefix.pop_back();
    }
}

} // namespace

OrderedRule ordered_rule(const Profile& chi, int k, const QuadConfig& q) {
    OrderedRule r;
    r.k = k;
    if (k < 0) throw DomainError("ordered_rule: negative order");
    if (k == 0) {
        r.w.push_back(1.0);
        return r;
    }
    if (chi.is_delta()) {
        double f = 1.0;
        for (int i = 2; i <= k; ++i) f *= i;
        r.t.assign(k, chi.center_t());
        r.w.push_back(std::pow(chi.amplitude(), k) / f);
        return r;
    }
    auto [a, b] = chi.time_window(q);
    PanelGrid g{a, b, q.panels, &gauss_legendre(q.nodes), &chi};
    std::vector<double> prefix;
    nest(g, 0, k, b, prefix, 1.0, r);
    return r;
}

cplx Series::eval(double lambda, int order) const {
    cplx s = 0.0;
    double lp = 1.0;
    for (int k = 0; k <= order; ++k) {
        s += at(k) * lp;
        lp *= lambda;
    }
    return s;
}

Series series_divide(const Series& num, const Series& den, int order) {
    if (std::abs(den.at(0)) == 0.0) throw ZeroProbabilityError("series_divide: vanishing leading denominator");
    Series r;
    r.c.resize(order + 1);
    for (int k = 0; k <= order; ++k) {
        cplx acc = num.at(k);
        for (int j = 1; j <= k; ++j) acc -= den.at(j) * r.c[k - j];
        r.c[k] = acc / den.at(0);
    }
    return r;
}

// ---- generic (p, q) term ----

cplx pq_term(const FieldState& st, const MeasurementSpec& m, int p, int q, std::span<const Insertion> X, Flavor fl,
             const QuadOptions& qo) {
    if (p < 0 || q < 0 || p > 3 || q > 3) throw DomainError("pq_term: p, q must be in 0..3");
    const QuadConfig& cfg = (p + q >= 4) ? qo.coarse : qo.fine;
    const Profile& chi = m.det.chi;
    const Profile* F = &m.det.f;
    const Vec3 xc = m.det.f.center();
    const double Om = m.det.gap;
    const int nX = static_cast<int>(X.size());
    const int n = p + nX + q;

    std::vector<Insertion> buf(n);
    for (int i = 0; i < nX; ++i) buf[p + i] = X[i];

    cplx pref = 1.0;
    for (int i = 0; i < p; ++i) pref *= I;
    for (int i = 0; i < q; ++i) pref *= -I;

    std::vector<double> times(p + q);
    auto detector_factor = [&](const double* y, const double* z) -> cplx {
        if (fl == Flavor::Selective) {
            cplx left = std::conj(matrix_element(m.s, std::span<const double>(y, p), m.psi, Om));
            if (left == 0.0) return 0.0;
            return left * matrix_element(m.s, std::span<const double>(z, q), m.psi, Om);
        }
        for (int i = 0; i < p; ++i) times[i] = y[p - 1 - i];
        for (int i = 0; i < q; ++i) times[p + i] = z[i];
        return matrix_element(m.psi, times, m.psi, Om);
    };
    auto field = [&](const double* y, const double* z) {
        for (int i = 0; i < p; ++i) buf[i] = Insertion(y[p - 1 - i], xc, F);
        for (int i = 0; i < q; ++i) buf[p + nX + i] = Insertion(z[i], xc, F);
        return st.correlate(buf);
    };

    cplx sum = 0.0;
    if (p == 1 && q == 1) {
        // ordered rule plus its transpose; this keeps <E_s> + <E_sbar> = 1 exact to roundoff
        OrderedRule R = ordered_rule(chi, 2, cfg);
        for (size_t i = 0; i < R.size(); ++i) {
            const double* tt = R.tuple(i);
            for (int sw = 0; sw < 2; ++sw) {
                const double* y = tt + sw;
                const double* z = tt + (1 - sw);
                cplx d = detector_factor(y, z);
                if (d == 0.0) continue;
                sum += R.w[i] * d * field(y, z);
            }
        }
        return pref * sum;
    }
    OrderedRule Ry = ordered_rule(chi, p, cfg);
    OrderedRule Rz = ordered_rule(chi, q, cfg);
    for (size_t i = 0; i < Ry.size(); ++i) {
        const double* y = Ry.tuple(i);
        for (size_t j = 0; j < Rz.size(); ++j) {
            const double* z = Rz.tuple(j);
            cplx d = detector_factor(y, z);
            if (d == 0.0) continue;
            sum += Ry.w[i] * Rz.w[j] * d * field(y, z);
        }
    }
    return pref * sum;
}

Series numerator_series(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, Flavor fl,
                        int kmax, const QuadOptions& qo) {
    if (kmax < 0 || kmax > 6) throw DomainError("numerator_series: order out of range");
    Series s;
    s.c.assign(kmax + 1, 0.0);
    for (int k = 0; k <= kmax; ++k)
        for (int p = std::max(0, k - 3); p <= std::min(3, k); ++p) s.c[k] += pq_term(st, m, p, k - p, X, fl, qo);
    return s;
}

// ---- kernels ----

cplx MKernels::K1(double t, const Vec3& x) const {
    const auto& d = spec->det;
    double tt[1] = {t};
    return -I * d.chi.eval(t) * d.f.eval(x) * matrix_element(spec->s, tt, spec->psi, d.gap);
}

cplx MKernels::K2(double t, const Vec3& x, double tp, const Vec3& xp) const {
    const auto& d = spec->det;
    double theta = t > tp ? 1.0 : (t == tp ? 0.5 : 0.0);
    if (theta == 0.0) return 0.0;
    double tt[2] = {t, tp};
    return -theta * d.chi.eval(t) * d.chi.eval(tp) * d.f.eval(x) * d.f.eval(xp) *
           matrix_element(spec->s, tt, spec->psi, d.gap);
}

MKernels build_kernels(const MeasurementSpec& m) {
    m.validate();
    return {inner(m.s, m.psi), &m};
}

// ---- POVM ----

namespace {

cplx povm_value(const FieldState& st, const MeasurementSpec& m, int order, const QuadOptions& qo, Series* out) {
    if (order < 0 || order > 2) throw DomainError("povm: order must be 0, 1 or 2");
    Series s = povm_series(st, m, order, qo);
    if (out) *out = s;
    return s.eval(m.det.coupling, order);
}

} // namespace

double povm_expectation(const FieldState& st, const MeasurementSpec& m, int order, const QuadOptions& qo) {
    m.validate();
    Series s;
    cplx v = povm_value(st, m, order, qo, &s);
    if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, std::abs(v.real())))
        throw NumericGuardError("povm_expectation: imaginary residue " + std::to_string(v.imag()));
    if (v.real() < -1e-10) throw PerturbativeValidityError("povm_expectation: negative probability, coupling too large");
    double lam = m.det.coupling;
    if (order >= 2 && std::abs(s.at(0)) > 0.0 && lam * lam * std::abs(s.at(2)) > 0.1 * std::abs(s.at(0)))
        std::cerr << "warning: second-order POVM term exceeds 10% of the leading term (lambda = " << lam << ")\n";
    return v.real();
}

double completeness_defect(const FieldState& st, const MeasurementSpec& m, int order, const QuadOptions& qo) {
    m.validate();
    cplx a = povm_value(st, m, order, qo, nullptr);
    cplx b = povm_value(st, m.with_outcome(m.sbar()), order, qo, nullptr);
    return std::abs(a + b - 1.0);
}

} // namespace udw
