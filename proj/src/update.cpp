#include "udw/update.hpp"

#include <algorithm>
#include <cmath>

namespace udw {

std::vector<Insertion> as_insertions(std::span<const Event> pts) {
    std::vector<Insertion> xs;
    xs.reserve(pts.size());
    for (const auto& e : pts) xs.emplace_back(e);
    return xs;
}

bool any_in_future(const MeasurementSpec& m, std::span<const Insertion> X, double period, int d) {
    auto reg = m.meas_region(period);
    for (const auto& x : X) {
        if (is_future(classify(Event(x.t, x.x, d), reg))) return true;
    }
    return false;
}

UpdateResult ns_update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, int order,
                       const QuadOptions& qo) {
    if (order < 0 || order > 2) throw DomainError("ns_update: order must be 0, 1 or 2");
    m.validate();
    UpdateResult r;
    r.terms = numerator_series(st, m, X, Flavor::Trace, order, qo);
    r.value = r.terms.eval(m.det.coupling, order);
    return r;
}

UpdateResult sel_update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, int order,
                        bool force_ratio, const QuadOptions& qo) {
    if (order < 0 || order > 2) throw DomainError("sel_update: order must be 0, 1 or 2");
    m.validate();
    if (!force_ratio && !any_in_future(m, X, st.period(), st.dim())) return ns_update(st, m, X, order, qo);

    UpdateResult r;
    r.selective_form = true;
    const double lam = m.det.coupling;
    if (std::abs(inner(m.s, m.psi)) >= kOrthogonalThreshold) {
        r.denominator = povm_series(st, m, order, qo);
        r.numerator = X.empty() ? r.denominator : numerator_series(st, m, X, Flavor::Selective, order, qo);
        r.terms = series_divide(r.numerator, r.denominator, order);
        r.value = r.terms.eval(lam, order);
        return r;
    }
    // <s|psi> = 0: numerator and denominator both start at lambda^2
    r.orthogonal = true;
    r.denominator = povm_series(st, m, order + 2, qo);
    r.numerator = X.empty() ? r.denominator : numerator_series(st, m, X, Flavor::Selective, order + 2, qo);
    Series n, d;
    for (int k = 0; k <= order; ++k) {
        n.c.push_back(r.numerator.at(k + 2));
        d.c.push_back(r.denominator.at(k + 2));
    }
    if (std::abs(d.at(0)) <= kZeroProbability) throw ZeroProbabilityError("selective update: outcome has zero probability");
    r.terms = series_divide(n, d, order);
    r.value = r.terms.eval(lam, order);
    return r;
}

UpdateResult update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, UpdateMode mode,
                    int order, const QuadOptions& qo) {
    return mode == UpdateMode::NonSelective ? ns_update(st, m, X, order, qo) : sel_update(st, m, X, order, false, qo);
}

cplx extended_update(const FieldState& st, const MeasurementSpec& m, const FiniteParty& party, int l, int mi,
                     std::span<const Insertion> X, UpdateMode mode, int order, const QuadOptions& qo) {
    if (l < 0 || mi < 0 || l >= party.rho.rows() || mi >= party.rho.cols())
        throw DomainError("extended_update: basis label out of range");
    cplx r = party.rho(l, mi);
    if (X.empty() && mode == UpdateMode::NonSelective) return r;
    // the party counts as informed if any part of its region reaches the measurement's causal future
    auto mr = m.meas_region(st.period());
    double rho = spatial_distance(party.region.center, mr.center, mr.d, st.period());
    bool party_in = party.region.t_off - mr.t_on >= std::max(0.0, rho - party.region.radius - mr.radius) - 1e-12;
    bool in_p = party_in || any_in_future(m, X, st.period(), st.dim());
    if (mode == UpdateMode::NonSelective || !in_p) return r * ns_update(st, m, X, order, qo).value;
    return r * sel_update(st, m, X, order, true, qo).value;
}

} // namespace udw
