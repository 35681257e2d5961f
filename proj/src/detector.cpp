#include "udw/detector.hpp"

#include <cmath>

namespace udw {

DetVec DetVec::normalized() const {
    double n = norm();
    if (!(n > 0.0)) throw DomainError("DetVec: zero vector");
    return {g / n, e / n};
}

DetVec DetVec::complement() const {
    DetVec u = normalized();
    return {-std::conj(u.e), std::conj(u.g)};
}

cplx inner(const DetVec& a, const DetVec& b) { return std::conj(a.g) * b.g + std::conj(a.e) * b.e; }

Mat2 mu(double t, double Omega) {
    Mat2 m;
    m << 0.0, std::polar(1.0, -Omega * t), std::polar(1.0, Omega * t), 0.0;
    return m;
}

Mat2 mu_product(std::span<const double> times, double Omega) {
    if (times.empty()) throw DomainError("mu_product: empty time sequence");
    double T = 0.0;
    for (size_t n = 0; n < times.size(); ++n) T += (n % 2 == 0) ? times[n] : -times[n];
    const cplx lo = std::polar(1.0, -Omega * T), hi = std::polar(1.0, Omega * T);
    Mat2 m = Mat2::Zero();
    if (times.size() % 2) {
        m(0, 1) = lo;
        m(1, 0) = hi;
    } else {
        m(0, 0) = lo;
        m(1, 1) = hi;
    }
    return m;
}

cplx matrix_element(const DetVec& s, std::span<const double> times, const DetVec& psi, double Omega) {
    if (times.empty()) return inner(s, psi);
    double T = 0.0;
    for (size_t n = 0; n < times.size(); ++n) T += (n % 2 == 0) ? times[n] : -times[n];
    const cplx lo = std::polar(1.0, -Omega * T), hi = std::polar(1.0, Omega * T);
    if (times.size() % 2) return std::conj(s.g) * lo * psi.e + std::conj(s.e) * hi * psi.g;
    return std::conj(s.g) * lo * psi.g + std::conj(s.e) * hi * psi.e;
}

void DetectorSpec::validate() const {
    if (!(coupling >= 0.0)) throw ConfigError("detector.coupling", "coupling must be non-negative");
    if (!std::isfinite(gap)) throw ConfigError("detector.gap", "gap must be finite");
    if (chi.dim() != 1) throw ConfigError("detector.switching", "switching profile must be one-dimensional");
}

InteractionRegion region_of(const Profile& chi, const Profile& f, double level, double period) {
    if (chi.dim() != 1) throw DomainError("region_of: switching must be one-dimensional");
    InteractionRegion r;
    double rt = chi.support_radius(level);
    r.t_on = chi.center_t() - rt;
    r.t_off = chi.center_t() + rt;
    r.center = f.center();
    r.radius = f.support_radius(level);
    r.d = f.dim();
    bool compact = chi.kind() != ProfileKind::Gaussian && f.kind() != ProfileKind::Gaussian;
    r.level = compact ? 1.0 : level;
    r.period = period;
    return r;
}

InteractionRegion DetectorSpec::region(double level, double period) const { return region_of(chi, f, level, period); }

} // namespace udw
