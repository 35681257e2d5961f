#include "udw/spacetime.hpp"

#include <algorithm>
#include <cmath>

namespace udw {

Event::Event(double t_, std::initializer_list<double> xs) : t(t_), d(static_cast<int>(xs.size())) {
    if (d < 1 || d > 3) throw DomainError("Event: spatial dimension must be 1, 2 or 3");
    std::copy(xs.begin(), xs.end(), x.begin());
}

double spatial_distance(const Vec3& a, const Vec3& b, int d, double period) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) {
        double dx = a[i] - b[i];
        if (period > 0.0) dx -= period * std::round(dx / period);
        s += dx * dx;
    }
    return std::sqrt(s);
}

double interval(const Event& a, const Event& b, double period) {
    if (a.d != b.d) throw DomainError("interval: dimension mismatch");
    if (!std::isfinite(a.t) || !std::isfinite(b.t)) throw DomainError("interval: non-finite time");
    double r = spatial_distance(a.x, b.x, a.d, period);
    double dt = a.t - b.t;
    return -dt * dt + r * r;
}

std::string to_string(CausalRelation r) {
    switch (r) {
    case CausalRelation::Spacelike: return "spacelike";
    case CausalRelation::InFuture: return "future";
    case CausalRelation::InPast: return "past";
    case CausalRelation::BoundaryNullFuture: return "null-future";
    case CausalRelation::BoundaryNullPast: return "null-past";
    }
    return "?";
}

void InteractionRegion::validate() const {
    if (!(t_on <= t_off)) throw DomainError("InteractionRegion: t_on > t_off");
    if (!(radius >= 0.0)) throw DomainError("InteractionRegion: negative radius");
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("InteractionRegion: level outside (0,1]");
    if (d < 1 || d > 3) throw DomainError("InteractionRegion: bad dimension");
}

CausalRelation classify(const Event& a, const InteractionRegion& r, double tol) {
    if (a.d != r.d) throw DomainError("classify: dimension mismatch");
    double rho = spatial_distance(a.x, r.center, r.d, r.period);
    double gap = std::max(0.0, rho - r.radius);
    double df = (a.t - r.t_on) - gap;
    double dp = (r.t_off - a.t) - gap;
    bool fut = df >= -tol;
    bool past = dp >= -tol;
    if (fut && past) {
        // inside the slab's own causal hull: decide by the temporal midpoint
        bool upper = a.t >= 0.5 * (r.t_on + r.t_off);
        if (upper) return df > tol ? CausalRelation::InFuture : CausalRelation::BoundaryNullFuture;
        return dp > tol ? CausalRelation::InPast : CausalRelation::BoundaryNullPast;
    }
    if (fut) return df > tol ? CausalRelation::InFuture : CausalRelation::BoundaryNullFuture;
    if (past) return dp > tol ? CausalRelation::InPast : CausalRelation::BoundaryNullPast;
    return CausalRelation::Spacelike;
}

bool regions_spacelike(const InteractionRegion& a, const InteractionRegion& b, double tol) {
    if (a.d != b.d) throw DomainError("regions_spacelike: dimension mismatch");
    double period = std::max(a.period, b.period);
    double rho = spatial_distance(a.center, b.center, a.d, period);
    double gap = rho - a.radius - b.radius;
    double dt = std::max(a.t_off - b.t_on, b.t_off - a.t_on);
    return gap - dt > tol;
}

} // namespace udw
