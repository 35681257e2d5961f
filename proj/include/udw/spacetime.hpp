#pragma once

#include <initializer_list>
#include <string>

#include "udw/common.hpp"

namespace udw {

struct Event {
    double t = 0.0;
    Vec3 x{0.0, 0.0, 0.0};
    int d = 3;

    Event() = default;
    Event(double t_, Vec3 x_, int d_) : t(t_), x(x_), d(d_) {}
    // Event(t, {x, y, z}); spatial dimension taken from the list length
    Event(double t_, std::initializer_list<double> xs);
};

// periodic > 0 means the spatial axes wrap with that length (box backend)
double spatial_distance(const Vec3& a, const Vec3& b, int d, double period = 0.0);

// eta(a-b, a-b) with signature (-,+,+,+)
double interval(const Event& a, const Event& b, double period = 0.0);

enum class CausalRelation { Spacelike, InFuture, InPast, BoundaryNullFuture, BoundaryNullPast };

std::string to_string(CausalRelation r);

inline bool is_future(CausalRelation r) {
    return r == CausalRelation::InFuture || r == CausalRelation::BoundaryNullFuture;
}
inline bool is_causal(CausalRelation r) { return r != CausalRelation::Spacelike; }

struct InteractionRegion {
    double t_on = 0.0;
    double t_off = 0.0;
    Vec3 center{0.0, 0.0, 0.0};
    double radius = 0.0;
    double level = 1.0;
    int d = 3;
    double period = 0.0;

    void validate() const;
};

// slab [t_on, t_off] x ball(center, radius), null boundary included in J+/J-
CausalRelation classify(const Event& a, const InteractionRegion& r, double tol = 1e-12);

// true if no point of region a is causally related to any point of region b
bool regions_spacelike(const InteractionRegion& a, const InteractionRegion& b, double tol = 1e-12);

} // namespace udw
