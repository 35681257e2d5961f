#pragma once

#include <Eigen/Dense>

#include <span>
#include <string>

#include "udw/common.hpp"
#include "udw/profiles.hpp"
#include "udw/spacetime.hpp"

namespace udw {

// two-level state in the (g, e) basis
struct DetVec {
    cplx g = 1.0;
    cplx e = 0.0;

    static DetVec ground() { return {1.0, 0.0}; }
    static DetVec excited() { return {0.0, 1.0}; }
    double norm() const { return std::sqrt(std::norm(g) + std::norm(e)); }
    DetVec normalized() const;
    // the unit vector orthogonal to this one (|s-bar> for an outcome |s>)
    DetVec complement() const;
    Eigen::Vector2cd vec() const { return {g, e}; }
};

cplx inner(const DetVec& a, const DetVec& b);  // <a|b>

using Mat2 = Eigen::Matrix2cd;

// mu(t) = |g><e| e^{-i Omega t} + |e><g| e^{i Omega t}
Mat2 mu(double t, double Omega);
// mu(t_1) mu(t_2) ... mu(t_N), closed form through T = sum (-1)^{n-1} t_n
Mat2 mu_product(std::span<const double> times, double Omega);
// <s| mu(t_1)...mu(t_N) |psi>; the empty product gives <s|psi>
cplx matrix_element(const DetVec& s, std::span<const double> times, const DetVec& psi, double Omega);

struct DetectorSpec {
    double gap = 1.0;
    double coupling = 0.1;
    Profile chi = Profile::gaussian(1.0);
    Profile f = Profile::delta(3);
    std::string label = "detector";

    void validate() const;
    // slab x ball bounding the interaction region at the given effective support level
    InteractionRegion region(double level = 1.0 - 1e-8, double period = 0.0) const;
};

InteractionRegion region_of(const Profile& chi, const Profile& f, double level = 1.0 - 1e-8, double period = 0.0);

} // namespace udw
