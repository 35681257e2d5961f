#pragma once

#include <memory>
#include <string>
#include <vector>

#include "udw/common.hpp"
#include "udw/quadrature.hpp"

namespace udw {

enum class ProfileKind { Gaussian, CompactBump, Indicator, Delta };

std::string to_string(ProfileKind k);

// Switching (dim 1) or smearing (dim d) profile. All kinds are isotropic about `center`.
//   Gaussian:    A exp(-|x-c|^2 / (2 w^2))
//   CompactBump: A e exp(-1 / (1 - |x-c|^2/w^2)) inside the ball, so the peak is A
//   Indicator:   A on the ball |x-c| <= w (for dim 1 the interval [c-w, c+w])
//   Delta:       A delta(x-c); integration only
class Profile {
public:
    static Profile gaussian(double width, double center = 0.0, double amplitude = 1.0);
    static Profile gaussian(int d, double width, Vec3 center = {}, double amplitude = 1.0);
    static Profile bump(double radius, double center = 0.0, double amplitude = 1.0);
    static Profile bump(int d, double radius, Vec3 center = {}, double amplitude = 1.0);
    static Profile indicator(double lo, double hi, double amplitude = 1.0);
    static Profile indicator(int d, double radius, Vec3 center = {}, double amplitude = 1.0);
    static Profile delta(double center = 0.0, double amplitude = 1.0);
    static Profile delta(int d, Vec3 center = {}, double amplitude = 1.0);

    ProfileKind kind() const { return kind_; }
    int dim() const { return dim_; }
    double width() const { return width_; }
    const Vec3& center() const { return center_; }
    double center_t() const { return center_[0]; }
    double amplitude() const { return amp_; }
    bool is_delta() const { return kind_ == ProfileKind::Delta; }

    double eval(double t) const;
    double eval(const Vec3& x) const;
    double eval_radial(double r) const;

    // chi~(omega) = int chi(t) e^{i omega t} dt  (dim 1)
    cplx fourier(double omega) const;
    // F~(k) = int F(x) e^{-i k.x} d^dx
    cplx fourier(const Vec3& k) const;
    // transform of the profile recentred at the origin; real because all kinds are even
    double radial_fourier(double k) const;

    double l1_mass() const;
    // radius enclosing `level` of the L1 mass (compact kinds ignore level)
    double support_radius(double level) const;

    // composite rule covering the profile support, weights already multiplied by the profile
    std::vector<Node> time_nodes(const QuadConfig& q) const;
    // integration interval used by time_nodes (Delta: [c, c])
    std::pair<double, double> time_window(const QuadConfig& q) const;

private:
    Profile(ProfileKind k, int dim, double w, Vec3 c, double a);
    void check() const;
    double bump_radial_transform(double k) const;

    ProfileKind kind_;
    int dim_;
    double width_;
    Vec3 center_;
    double amp_;
    struct BumpCache;
    std::shared_ptr<BumpCache> cache_;
};

} // namespace udw
