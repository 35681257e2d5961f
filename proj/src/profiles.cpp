#include "udw/profiles.hpp"

#include <gsl/gsl_cdf.h>
#include <gsl/gsl_sf_bessel.h>

#include <cmath>
#include <map>
#include <mutex>

#include "gsl_util.hpp"

namespace udw {

struct Profile::BumpCache {
    std::mutex mu;
    std::map<double, double> values;
};

std::string to_string(ProfileKind k) {
    switch (k) {
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::CompactBump: return "bump";
    case ProfileKind::Indicator: return "indicator";
    case ProfileKind::Delta: return "delta";
    }
    return "?";
}

Profile::Profile(ProfileKind k, int dim, double w, Vec3 c, double a)
    : kind_(k), dim_(dim), width_(w), center_(c), amp_(a) {
    check();
    if (k == ProfileKind::CompactBump) cache_ = std::make_shared<BumpCache>();
}

void Profile::check() const {
    if (dim_ < 1 || dim_ > 3) throw DomainError("Profile: dimension must be 1..3");
    if (!(amp_ > 0.0) || !std::isfinite(amp_)) throw DomainError("Profile: amplitude must be positive");
    if (kind_ != ProfileKind::Delta && !(width_ > 0.0)) throw DomainError("Profile: width must be positive");
}

Profile Profile::gaussian(double width, double center, double amplitude) {
    return Profile(ProfileKind::Gaussian, 1, width, {center, 0, 0}, amplitude);
}
Profile Profile::gaussian(int d, double width, Vec3 center, double amplitude) {
    return Profile(ProfileKind::Gaussian, d, width, center, amplitude);
}
Profile Profile::bump(double radius, double center, double amplitude) {
    return Profile(ProfileKind::CompactBump, 1, radius, {center, 0, 0}, amplitude);
}
Profile Profile::bump(int d, double radius, Vec3 center, double amplitude) {
    return Profile(ProfileKind::CompactBump, d, radius, center, amplitude);
}
Profile Profile::indicator(double lo, double hi, double amplitude) {
    if (!(hi > lo)) throw DomainError("Profile::indicator: empty interval");
    return Profile(ProfileKind::Indicator, 1, 0.5 * (hi - lo), {0.5 * (hi + lo), 0, 0}, amplitude);
}
Profile Profile::indicator(int d, double radius, Vec3 center, double amplitude) {
    return Profile(ProfileKind::Indicator, d, radius, center, amplitude);
}
Profile Profile::delta(double center, double amplitude) {
    return Profile(ProfileKind::Delta, 1, 0.0, {center, 0, 0}, amplitude);
}
Profile Profile::delta(int d, Vec3 center, double amplitude) {
    return Profile(ProfileKind::Delta, d, 0.0, center, amplitude);
}

double Profile::eval_radial(double r) const {
    switch (kind_) {
    case ProfileKind::Gaussian: return amp_ * std::exp(-r * r / (2.0 * width_ * width_));
    case ProfileKind::CompactBump: {
        double u = r / width_;
        if (u >= 1.0) return 0.0;
        return amp_ * std::exp(1.0 - 1.0 / (1.0 - u * u));
    }
    case ProfileKind::Indicator: return r <= width_ ? amp_ : 0.0;
    case ProfileKind::Delta: break;
    }
    throw DomainError("Profile: a delta profile cannot be evaluated pointwise");
}

double Profile::eval(double t) const {
    if (dim_ != 1) throw DomainError("Profile::eval(t) on a spatial profile");
    return eval_radial(std::abs(t - center_[0]));
}

double Profile::eval(const Vec3& x) const {
    double s = 0.0;
    for (int i = 0; i < dim_; ++i) s += (x[i] - center_[i]) * (x[i] - center_[i]);
    return eval_radial(std::sqrt(s));
}

double Profile::bump_radial_transform(double k) const {
    k = std::abs(k);
    {
        std::lock_guard lock(cache_->mu);
        auto it = cache_->values.find(k);
        if (it != cache_->values.end()) return it->second;
    }
    const double R = width_;
    const int d = dim_;
    auto f = [&](double r) {
        double v = eval_radial(r);
        if (d == 1) return 2.0 * v * std::cos(k * r);
        if (d == 2) return 2.0 * PI * v * gsl_sf_bessel_J0(k * r) * r;
        double kr = k * r;
        double sinc = kr < 1e-4 ? 1.0 - kr * kr / 6.0 : std::sin(kr) / kr;
        return 4.0 * PI * v * sinc * r * r;
    };
    double scale = amp_ * std::pow(R, d);
    double val = detail::integrate(f, 0.0, R, 1e-15 * scale, 1e-12);
    std::lock_guard lock(cache_->mu);
    cache_->values.emplace(k, val);
    return val;
}

double Profile::radial_fourier(double k) const {
    k = std::abs(k);
    const double w = width_;
    switch (kind_) {
    case ProfileKind::Delta: return amp_;
    case ProfileKind::Gaussian:
        return amp_ * std::pow(2.0 * PI * w * w, 0.5 * dim_) * std::exp(-0.5 * w * w * k * k);
    case ProfileKind::Indicator: {
        double x = k * w;
        if (dim_ == 1) return amp_ * (x < 1e-4 ? 2.0 * w * (1.0 - x * x / 6.0) : 2.0 * std::sin(x) / k);
        if (dim_ == 2) return amp_ * PI * w * w * (x < 1e-4 ? 1.0 - x * x / 8.0 : 2.0 * gsl_sf_bessel_J1(x) / x);
        double g = x < 1e-3 ? 1.0 / 3.0 - x * x / 30.0 : (std::sin(x) - x * std::cos(x)) / (x * x * x);
        return amp_ * 4.0 * PI * w * w * w * g;
    }
    case ProfileKind::CompactBump: return bump_radial_transform(k);
    }
    return 0.0;
}

cplx Profile::fourier(double omega) const {
    if (dim_ != 1) throw DomainError("Profile::fourier(omega) on a spatial profile");
    return std::polar(1.0, omega * center_[0]) * radial_fourier(omega);
}

cplx Profile::fourier(const Vec3& k) const {
    double kk = 0.0, kc = 0.0;
    for (int i = 0; i < dim_; ++i) {
        kk += k[i] * k[i];
        kc += k[i] * center_[i];
    }
    return std::polar(1.0, -kc) * radial_fourier(std::sqrt(kk));
}

double Profile::l1_mass() const { return radial_fourier(0.0); }

double Profile::support_radius(double level) const {
    if (!(level > 0.0 && level <= 1.0)) throw DomainError("support_radius: level outside (0,1]");
    switch (kind_) {
    case ProfileKind::Delta: return 0.0;
    case ProfileKind::Indicator:
    case ProfileKind::CompactBump: return width_;
    case ProfileKind::Gaussian: {
        if (level >= 1.0) throw DomainError("support_radius: a Gaussian has no finite support at level 1");
        detail::gsl_quiet();
        return width_ * std::sqrt(gsl_cdf_chisq_Qinv(1.0 - level, dim_));
    }
    }
    return 0.0;
}

std::pair<double, double> Profile::time_window(const QuadConfig& q) const {
    double c = center_[0];
    switch (kind_) {
    case ProfileKind::Delta: return {c, c};
    case ProfileKind::Gaussian: return {c - q.window_sigmas * width_, c + q.window_sigmas * width_};
    default: return {c - width_, c + width_};
    }
}

std::vector<Node> Profile::time_nodes(const QuadConfig& q) const {
    if (dim_ != 1) throw DomainError("time_nodes on a spatial profile");
    if (kind_ == ProfileKind::Delta) return {{center_[0], amp_}};
    auto [a, b] = time_window(q);
    auto nodes = composite_rule(a, b, q.panels, q.nodes);
    for (auto& n : nodes) n.w *= eval(n.t);
    return nodes;
}

} // namespace udw
