#include "udw/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "udw/common.hpp"

namespace udw {

namespace {

GLRule build_gl(int n) {
    GLRule r;
    r.x.assign(n, 0.0);
    r.w.assign(n, 0.0);
    if (n == 1) {
        r.w[0] = 2.0;
        return r;
    }
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = -z;
        r.x[n - 1 - i] = z;
        r.w[i] = w;
        r.w[n - 1 - i] = w;
    }
    if (n % 2 == 1) r.x[n / 2] = 0.0;
    return r;
}

} // namespace

const GLRule& gauss_legendre(int n) {
    if (n < 1) throw DomainError("gauss_legendre: need at least one node");
    static std::mutex mu;
    static std::map<int, GLRule> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_gl(n)).first;
    return it->second;
}

std::vector<Node> composite_rule(double a, double b, int panels, int nodes) {
    std::vector<Node> out;
    if (!(b > a)) return out;
    const GLRule& g = gauss_legendre(nodes);
    out.reserve(static_cast<size_t>(panels) * nodes);
    double h = (b - a) / panels;
    for (int p = 0; p < panels; ++p) {
        double lo = a + p * h;
        double mid = lo + 0.5 * h;
        for (int i = 0; i < nodes; ++i) out.push_back({mid + 0.5 * h * g.x[i], 0.5 * h * g.w[i]});
    }
    return out;
}

} // namespace udw
