#pragma once

#include <vector>

namespace udw {

// Gauss-Legendre nodes/weights on [-1, 1]
struct GLRule {
    std::vector<double> x, w;
};

const GLRule& gauss_legendre(int n);

// composite rule over a time window; for Gaussians the window is center +- window_sigmas*width
struct QuadConfig {
    double window_sigmas = 8.5;
    int panels = 4;
    int nodes = 16;
};

struct Node {
    double t;
    double w;
};

// plain composite GL on [a, b]
std::vector<Node> composite_rule(double a, double b, int panels, int nodes);

} // namespace udw
