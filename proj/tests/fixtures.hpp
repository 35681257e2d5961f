#pragma once
// Seeded random configurations shared by the property tests and the acceptance run.

#include <memory>
#include <string>

#include "oracles.hpp"
#include "udw/fieldstate.hpp"
#include "udw/perturbation.hpp"

namespace fx {

using namespace udw;

inline DetVec random_state(ref::Rng& r) { return DetVec{r.cuni(), r.cuni()}.normalized(); }

struct Config {
    std::shared_ptr<FieldState> st;
    MeasurementSpec m;
    std::string label;
};

// Box states in 1+1 (vacuum, coherent, thermal, random Gaussian) plus every fifth config a 3+1 continuum vacuum
inline Config random_config(ref::Rng& r, int i) {
    Config c;
    if (i % 5 == 4) {
        c.st = std::make_shared<ContinuumField>(ContinuumField::vacuum(3, 0.0));
        c.m.det.f = Profile::gaussian(3, r.uni(0.2, 0.5), {r.uni(-0.5, 0.5), 0.0, 0.0});
        c.label = "continuum-vacuum";
    } else {
        double mass = r.uni(0.0, 1.0) < 0.5 ? 0.0 : 0.6;
        auto modes = make_box_modes(10.0, mass, 4, mass > 0.0);
        switch (i % 5) {
        case 0: c.st = std::make_shared<BoxField>(BoxField::vacuum(modes)); break;
        case 1: {
            Eigen::VectorXcd a(modes.size());
            for (int n = 0; n < a.size(); ++n) a(n) = 0.3 * r.cuni();
            c.st = std::make_shared<BoxField>(BoxField::coherent(modes, a));
            break;
        }
        case 2: c.st = std::make_shared<BoxField>(BoxField::thermal(modes, r.uni(1.0, 3.0))); break;
        default: c.st = std::make_shared<BoxField>(BoxField::random_gaussian(modes, 100 + i)); break;
        }
        c.m.det.f = r.uni(0.0, 1.0) < 0.5 ? Profile::gaussian(1, r.uni(0.3, 0.8), {r.uni(0.0, 10.0), 0.0, 0.0})
                                          : Profile::delta(1, {r.uni(0.0, 10.0), 0.0, 0.0});
        c.label = c.st->name();
    }
    c.m.det.gap = r.uni(0.5, 2.0);
    c.m.det.coupling = r.uni(0.05, 0.2);
    c.m.det.chi = r.uni(0.0, 1.0) < 0.7 ? Profile::gaussian(r.uni(0.5, 1.2), r.uni(-0.5, 0.5))
                                        : Profile::bump(r.uni(1.0, 2.0), r.uni(-0.5, 0.5));
    c.m.psi = random_state(r);
    c.m.s = random_state(r);
    return c;
}

// a random event of the right dimension
inline Event random_event(ref::Rng& r, int d, double tlo, double thi, double xlo, double xhi) {
    Event e;
    e.d = d;
    e.t = r.uni(tlo, thi);
    for (int k = 0; k < d; ++k) e.x[k] = r.uni(xlo, xhi);
    return e;
}

// product of two series truncated at `order`
inline Series times(const Series& a, const Series& b, int order) {
    Series c;
    c.c.assign(order + 1, 0.0);
    for (int i = 0; i <= order; ++i)
        for (int j = 0; i + j <= order; ++j) c.c[i + j] += a.at(i) * b.at(j);
    return c;
}

} // namespace fx
