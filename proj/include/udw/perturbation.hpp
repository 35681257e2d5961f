#pragma once

#include <optional>
#include <span>
#include <vector>

#include "udw/detector.hpp"
#include "udw/fieldstate.hpp"
#include "udw/quadrature.hpp"

namespace udw {

struct MeasurementSpec {
    DetectorSpec det;
    DetVec psi = DetVec::ground();
    DetVec s = DetVec::excited();
    // where the projective measurement happens; default {t_off} x supp F
    std::optional<InteractionRegion> measurement_region;
    double support_level = 1.0 - 1e-8;

    void validate() const;
    InteractionRegion interaction_region(double period = 0.0) const;
    InteractionRegion meas_region(double period = 0.0) const;
    MeasurementSpec with_outcome(const DetVec& outcome) const;
    DetVec sbar() const { return s.complement(); }
};

// fine rule up to total order 3, coarse rule for the order 4 pieces of the orthogonal
// branch (those only enter multiplied by lambda^2 relative to the leading term)
struct QuadOptions {
    QuadConfig fine{8.5, 4, 16};
    QuadConfig coarse{8.0, 3, 16};
};

// nested rule for t_1 > t_2 > ... > t_k; weights include chi(t_1)...chi(t_k)
struct OrderedRule {
    int k = 0;
    std::vector<double> t;  // size() * k, row major
    std::vector<double> w;
    size_t size() const { return w.size(); }
    const double* tuple(size_t i) const { return t.data() + i * k; }
};

OrderedRule ordered_rule(const Profile& chi, int k, const QuadConfig& q);

// coefficients of lambda^k
struct Series {
    std::vector<cplx> c;
    cplx at(size_t k) const { return k < c.size() ? c[k] : cplx(0.0); }
    cplx eval(double lambda, int order) const;
};

// ratio of two series truncated at `order` (den[0] must be non-zero)
Series series_divide(const Series& num, const Series& den, int order);

enum class Flavor {
    Selective,  // <M_s^dag(p) X M_s(q)>
    Trace       // tr_d over the detector (non-selective numerator)
};

// i^p (-i)^q int conj(<s|mu..|psi>) <s|mu..|psi> w(y_p..y_1, X, z_1..z_q), lambda stripped.
// Trace flavour replaces the detector factor with <psi|mu(y_p)..mu(y_1) mu(z_1)..mu(z_q)|psi>.
cplx pq_term(const FieldState& st, const MeasurementSpec& m, int p, int q, std::span<const Insertion> X,
             Flavor fl, const QuadOptions& qo = {});

// sum over p + q = k for k = 0..kmax (p, q <= 3)
Series numerator_series(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, Flavor fl,
                        int kmax, const QuadOptions& qo = {});

inline Series povm_series(const FieldState& st, const MeasurementSpec& m, int kmax, const QuadOptions& qo = {}) {
    return numerator_series(st, m, {}, Flavor::Selective, kmax, qo);
}

// kernel view of M_{s,psi}: c0, K1(t, x) and K2(t, x, t', x') for pointwise-defined profiles
struct MKernels {
    cplx c0;
    const MeasurementSpec* spec;
    cplx K1(double t, const Vec3& x) const;
    cplx K2(double t, const Vec3& x, double tp, const Vec3& xp) const;
};

MKernels build_kernels(const MeasurementSpec& m);

// <E_{s,psi}> up to the given order (0, 1 or 2)
double povm_expectation(const FieldState& st, const MeasurementSpec& m, int order, const QuadOptions& qo = {});
double completeness_defect(const FieldState& st, const MeasurementSpec& m, int order, const QuadOptions& qo = {});

// imaginary residue allowed on a real expectation value before it counts as a bug
inline constexpr double kImagTolerance = 1e-10;

} // namespace udw
