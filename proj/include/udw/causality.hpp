#pragma once

#include <string>
#include <utility>
#include <vector>

#include "udw/update.hpp"

namespace udw {

struct DeltaReport {
    std::vector<Event> points;
    std::vector<CausalRelation> relation;  // against the interaction region
    cplx value = 0.0;
    int order = 0;
    std::vector<std::pair<std::string, cplx>> terms;

    cplx term_sum() const;
};

// Delta_n = <E_s> (w_n^S - w_n) in the ratio form, expanded to `order` in lambda and
// split into covariance / commutator pieces (order 1) and R / S pieces (order 2)
DeltaReport delta_n(const FieldState& st, const MeasurementSpec& m, const std::vector<Event>& pts, int order,
                    const QuadOptions& qo = {});
DeltaReport delta1(const FieldState& st, const MeasurementSpec& m, const Event& x1, int order,
                   const QuadOptions& qo = {});
DeltaReport delta2(const FieldState& st, const MeasurementSpec& m, const Event& x1, const Event& x2, int order,
                   const QuadOptions& qo = {});

// lambda^2 sigma 2 Re(a_1 conj(a_2)), a_j = int chi F e^{-+i Omega t} w(x, x_j); valid for eigenstate
// s, psi, a zero-mean Gaussian state and x_1, x_2 spacelike to the interaction region
cplx delta2_eigen_closed(const FieldState& st, const MeasurementSpec& m, const Event& x1, const Event& x2,
                         const QuadOptions& qo = {});

struct MomentumOptions {
    int panels = 96;
    double cut_exponent = 40.0;  // integrate until the Gaussian transform weights fall below e^{-cut}
};

// vacuum, psi = g, s = e: lambda^2 2 Re(A_1 conj(A_2)) with
// A_j = int d^dk / ((2pi)^d 2 omega) conj(chi~(omega + Omega)) conj(F~(k)) e^{i(omega t_j - k.x_j)}
double delta2_momentum(const MeasurementSpec& m, double mass, int d, const Event& x1, const Event& x2,
                       const MomentumOptions& mo = {});
cplx momentum_amplitude(const MeasurementSpec& m, double mass, int d, const Event& xj, const MomentumOptions& mo = {});

enum class ScanKind { NonSelective, Selective };

// each tuple gives one row; NonSelective rows hold w_n^NS - w_n, Selective rows Delta_n
std::vector<DeltaReport> spacelike_scan(const FieldState& st, const MeasurementSpec& m,
                                        const std::vector<std::vector<Event>>& tuples, ScanKind kind, int order,
                                        const QuadOptions& qo = {});

} // namespace udw
