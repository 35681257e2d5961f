#pragma once

#include <functional>

namespace udw::detail {

// GSL aborts on error by default; we check status codes instead
void gsl_quiet();

// adaptive GL-Kronrod on [a, b]; throws NumericGuardError if GSL reports failure beyond tolerance
double integrate(const std::function<double(double)>& f, double a, double b, double epsabs, double epsrel,
                 int limit = 2000);

} // namespace udw::detail
