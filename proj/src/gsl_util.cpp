#include "gsl_util.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>

#include <memory>
#include <mutex>
#include <string>

#include "udw/common.hpp"

namespace udw::detail {

void gsl_quiet() {
    static std::once_flag once;
    std::call_once(once, [] { gsl_set_error_handler_off(); });
}

double integrate(const std::function<double(double)>& f, double a, double b, double epsabs, double epsrel,
                 int limit) {
    gsl_quiet();
    std::unique_ptr<gsl_integration_workspace, decltype(&gsl_integration_workspace_free)> ws(
        gsl_integration_workspace_alloc(limit), &gsl_integration_workspace_free);
    gsl_function F;
    F.function = [](double x, void* p) { return (*static_cast<const std::function<double(double)>*>(p))(x); };
    F.params = const_cast<std::function<double(double)>*>(&f);
    double result = 0.0, err = 0.0;
    int status = gsl_integration_qag(&F, a, b, epsabs, epsrel, limit, GSL_INTEG_GAUSS61, ws.get(), &result, &err);
    // roundoff-limited results are still fine at these tolerances; anything else is not
    if (status != GSL_SUCCESS && status != GSL_EROUND && err > 1e3 * std::max(epsabs, epsrel * std::abs(result)))
        throw NumericGuardError(std::string("quadrature failed: ") + gsl_strerror(status));
    return result;
}

} // namespace udw::detail
