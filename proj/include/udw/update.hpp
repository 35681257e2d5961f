#pragma once

#include <span>
#include <vector>

#include "udw/perturbation.hpp"

namespace udw {

enum class UpdateMode { NonSelective, Selective };

// |<s|psi>| below this switches to the orthogonal-outcome expansion
inline constexpr double kOrthogonalThreshold = 1e-8;
// leading probability below this in the orthogonal branch is a zero-probability outcome
inline constexpr double kZeroProbability = 1e-14;

struct UpdateResult {
    cplx value = 0.0;
    bool selective_form = false;   // ratio form used (some point inside the causal future of the measurement)
    bool orthogonal = false;
    Series terms;                  // coefficients of lambda^r of the returned expansion
    Series numerator, denominator; // selective ratio pieces (absolute orders)
};

// points inside the causal future of the measurement event (null boundary counts)
bool any_in_future(const MeasurementSpec& m, std::span<const Insertion> X, double period, int d);

UpdateResult ns_update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, int order,
                       const QuadOptions& qo = {});

// force_ratio evaluates the ratio form regardless of where the points lie
UpdateResult sel_update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, int order,
                        bool force_ratio = false, const QuadOptions& qo = {});

UpdateResult update(const FieldState& st, const MeasurementSpec& m, std::span<const Insertion> X, UpdateMode mode,
                    int order, const QuadOptions& qo = {});

std::vector<Insertion> as_insertions(std::span<const Event> pts);

// ---- third parties ----

// A finite-dimensional party that interacts with nobody here: its state enters as a matrix factor.
// For l, m basis labels, w~_{Gamma,n}(l, m; x...) = <gamma_l|rho_Gamma|gamma_m> w_n(x...) before the update,
// and the update acts on the field factor only (non-selective or selective per region logic).
struct FiniteParty {
    Eigen::MatrixXcd rho;        // party density matrix
    InteractionRegion region;    // where the party's system is localised
};

cplx extended_update(const FieldState& st, const MeasurementSpec& m, const FiniteParty& party, int l, int mi,
                     std::span<const Insertion> X, UpdateMode mode, int order, const QuadOptions& qo = {});

} // namespace udw
