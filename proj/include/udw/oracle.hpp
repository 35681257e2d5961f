#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <map>
#include <span>
#include <vector>

#include "udw/detector.hpp"
#include "udw/fieldstate.hpp"

namespace udw {

using SpMat = Eigen::SparseMatrix<cplx, Eigen::RowMajor>;
using VecC = Eigen::VectorXcd;
using MatC = Eigen::MatrixXcd;

// occupation-number basis selected by a per-mode cap or a cap on the total number of quanta
class FockBasis {
public:
    static FockBasis per_mode(int N, int nmax);
    static FockBasis total(int N, int K);

    int modes() const { return N_; }
    int size() const { return static_cast<int>(states_.size()); }
    const std::vector<int>& occupation(int i) const { return states_[i]; }
    int index(const std::vector<int>& occ) const;
    SpMat lowering(int mode) const;
    bool per_mode_cap() const { return per_mode_; }
    int cap() const { return cap_; }

private:
    int N_ = 0;
    int cap_ = 0;
    bool per_mode_ = true;
    std::vector<std::vector<int>> states_;
    std::map<std::vector<int>, int> index_;
};

struct OracleDetector {
    DetectorSpec spec;
    DetVec psi = DetVec::ground();
    std::vector<int> modes;  // couple only to these modes; empty means all
};

struct OracleOptions {
    double rtol = 1e-12;
    double atol = 1e-14;
    double window_sigmas = 8.5;
    double min_step = 1e-10;
    size_t max_steps = 2000000;
    size_t dim_cap = 4096;
};

struct EvolutionReport {
    size_t steps = 0;
    size_t rejected = 0;
    double max_error = 0.0;
};

// mixture sum_j p_j |v_j><v_j| on the truncated field space
struct Ensemble {
    std::vector<double> p;
    std::vector<VecC> v;
    double leakage = 0.0;
    MatC density() const;
};

// Detectors (x) box-mode Fock space. Joint states are stored as a D_f x (2^ndet * K) matrix:
// block b holds K = 1.. independent states, column b * 2^ndet + c carries detector basis index c
// (bit j of c is detector j, 0 = g, 1 = e).
class TruncatedSystem {
public:
    TruncatedSystem(BoxModes modes, FockBasis basis, std::vector<OracleDetector> dets, OracleOptions opt = {});

    int field_dim() const { return basis_.size(); }
    int det_count() const { return static_cast<int>(dets_.size()); }
    int det_dim() const { return 1 << dets_.size(); }
    const BoxModes& modes() const { return modes_; }
    const FockBasis& basis() const { return basis_; }
    const std::vector<OracleDetector>& detectors() const { return dets_; }
    const OracleOptions& options() const { return opt_; }
    unsigned all_mask() const { return (1u << dets_.size()) - 1u; }

    const SpMat& a(int n) const { return a_[n]; }
    const SpMat& adag(int n) const { return ad_[n]; }
    SpMat field_operator(const Insertion& x) const;
    // phi(x_1) ... phi(x_n) v
    VecC apply_fields(std::span<const Insertion> xs, const VecC& v) const;

    // joint state |det product> (x) v for every column of V
    MatC embed(const VecC& v) const;
    MatC embed_with(const VecC& v, const std::vector<DetVec>& det_states) const;

    // integrate i dY/dt = H_I(t) Y over the union of the active detectors' windows;
    // backward = true runs the same interval from its end to its start
    EvolutionReport evolve(MatC& Y, unsigned mask, bool backward = false) const;
    std::pair<double, double> window(unsigned mask) const;

    // full unitary on the joint space for the active detectors
    MatC unitary(unsigned mask, EvolutionReport* rep = nullptr) const;

    // field states
    Ensemble prepare(const BoxField& st) const;
    VecC vacuum() const;
    VecC coherent(const VecC& alpha, double* leakage = nullptr) const;

    // M_{s,psi} = <s|U|psi> for detector j evolved alone
    MatC m_matrix(int j, const DetVec& s) const;

private:
    void rhs(double t, const MatC& Y, MatC& out, unsigned mask) const;
    void kick(MatC& Y, int j, bool backward) const;
    void evolve_smooth(MatC& Y, unsigned mask, double t0, double t1, EvolutionReport& rep) const;

    BoxModes modes_;
    FockBasis basis_;
    std::vector<OracleDetector> dets_;
    OracleOptions opt_;
    std::vector<SpMat> a_, ad_;
    std::vector<VecC> det_coeff_;  // per detector: F^(k_n) e^{i k_n x_c} / sqrt(2 L w_n), masked
};

// exact n-point function of the initial ensemble
cplx exact_expectation(const TruncatedSystem& sys, const Ensemble& ens, std::span<const Insertion> xs);

enum class ExactMode { NonSelective, Selective };

struct ExactUpdate {
    cplx value = 0.0;
    double probability = 1.0;  // tr(rho E_s) for the selective mode
};

// single-detector system (detector 0): updated n-point function after the measurement
ExactUpdate exact_update(const TruncatedSystem& sys, const Ensemble& ens, ExactMode mode, const DetVec& s,
                         std::span<const Insertion> xs);
double exact_povm(const TruncatedSystem& sys, const Ensemble& ens, const DetVec& s);
// <M^dag X M> - <X><E>
cplx exact_delta(const TruncatedSystem& sys, const Ensemble& ens, const DetVec& s, std::span<const Insertion> xs);

struct SequentialReport {
    MatC rho_A, rho_B, rho_AB, rho_BA;
    double p_a = 0.0, p_b = 0.0, p_ab = 0.0, p_ba = 0.0;
    double trace_distance_AB_BA = 0.0;
    double comm_ab = 0.0, comm_ab_dag = 0.0;  // spectral norms of [M_a, M_b], [M_a, M_b^dag]
    double conditional = 0.0;                // tr(rho^A E_b)
    double joint_over_marginal = 0.0;        // Re tr(rho E_a E_b) / tr(rho E_a)
    double bayes_residual = 0.0;
    double bayes_bound = 0.0;
    double marginal_b = 0.0;                 // tr(rho E_b)
};

// A and B are detector 0 of their own single-detector systems over the same modes and basis
SequentialReport sequential(const TruncatedSystem& sysA, const DetVec& a, const TruncatedSystem& sysB,
                            const DetVec& b, const Ensemble& rho);

double trace_distance(const MatC& r1, const MatC& r2);
double spectral_norm(const MatC& m);

} // namespace udw
