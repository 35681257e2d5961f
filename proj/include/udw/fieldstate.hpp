#pragma once

#include <Eigen/Dense>

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "udw/common.hpp"
#include "udw/profiles.hpp"
#include "udw/spacetime.hpp"

namespace udw {

// phi(t, x) for a point, or int d^dx F(x) phi(t, x) when smear is set (F centred at x)
struct Insertion {
    double t = 0.0;
    Vec3 x{0.0, 0.0, 0.0};
    const Profile* smear = nullptr;

    Insertion() = default;
    Insertion(double t_, Vec3 x_, const Profile* s = nullptr) : t(t_), x(x_), smear(s) {}
    explicit Insertion(const Event& e) : t(e.t), x(e.x) {}
};

// Wick sum over ordered pairings. `mean` may be null for centred states.
// pair(i, j) with i < j must return the centred two-point function w(x_i, x_j).
cplx wick_sum(int n, const cplx* mean, const std::function<cplx(int, int)>& pair);
// same with a dense n x n table (upper triangle used)
cplx wick_sum(int n, const cplx* mean, const cplx* pairs);

// number of monomials in the expansion (15 for a centred 6-point function)
long wick_term_count(int n, bool zero_mean);

class FieldState {
public:
    virtual ~FieldState() = default;

    virtual int dim() const = 0;
    virtual bool zero_mean() const = 0;
    // <phi(ins)>
    virtual double mean(const Insertion& a) const = 0;
    // <phi(a) phi(b)> - <phi(a)><phi(b)>
    virtual cplx w2c(const Insertion& a, const Insertion& b) const = 0;
    virtual double period() const { return 0.0; }
    virtual std::string name() const = 0;

    // <phi(x_1) ... phi(x_n)>; backends may override with a faster batched path
    virtual cplx correlate(std::span<const Insertion> xs) const;

    cplx w2(const Insertion& a, const Insertion& b) const { return w2c(a, b) + mean(a) * mean(b); }
    cplx wn(std::span<const Event> pts) const;
    cplx wn(std::span<const Insertion> xs) const { return correlate(xs); }
};

// ---- box backend: 1+1 dimensions, periodic length L ----

struct BoxModes {
    double L = 10.0;
    double mass = 0.0;
    std::vector<double> k, omega;
    int size() const { return static_cast<int>(k.size()); }
};

// modes ordered k = 0 (only when include_zero; needs mass > 0), then +1, -1, +2, -2, ... times 2 pi / L
BoxModes make_box_modes(double L, double mass, int N, bool include_zero = false);

// phi(ins) = sum_n f_n a_n + conj(f_n) a_n^dag with f_n = e^{-i w_n t} F^(k_n) e^{i k_n x} / sqrt(2 L w_n)
Eigen::VectorXcd box_coeff(const BoxModes& m, const Insertion& a);

class BoxField : public FieldState {
public:
    using VecC = Eigen::VectorXcd;
    using MatC = Eigen::MatrixXcd;

    static BoxField vacuum(const BoxModes& m);
    static BoxField coherent(const BoxModes& m, const VecC& alpha);
    static BoxField thermal(const BoxModes& m, double beta);
    // squeezed thermal state S rho_beta S^dagger, S = exp(-i H_q) with
    // H_q = a^dag A a + (1/2)(a^dag B a^dag + h.c.); A Hermitian, B symmetric
    static BoxField squeezed_thermal(const BoxModes& m, double beta, const MatC& A, const MatC& B);
    // random zero-mean Gaussian state from a seeded draw
    static BoxField random_gaussian(const BoxModes& m, unsigned seed, double beta = 2.0, double strength = 0.3);

    int dim() const override { return 1; }
    bool zero_mean() const override { return alpha_.cwiseAbs().maxCoeff() == 0.0; }
    double mean(const Insertion& a) const override;
    cplx w2c(const Insertion& a, const Insertion& b) const override;
    double period() const override { return modes_.L; }
    std::string name() const override { return name_; }
    cplx correlate(std::span<const Insertion> xs) const override;

    // phi(ins) = sum_n f_n a_n + conj(f_n) a_n^dag
    VecC coeff(const Insertion& a) const;
    double coherent_amplitude(const Event& e) const { return mean(Insertion(e)); }

    const BoxModes& modes() const { return modes_; }
    const VecC& alpha() const { return alpha_; }
    const MatC& M() const { return M_; }
    const MatC& N() const { return N_; }
    double beta() const { return beta_; }
    const MatC& squeeze_A() const { return A_; }
    const MatC& squeeze_B() const { return B_; }
    bool diagonal() const { return diagonal_; }

private:
    BoxField(BoxModes m, std::string name);
    cplx pair_from_coeff(const VecC& u, const VecC& v) const;

    BoxModes modes_;
    std::string name_;
    VecC alpha_;
    MatC M_, N_;  // <a_m a_n>_c and <a_m^dag a_n>_c
    bool diagonal_ = true;
    double beta_ = 0.0;  // 0 means zero temperature
    MatC A_, B_;
};

// ---- continuum backend ----

struct ContinuumOptions {
    double eps = 1e-3;          // i-epsilon used on the light cone and for point-point k integrals
    double k_cut_weight = 1e-16;
    int k_panels = 64;
};

// vacuum or coherent state of a free scalar in d+1 Minkowski space.
// d = 3, m = 0 with Gaussian / point smearing uses closed forms; everything else a radial k quadrature.
class ContinuumField : public FieldState {
public:
    struct Packet {
        double amplitude = 0.0;   // complex weight of the Gaussian momentum packet
        double phase = 0.0;
        Vec3 k0{0.0, 0.0, 0.0};
        double width = 1.0;       // sigma_k
        int nodes = 24;           // tensor GL nodes per axis
    };

    ContinuumField(int d, double mass, ContinuumOptions opt = {});
    static ContinuumField vacuum(int d, double mass, ContinuumOptions opt = {}) { return {d, mass, opt}; }
    static ContinuumField coherent(int d, double mass, const Packet& p, ContinuumOptions opt = {});

    int dim() const override { return d_; }
    bool zero_mean() const override { return !coherent_; }
    double mean(const Insertion& a) const override;
    cplx w2c(const Insertion& a, const Insertion& b) const override;
    std::string name() const override { return coherent_ ? "continuum-coherent" : "continuum-vacuum"; }

    double mass() const { return m_; }
    const ContinuumOptions& options() const { return opt_; }

private:
    cplx massless3_gauss(double R, double dt, double a, double pref) const;
    cplx point_point_massless3(double R, double dt) const;
    cplx radial_k(const Insertion& a, const Insertion& b) const;

    int d_;
    double m_;
    ContinuumOptions opt_;
    bool coherent_ = false;
    Packet packet_;
    std::vector<Vec3> pk_;   // packet quadrature momenta
    std::vector<cplx> pw_;   // alpha(k) * weight / ((2pi)^d sqrt(2 omega))
    std::vector<double> pomega_;
};

// Faddeeva function on the real axis, w(x) = exp(-x^2) + 2i/sqrt(pi) D(x)
cplx faddeeva_real(double x);

// Gaussian state given through its one- and two-point functions
class GaussianGeneralField : public FieldState {
public:
    using MeanFn = std::function<double(const Insertion&)>;
    using PairFn = std::function<cplx(const Insertion&, const Insertion&)>;

    GaussianGeneralField(int d, PairFn w2c, MeanFn mean = nullptr, double period = 0.0, std::string name = "gaussian-general");

    int dim() const override { return d_; }
    bool zero_mean() const override { return !mean_; }
    double mean(const Insertion& a) const override { return mean_ ? mean_(a) : 0.0; }
    cplx w2c(const Insertion& a, const Insertion& b) const override { return w2c_(a, b); }
    double period() const override { return period_; }
    std::string name() const override { return name_; }

private:
    int d_;
    PairFn w2c_;
    MeanFn mean_;
    double period_;
    std::string name_;
};

} // namespace udw
