#include "udw/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace udw {

AbcConfig AbcConfig::defaults() {
    AbcConfig c;
    auto party = [](const char* label, double t, double x, double lambda) {
        AbcParty p;
        p.spec.label = label;
        p.spec.gap = 1.0;
        p.spec.coupling = lambda;
        p.spec.chi = Profile::gaussian(0.3, t);
        p.spec.f = Profile::gaussian(1, 0.3, Vec3{x, 0.0, 0.0});
        return p;
    };
    c.A = party("A", 0.0, 11.0, 1.0);
    c.B = party("B", 3.5, 0.0, 1.0);
    c.C = party("C", 0.0, 0.0, 1.0);
    c.C.psi = DetVec::ground();
    c.c = DetVec::excited();
    c.L = 22.0;
    c.modes = 8;
    c.total_quanta = 2;
    c.support_level = 1.0 - 1e-8;
    return c;
}

namespace {

std::string where(const InteractionRegion& r) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "[%.4g, %.4g] x ball(%.4g, r=%.4g)", r.t_on, r.t_off, r.center[0], r.radius);
    return buf;
}

} // namespace

GeometryCheck validate_geometry(const AbcConfig& cfg) {
    GeometryCheck g;
    const double P = cfg.L;
    for (const AbcParty* p : {&cfg.A, &cfg.B, &cfg.C}) {
        p->spec.validate();
        if (p->spec.f.dim() != 1) throw ConfigError("abc." + p->spec.label + ".smearing", "box scenario is 1+1 dimensional");
    }
    auto rA = cfg.A.spec.region(cfg.support_level, P);
    auto rB = cfg.B.spec.region(cfg.support_level, P);
    auto rC = cfg.C.spec.region(cfg.support_level, P);
    for (const auto* r : {&rA, &rB, &rC})
        if (2.0 * r->radius >= 0.5 * P)
            throw ConfigError("abc.L", "box too small for the smearing supports (periodic images overlap)");
    // Clara's measurement happens on the slice t = t_off of her region
    InteractionRegion mC = rC;
    mC.t_on = mC.t_off;

    // every point of B inside J+ of the measurement slice
    double rho = spatial_distance(rB.center, mC.center, 1, P);
    double need = std::max(0.0, rho + rB.radius - mC.radius);
    if (rB.t_on - mC.t_off < need - 1e-12)
        throw ConfigError("abc.B", "D_B is not inside the causal future of Clara's measurement: B " + where(rB) +
                                       ", measurement " + where(mC));
    g.relations.push_back("D_B inside J+(measurement of C): margin " + std::to_string(rB.t_on - mC.t_off - need));
    if (!regions_spacelike(rA, rB))
        throw ConfigError("abc.A", "D_A is not spacelike to D_B: A " + where(rA) + ", B " + where(rB));
    g.relations.push_back("D_A spacelike to D_B");
    if (!regions_spacelike(rA, rC))
        throw ConfigError("abc.A", "D_A is not spacelike to D_C: A " + where(rA) + ", C " + where(rC));
    g.relations.push_back("D_A spacelike to D_C");
    return g;
}

namespace {

struct Built {
    TruncatedSystem sys;
    Ensemble ens;
};

Built build(const AbcConfig& cfg, int modes) {
    auto bm = make_box_modes(cfg.L, cfg.mass, modes, cfg.mass > 0.0);
    auto basis = FockBasis::total(bm.size(), cfg.total_quanta);
    std::vector<OracleDetector> dets{{cfg.A.spec, cfg.A.psi, {}}, {cfg.B.spec, cfg.B.psi, {}}, {cfg.C.spec, cfg.C.psi, {}}};
    TruncatedSystem sys(bm, std::move(basis), std::move(dets), cfg.oracle);
    Ensemble ens;
    ens.p = {1.0};
    ens.v = {sys.vacuum()};
    return {std::move(sys), std::move(ens)};
}

constexpr unsigned kA = 1u, kB = 2u, kC = 4u;

// Joint (field x A x B) vectors after Clara: the selective mode projects C onto the outcome,
// the non-selective mode keeps both C branches. Each entry is D_f x 4 with columns a + 2b.
std::vector<std::pair<double, MatC>> branches(const AbcConfig& cfg, const Ensemble& ens, const std::vector<MatC>& Y) {
    std::vector<std::pair<double, MatC>> out;
    for (size_t m = 0; m < Y.size(); ++m) {
        if (cfg.selective) {
            MatC Z(Y[m].rows(), 4);
            for (int ab = 0; ab < 4; ++ab)
                Z.col(ab) = std::conj(cfg.c.g) * Y[m].col(ab) + std::conj(cfg.c.e) * Y[m].col(ab + 4);
            out.emplace_back(ens.p[m], std::move(Z));
        } else {
            out.emplace_back(ens.p[m], Y[m].leftCols(4));
            out.emplace_back(ens.p[m], Y[m].rightCols(4));
        }
    }
    return out;
}

// route 1: full density operator on field x A x B, then partial traces
MatC route1(const std::vector<std::pair<double, MatC>>& br, unsigned keep) {
    const Eigen::Index Df = br.front().second.rows();
    const Eigen::Index J = Df * 4;
    MatC rho = MatC::Zero(J, J);
    for (const auto& [p, Z] : br) {
        VecC v(J);
        for (Eigen::Index k = 0; k < Df; ++k)
            for (int ab = 0; ab < 4; ++ab) v[k * 4 + ab] = Z(k, ab);
        rho.noalias() += p * v * v.adjoint();
    }
    // trace the field
    MatC ab = MatC::Zero(4, 4);
    for (Eigen::Index k = 0; k < Df; ++k) ab += rho.block(k * 4, k * 4, 4, 4);
    if (keep == (kA | kB)) return ab;
    MatC r = MatC::Zero(2, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
            for (int u = 0; u < 2; ++u)
                r(x, y) += keep == kA ? ab(x + 2 * u, y + 2 * u) : ab(u + 2 * x, u + 2 * y);
    return r;
}

// route 2: every element is an extended 0-point function tr(rho' |x><y|), i.e. an inner product
// of the conditional field vectors
MatC route2(const std::vector<std::pair<double, MatC>>& br, unsigned keep) {
    const int n = keep == (kA | kB) ? 4 : 2;
    MatC r = MatC::Zero(n, n);
    auto col = [&](int x, int u) {
        if (keep == (kA | kB)) return x;
        return keep == kA ? x + 2 * u : u + 2 * x;
    };
    const int traced = keep == (kA | kB) ? 1 : 2;
    for (const auto& [p, Z] : br)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int u = 0; u < traced; ++u) r(x, y) += p * Z.col(col(y, u)).dot(Z.col(col(x, u)));
    return r;
}

double max_abs(const MatC& a, const MatC& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace

AbcReport run_abc(const AbcConfig& cfg) {
    AbcReport rep;
    rep.geometry = validate_geometry(cfg);
    rep.selective = cfg.selective;
    auto [sys, ens] = build(cfg, cfg.modes);
    rep.fock_leakage = ens.leakage;

    // canonical ordering U = U_B U_C U_A, with A innermost
    std::vector<MatC> YA, YAC, YACB, YCB;
    for (const auto& v : ens.v) {
        MatC Y = sys.embed(v);
        sys.evolve(Y, kA);
        YA.push_back(Y);
        sys.evolve(Y, kC);
        YAC.push_back(Y);
        sys.evolve(Y, kB);
        YACB.push_back(Y);
        MatC W = sys.embed(v);
        sys.evolve(W, kC);
        sys.evolve(W, kB);
        YCB.push_back(W);
        MatC V = W;
        sys.evolve(V, kA);
        rep.commute_defect += ens.p[YCB.size() - 1] * (V - YACB.back()).squaredNorm();
    }
    rep.commute_defect = std::sqrt(rep.commute_defect);
    auto bAB = branches(cfg, ens, YACB);
    auto bAC = branches(cfg, ens, YAC);
    auto bB = branches(cfg, ens, YCB);
    AbcConfig plain = cfg;
    plain.selective = false;  // Alba without any update: trace Clara
    auto bA = branches(plain, ens, YA);

    double p = 0.0;
    for (const auto& [w, Z] : bAB) p += w * Z.squaredNorm();
    if (cfg.selective && p < 1e-14) throw ZeroProbabilityError("run_abc: Clara's outcome has zero probability");
    rep.probability = cfg.selective ? p : 1.0;
    auto norm1 = [&](MatC m, const std::vector<std::pair<double, MatC>>& br) {
        double tr = 0.0;
        for (const auto& [w, Z] : br) tr += w * Z.squaredNorm();
        return MatC(m / tr);
    };

    rep.rho_AB = norm1(route1(bAB, kA | kB), bAB);
    rep.rho_A = norm1(route1(bA, kA), bA);
    rep.rho_B = norm1(route1(bB, kB), bB);
    rep.rho_A2 = norm1(route1(bAC, kA), bAC);
    rep.rho_AB_n = norm1(route2(bAB, kA | kB), bAB);
    rep.rho_A_n = norm1(route2(bA, kA), bA);
    rep.rho_B_n = norm1(route2(bB, kB), bB);
    rep.rho_A2_n = norm1(route2(bAC, kA), bAC);
    rep.route_discrepancy = std::max({max_abs(rep.rho_AB, rep.rho_AB_n), max_abs(rep.rho_A, rep.rho_A_n),
                                      max_abs(rep.rho_B, rep.rho_B_n), max_abs(rep.rho_A2, rep.rho_A2_n)});

    MatC trB(2, 2), trA(2, 2);
    for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y) {
            trB(x, y) = rep.rho_AB(x, y) + rep.rho_AB(x + 2, y + 2);
            trA(x, y) = rep.rho_AB(2 * x, 2 * y) + rep.rho_AB(2 * x + 1, 2 * y + 1);
        }
    rep.dist_A_trB = trace_distance(rep.rho_A, trB);
    rep.dist_B_trA = trace_distance(rep.rho_B, trA);
    rep.dist_A2_trB = trace_distance(rep.rho_A2, trB);

    rep.min_eigenvalue = 1e300;
    for (const MatC* m : {&rep.rho_AB, &rep.rho_A, &rep.rho_B, &rep.rho_A2}) {
        MatC h = 0.5 * (*m + m->adjoint());
        Eigen::SelfAdjointEigenSolver<MatC> es(h, Eigen::EigenvaluesOnly);
        rep.min_eigenvalue = std::min(rep.min_eigenvalue, es.eigenvalues().minCoeff());
        rep.max_trace_error = std::max(rep.max_trace_error, std::abs(m->trace() - 1.0));
    }
    return rep;
}

FactorizationReport factorization_check(const AbcConfig& cfg, const std::vector<int>& mode_counts, int probes,
                                        unsigned seed) {
    validate_geometry(cfg);
    FactorizationReport rep;
    for (int n : mode_counts) {
        auto [sys, ens] = build(cfg, n);
        FactorizationRow row;
        row.modes = n;
        row.field_dim = sys.field_dim();
        std::mt19937 rng(seed);
        std::normal_distribution<double> nd;
        MatC Mc = sys.m_matrix(2, cfg.c);
        MatC Mcd = Mc.adjoint();
        for (int k = 0; k < probes; ++k) {
            MatC v = MatC::Zero(sys.field_dim(), sys.det_dim());
            VecC vac = sys.vacuum();
            for (int c = 0; c < sys.det_dim(); ++c) v.col(c) = cplx(nd(rng), nd(rng)) * vac;
            v /= v.norm();
            MatC full = v;
            sys.evolve(full, sys.all_mask());
            MatC bca = v;
            sys.evolve(bca, kA);
            sys.evolve(bca, kC);
            sys.evolve(bca, kB);
            MatC cba = v;
            sys.evolve(cba, kA);
            sys.evolve(cba, kB);
            sys.evolve(cba, kC);
            row.u_vs_BCA = std::max(row.u_vs_BCA, (full - bca).norm());
            row.u_vs_CBA = std::max(row.u_vs_CBA, (full - cba).norm());
            for (int dag = 0; dag < 2; ++dag) {
                const MatC& M = dag ? Mcd : Mc;
                MatC x = M * v;
                sys.evolve(x, kA);
                MatC y = v;
                sys.evolve(y, kA);
                y = M * y;
                double c = (x - y).norm();
                (dag ? row.comm_UA_Mdag : row.comm_UA_M) = std::max(dag ? row.comm_UA_Mdag : row.comm_UA_M, c);
            }
        }
        rep.rows.push_back(row);
    }
    rep.decreasing = true;
    for (size_t i = 1; i < rep.rows.size(); ++i)
        if (!(rep.rows[i].comm_UA_M < rep.rows[i - 1].comm_UA_M && rep.rows[i].comm_UA_Mdag < rep.rows[i - 1].comm_UA_Mdag))
            rep.decreasing = false;
    return rep;
}

} // namespace udw
