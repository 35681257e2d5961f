#pragma once

#include <string>
#include <vector>

#include "udw/oracle.hpp"

namespace udw {

struct AbcParty {
    DetectorSpec spec;
    DetVec psi = DetVec::ground();
};

// Alba (A), Blanca (B) and Clara (C) in a 1+1 periodic box. Clara measures her detector with
// outcome `c`; Blanca interacts inside the causal future of that measurement; Alba is spacelike
// to both of them.
struct AbcConfig {
    AbcParty A, B, C;
    DetVec c = DetVec::excited();
    double L = 22.0;
    double mass = 0.0;
    int modes = 8;
    int total_quanta = 2;  // Fock basis: states with at most this many quanta in total
    bool selective = true;
    double support_level = 1.0 - 1e-10;
    OracleOptions oracle;

    static AbcConfig defaults();
};

struct GeometryCheck {
    bool ok = true;
    std::vector<std::string> relations;  // human-readable statements, one per checked relation
};

// throws ConfigError naming the first violated relation
GeometryCheck validate_geometry(const AbcConfig& cfg);

struct AbcReport {
    bool selective = true;
    double probability = 1.0;  // tr(rho E_c); 1 in the non-selective mode
    // route 1: density operators and partial traces
    MatC rho_AB, rho_A, rho_B, rho_A2;
    // route 2: extended 0-point functions <|x><y|> of the updated joint state
    MatC rho_AB_n, rho_A_n, rho_B_n, rho_A2_n;
    double route_discrepancy = 0.0;  // max elementwise over all four matrices

    double dist_A_trB = 0.0;   // T(rho_A', tr_B rho_AB')
    double dist_B_trA = 0.0;   // T(rho_B', tr_A rho_AB')
    double dist_A2_trB = 0.0;  // T(rho_A'', tr_B rho_AB'), selective mode
    // ||(U_B U_C U_A - U_A U_B U_C) psi_0||: bounds dist_B_trA in the non-selective mode
    double commute_defect = 0.0;
    double min_eigenvalue = 0.0;
    double max_trace_error = 0.0;
    double fock_leakage = 0.0;
    GeometryCheck geometry;
};

AbcReport run_abc(const AbcConfig& cfg);

struct FactorizationRow {
    int modes = 0;
    int field_dim = 0;
    // probes v: field vacuum times random detector amplitudes
    double u_vs_BCA = 0.0;   // ||(U - U_B U_C U_A) v|| maximised over probe vectors
    double u_vs_CBA = 0.0;   // wrong ordering of the timelike pair
    double comm_UA_M = 0.0;  // ||[U_A, M_c]||, ||[U_A, M_c^dag]|| on the probes
    double comm_UA_Mdag = 0.0;
};

struct FactorizationReport {
    std::vector<FactorizationRow> rows;
    bool decreasing = false;  // commutator norms fall along the mode list
};

FactorizationReport factorization_check(const AbcConfig& cfg, const std::vector<int>& mode_counts = {4, 8, 16},
                                        int probes = 4, unsigned seed = 7);

} // namespace udw
