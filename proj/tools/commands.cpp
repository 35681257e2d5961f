#include "commands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <thread>

namespace udw::cli {

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string point_header(size_t n, int d) {
    static const char* axes[] = {"x", "y", "z"};
    std::string h;
    for (size_t i = 1; i <= n; ++i) {
        std::string s = n == 1 ? "" : std::to_string(i);
        h += "t" + s;
        for (int a = 0; a < d; ++a) h += std::string(",") + axes[a] + s;
        h += ",";
    }
    return h;
}

std::string point_cells(const std::vector<Event>& pts, int d) {
    std::string r;
    for (const auto& e : pts) {
        r += fmt(e.t);
        for (int a = 0; a < d; ++a) r += "," + fmt(e.x[a]);
        r += ",";
    }
    return r;
}

std::string relation_cell(const std::vector<CausalRelation>& rel) {
    std::string r;
    for (size_t i = 0; i < rel.size(); ++i) r += (i ? ";" : "") + to_string(rel[i]);
    return r;
}

template <class F>
void parallel_rows(size_t n, int threads, F&& f) {
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads <= 1) {
        for (size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(threads);
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&, w] {
            try {
                for (size_t i = w; i < n; i += threads) f(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

std::vector<CausalRelation> relations(const RunConfig& c, const FieldState& st, const std::vector<Event>& pts) {
    auto reg = c.meas.interaction_region(st.period());
    std::vector<CausalRelation> r;
    for (const auto& e : pts) r.push_back(classify(e, reg));
    return r;
}

void need_box(const RunConfig& c, const char* what) {
    if (c.backend == Backend::Continuum) throw ConfigError("/backend", std::string(what) + " needs the box or oracle backend");
}

} // namespace

double loglog_slope(const std::vector<double>& lambdas, const std::vector<double>& residuals) {
    const size_t n = lambdas.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < n; ++i) {
        if (!(residuals[i] > 0.0)) return std::numeric_limits<double>::quiet_NaN();
        double x = std::log(lambdas[i]), y = std::log(residuals[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::string cmd_povm(const RunConfig& c) {
    auto st = make_state(c);
    std::ostringstream out;
    out << "outcome";
    for (int k = 0; k <= c.order; ++k) out << ",order" << k;
    const bool oracle = c.backend == Backend::Oracle;
    if (oracle) out << ",oracle";
    out << ",bound\n";
    const double lam = c.meas.det.coupling;
    std::vector<double> sum(c.order + 2, 0.0);
    for (int o = 0; o < 2; ++o) {
        MeasurementSpec m = c.meas.with_outcome(o == 0 ? c.meas.s : c.meas.sbar());
        Series s = povm_series(*st, m, c.order, c.quad);
        out << (o == 0 ? "s" : "sbar");
        double scale = 0.0;
        for (int k = 0; k <= c.order; ++k) {
            cplx v = s.eval(lam, k);
            if (std::abs(v.imag()) > kImagTolerance * std::max(1.0, std::abs(v)))
                throw NumericGuardError("povm: expectation value has an imaginary part " + fmt(v.imag()));
            out << "," << fmt(v.real());
            sum[k] += v.real();
            scale += std::abs(s.at(k));
        }
        if (oracle) {
            auto sys = oracle_system(c, m);
            double p = exact_povm(sys, sys.prepare(box_state(c.field)), m.s);
            out << "," << fmt(p);
            sum[c.order + 1] += p;
        }
        // size of the first neglected term: lambda^{order+1} times the largest coefficient seen
        out << "," << fmt(std::pow(lam, c.order + 1) * std::max(1.0, scale)) << "\n";
    }
    out << "sum";
    for (int k = 0; k <= c.order; ++k) out << "," << fmt(sum[k]);
    if (oracle) out << "," << fmt(sum[c.order + 1]);
    out << ",\n";
    return out.str();
}

std::string cmd_update(const RunConfig& c, int threads) {
    auto st = make_state(c);
    const auto& tuples = c.query.tuples;
    const size_t n = tuples.empty() ? 1 : tuples.front().size();
    const int d = c.field.d;
    std::ostringstream out;
    out << point_header(n, d) << "relation,re,im,abs";
    for (int k = 0; k <= c.order; ++k) out << ",order" << k << "_re,order" << k << "_im";
    out << "\n";
    std::vector<std::string> rows(tuples.size());
    const bool oracle = c.backend == Backend::Oracle;
    parallel_rows(tuples.size(), oracle ? 1 : threads, [&](size_t i) {
        auto X = as_insertions(tuples[i]);
        auto r = update(*st, c.meas, X, c.query.mode, c.order, c.quad);
        cplx v = r.value;
        if (oracle) {
            auto sys = oracle_system(c, c.meas);
            bool sel = c.query.mode == UpdateMode::Selective && r.selective_form;
            v = exact_update(sys, sys.prepare(box_state(c.field)), sel ? ExactMode::Selective : ExactMode::NonSelective,
                             c.meas.s, X)
                    .value;
        }
        std::string row = point_cells(tuples[i], d) + relation_cell(relations(c, *st, tuples[i])) + "," + fmt(v.real()) +
                          "," + fmt(v.imag()) + "," + fmt(std::abs(v));
        double lp = 1.0;
        for (int k = 0; k <= c.order; ++k) {
            cplx t = lp * r.terms.at(k);
            row += "," + fmt(t.real()) + "," + fmt(t.imag());
            lp *= c.meas.det.coupling;
        }
        rows[i] = row + "\n";
    });
    for (const auto& r : rows) out << r;
    return out.str();
}

std::string cmd_scan(const RunConfig& c, int threads) {
    if (c.backend == Backend::Oracle) throw ConfigError("/backend", "scan runs on the continuum or box backend");
    if (c.order < 1) throw ConfigError("/order", "scan needs order 1 or 2");
    auto st = make_state(c);
    const bool sel = c.query.mode == UpdateMode::Selective;
    std::vector<std::vector<Event>> tuples;
    for (const auto& t : c.query.tuples) {
        if (c.query.spacelike_only) {
            auto rel = relations(c, *st, t);
            if (std::any_of(rel.begin(), rel.end(), [](CausalRelation r) { return is_causal(r); })) continue;
        }
        tuples.push_back(t);
    }
    std::vector<std::string> names;
    if (sel) {
        names = {"covariance", "commutator"};
        if (c.order >= 2) names.insert(names.end(), {"R-commutator-1", "R-commutator-2", "S", "S-tilde"});
    } else {
        for (int k = 1; k <= c.order; ++k) names.push_back("order-" + std::to_string(k));
    }
    const size_t n = c.query.tuples.empty() ? 1 : c.query.tuples.front().size();
    std::ostringstream out;
    out << point_header(n, c.field.d) << "relation,re,im,abs";
    for (const auto& nm : names) out << "," << nm << "_re," << nm << "_im";
    out << "\n";
    std::vector<std::string> rows(tuples.size());
    parallel_rows(tuples.size(), threads, [&](size_t i) {
        auto rep = spacelike_scan(*st, c.meas, {tuples[i]}, sel ? ScanKind::Selective : ScanKind::NonSelective, c.order, c.quad)
                       .front();
        std::string row = point_cells(rep.points, c.field.d) + relation_cell(rep.relation) + "," + fmt(rep.value.real()) +
                          "," + fmt(rep.value.imag()) + "," + fmt(std::abs(rep.value));
        for (const auto& [k, v] : rep.terms) row += "," + fmt(v.real()) + "," + fmt(v.imag());
        rows[i] = row + "\n";
    });
    for (const auto& r : rows) out << r;
    return out.str();
}

std::string cmd_compare(const RunConfig& c) {
    need_box(c, "compare");
    if (c.order != 2) throw ConfigError("/order", "compare fits the order-2 residual; set order to 2");
    auto st = box_state(c.field);
    const bool sel = c.compare.flavor == "S";
    auto X = as_insertions(c.compare.points);
    // the perturbative coefficients do not depend on lambda; compute them once
    Series terms;
    if (X.empty()) {
        if (sel) {
            terms = povm_series(st, c.meas, 2, c.quad);
        } else {
            terms.c = {1.0, 0.0, 0.0};
        }
    } else {
        auto r = sel ? sel_update(st, c.meas, X, 2, true, c.quad) : ns_update(st, c.meas, X, 2, c.quad);
        terms = r.terms;
    }
    std::vector<double> res;
    std::ostringstream body;
    for (double lam : c.compare.lambdas) {
        MeasurementSpec m = c.meas;
        m.det.coupling = lam;
        auto sys = oracle_system(c, m);
        auto ens = sys.prepare(st);
        cplx exact;
        if (X.empty()) exact = sel ? cplx(exact_povm(sys, ens, m.s)) : cplx(1.0);
        else exact = exact_update(sys, ens, sel ? ExactMode::Selective : ExactMode::NonSelective, m.s, X).value;
        cplx pert = terms.eval(lam, 2);
        res.push_back(std::abs(exact - pert));
        body << fmt(lam) << "," << fmt(exact.real()) << "," << fmt(exact.imag()) << "," << fmt(pert.real()) << ","
             << fmt(pert.imag()) << "," << fmt(res.back()) << "\n";
    }
    double slope = loglog_slope(c.compare.lambdas, res);
    std::ostringstream out;
    out << "lambda,exact_re,exact_im,order2_re,order2_im,residual\n" << body.str();
    out << "# slope," << (std::isnan(slope) ? std::string("nan") : fmt(slope)) << "\n";
    return out.str();
}

namespace {

json mat_json(const MatC& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
        rows.push_back(row);
    }
    return rows;
}

} // namespace

std::string cmd_abc(const RunConfig& c) {
    if (!c.abc) throw ConfigError("/abc", "the abc command needs an abc section");
    auto rep = run_abc(*c.abc);
    json j;
    j["schema_version"] = kSchemaVersion;
    j["mode"] = rep.selective ? "S" : "NS";
    j["geometry"] = rep.geometry.relations;
    j["probability"] = rep.probability;
    j["route1"] = {{"rho_AB", mat_json(rep.rho_AB)}, {"rho_A", mat_json(rep.rho_A)}, {"rho_B", mat_json(rep.rho_B)},
                   {"rho_A2", mat_json(rep.rho_A2)}};
    j["route2"] = {{"rho_AB", mat_json(rep.rho_AB_n)}, {"rho_A", mat_json(rep.rho_A_n)}, {"rho_B", mat_json(rep.rho_B_n)},
                   {"rho_A2", mat_json(rep.rho_A2_n)}};
    j["route_discrepancy"] = rep.route_discrepancy;
    j["trace_distance"] = {{"rho_A_vs_trB_rho_AB", rep.dist_A_trB},
                           {"rho_B_vs_trA_rho_AB", rep.dist_B_trA},
                           {"rho_A2_vs_trB_rho_AB", rep.dist_A2_trB}};
    j["commute_defect"] = rep.commute_defect;
    j["min_eigenvalue"] = rep.min_eigenvalue;
    j["max_trace_error"] = rep.max_trace_error;
    if (!c.factorization_modes.empty()) {
        auto f = factorization_check(*c.abc, c.factorization_modes, c.factorization_probes);
        json rows = json::array();
        for (const auto& r : f.rows)
            rows.push_back({{"modes", r.modes},
                            {"field_dim", r.field_dim},
                            {"U_vs_UB_UC_UA", r.u_vs_BCA},
                            {"U_vs_UC_UB_UA", r.u_vs_CBA},
                            {"comm_UA_Mc", r.comm_UA_M},
                            {"comm_UA_Mc_dag", r.comm_UA_Mdag}});
        j["factorization"] = {{"rows", rows}, {"decreasing", f.decreasing}};
    }
    return j.dump(2) + "\n";
}

} // namespace udw::cli
