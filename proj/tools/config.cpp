#include "config.hpp"

#include <fstream>
#include <set>

namespace udw::cli {

namespace {

std::string join(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string join(const std::string& base, size_t i) { return base + "/" + std::to_string(i); }

[[noreturn]] void bad(const std::string& path, const std::string& msg) { throw ConfigError(path, msg); }

void only_keys(const json& j, const std::string& path, std::initializer_list<const char*> keys) {
    if (!j.is_object()) bad(path, "expected an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it)
        if (!ok.count(it.key())) bad(join(path, it.key()), "unknown field");
}

double num(const json& j, const std::string& path) {
    if (!j.is_number()) bad(path, "expected a number");
    double v = j.get<double>();
    if (!std::isfinite(v)) bad(path, "expected a finite number");
    return v;
}

double num(const json& j, const std::string& path, const char* key, double def) {
    return j.contains(key) ? num(j.at(key), join(path, key)) : def;
}

int integer(const json& j, const std::string& path) {
    if (!j.is_number_integer()) bad(path, "expected an integer");
    return j.get<int>();
}

int integer(const json& j, const std::string& path, const char* key, int def) {
    return j.contains(key) ? integer(j.at(key), join(path, key)) : def;
}

std::string str(const json& j, const std::string& path, const char* key, const std::string& def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) bad(join(path, key), "expected a string");
    return j.at(key).get<std::string>();
}

bool boolean(const json& j, const std::string& path, const char* key, bool def) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) bad(join(path, key), "expected true or false");
    return j.at(key).get<bool>();
}

// complex number: a real number or [re, im]
cplx complex_num(const json& j, const std::string& path) {
    if (j.is_number()) return num(j, path);
    if (j.is_array() && j.size() == 2) return {num(j[0], join(path, 0)), num(j[1], join(path, 1))};
    bad(path, "expected a number or [re, im]");
}

Vec3 vec3(const json& j, const std::string& path, int d) {
    Vec3 v{0.0, 0.0, 0.0};
    if (j.is_number()) {
        if (d != 1) bad(path, "expected " + std::to_string(d) + " coordinates");
        v[0] = num(j, path);
        return v;
    }
    if (!j.is_array() || static_cast<int>(j.size()) != d) bad(path, "expected " + std::to_string(d) + " coordinates");
    for (int i = 0; i < d; ++i) v[i] = num(j[i], join(path, i));
    return v;
}

DetVec det_state(const json& j, const std::string& path) {
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "g" || s == "ground") return DetVec::ground();
        if (s == "e" || s == "excited") return DetVec::excited();
        bad(path, "expected \"g\", \"e\" or a pair of amplitudes");
    }
    if (!j.is_array() || j.size() != 2) bad(path, "expected \"g\", \"e\" or a pair of amplitudes");
    DetVec v{complex_num(j[0], join(path, 0)), complex_num(j[1], join(path, 1))};
    if (!(v.norm() > 0.0)) bad(path, "zero detector vector");
    return v.normalized();
}

Profile profile(const json& j, const std::string& path, int d) {
    only_keys(j, path, {"kind", "width", "center", "amplitude", "lo", "hi"});
    std::string kind = str(j, path, "kind", "gaussian");
    double amp = num(j, path, "amplitude", 1.0);
    Vec3 c{0.0, 0.0, 0.0};
    if (j.contains("center")) c = vec3(j.at("center"), join(path, "center"), d);
    auto width = [&]() {
        double w = num(j, path, "width", 1.0);
        if (!(w > 0.0)) bad(join(path, "width"), "must be positive");
        return w;
    };
    if (kind == "gaussian") return Profile::gaussian(d, width(), c, amp);
    if (kind == "bump") return Profile::bump(d, width(), c, amp);
    if (kind == "delta") return Profile::delta(d, c, amp);
    if (kind == "indicator") {
        if (d == 1 && j.contains("lo")) {
            double lo = num(j.at("lo"), join(path, "lo")), hi = num(j.at("hi"), join(path, "hi"));
            if (!(hi > lo)) bad(join(path, "hi"), "must exceed lo");
            return Profile::indicator(lo, hi, amp);
        }
        return Profile::indicator(d, width(), c, amp);
    }
    bad(join(path, "kind"), "unknown profile kind '" + kind + "'");
}

QuadConfig quad(const json& j, const std::string& path, QuadConfig q) {
    only_keys(j, path, {"window_sigmas", "panels", "nodes"});
    q.window_sigmas = num(j, path, "window_sigmas", q.window_sigmas);
    q.panels = integer(j, path, "panels", q.panels);
    q.nodes = integer(j, path, "nodes", q.nodes);
    if (!(q.window_sigmas > 0.0) || q.panels < 1 || q.nodes < 1) bad(path, "window, panels and nodes must be positive");
    return q;
}

DetectorSpec detector(const json& j, const std::string& path, int d, DetVec* psi, DetVec* outcome) {
    only_keys(j, path, {"gap", "coupling", "switching", "smearing", "psi", "outcome", "label"});
    DetectorSpec s;
    s.gap = num(j, path, "gap", 1.0);
    s.coupling = num(j, path, "coupling", 0.1);
    if (s.coupling < 0.0) bad(join(path, "coupling"), "must be non-negative");
    s.label = str(j, path, "label", "detector");
    s.chi = j.contains("switching") ? profile(j.at("switching"), join(path, "switching"), 1) : Profile::gaussian(1.0);
    s.f = j.contains("smearing") ? profile(j.at("smearing"), join(path, "smearing"), d) : Profile::delta(d);
    if (psi) *psi = j.contains("psi") ? det_state(j.at("psi"), join(path, "psi")) : DetVec::ground();
    if (outcome) *outcome = j.contains("outcome") ? det_state(j.at("outcome"), join(path, "outcome")) : DetVec::excited();
    return s;
}

Event event(const json& j, const std::string& path, int d) {
    if (!j.is_array() || static_cast<int>(j.size()) != d + 1) bad(path, "expected [t, x..] with " + std::to_string(d) + " spatial coordinates");
    Event e;
    e.d = d;
    e.t = num(j[0], join(path, 0));
    for (int i = 0; i < d; ++i) e.x[i] = num(j[i + 1], join(path, i + 1));
    return e;
}

std::vector<double> linspace(const json& j, const std::string& path) {
    if (!j.is_array() || j.size() != 3) bad(path, "expected [start, stop, count]");
    double a = num(j[0], join(path, 0)), b = num(j[1], join(path, 1));
    int n = integer(j[2], join(path, 2));
    if (n < 0) bad(join(path, 2), "count must be non-negative");
    std::vector<double> v;
    for (int i = 0; i < n; ++i) v.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    return v;
}

FieldConfig field(const json& j, const std::string& path, Backend b) {
    only_keys(j, path, {"kind", "d", "mass", "L", "modes", "include_zero", "alpha", "beta", "seed", "strength", "squeeze",
                        "packet", "continuum"});
    FieldConfig f;
    f.kind = str(j, path, "kind", "vacuum");
    static const std::set<std::string> kinds{"vacuum", "coherent", "thermal", "squeezed_thermal", "random_gaussian"};
    if (!kinds.count(f.kind)) bad(join(path, "kind"), "unknown field kind '" + f.kind + "'");
    f.mass = num(j, path, "mass", 0.0);
    if (f.mass < 0.0) bad(join(path, "mass"), "must be non-negative");
    if (b == Backend::Continuum) {
        f.d = integer(j, path, "d", 3);
        if (f.d < 1 || f.d > 3) bad(join(path, "d"), "spatial dimension must be 1, 2 or 3");
        if (f.kind != "vacuum" && f.kind != "coherent") bad(join(path, "kind"), "continuum backend supports vacuum and coherent");
        if (j.contains("packet")) {
            const auto& p = j.at("packet");
            auto pp = join(path, "packet");
            only_keys(p, pp, {"amplitude", "phase", "k0", "width", "nodes"});
            f.packet.amplitude = num(p, pp, "amplitude", 0.0);
            f.packet.phase = num(p, pp, "phase", 0.0);
            if (p.contains("k0")) f.packet.k0 = vec3(p.at("k0"), join(pp, "k0"), f.d);
            f.packet.width = num(p, pp, "width", 1.0);
            f.packet.nodes = integer(p, pp, "nodes", 24);
        }
        if (j.contains("continuum")) {
            const auto& c = j.at("continuum");
            auto cp = join(path, "continuum");
            only_keys(c, cp, {"eps", "k_cut_weight", "k_panels"});
            f.continuum.eps = num(c, cp, "eps", f.continuum.eps);
            f.continuum.k_cut_weight = num(c, cp, "k_cut_weight", f.continuum.k_cut_weight);
            f.continuum.k_panels = integer(c, cp, "k_panels", f.continuum.k_panels);
        }
        return f;
    }
    f.d = 1;
    if (j.contains("d") && integer(j.at("d"), join(path, "d")) != 1) bad(join(path, "d"), "box backend is 1+1 dimensional");
    f.L = num(j, path, "L", 10.0);
    if (!(f.L > 0.0)) bad(join(path, "L"), "must be positive");
    f.modes = integer(j, path, "modes", 3);
    if (f.modes < 1) bad(join(path, "modes"), "need at least one mode");
    f.include_zero = boolean(j, path, "include_zero", false);
    if (f.include_zero && !(f.mass > 0.0)) bad(join(path, "include_zero"), "zero mode needs mass > 0");
    f.alpha = Eigen::VectorXcd::Zero(f.modes);
    if (j.contains("alpha")) {
        const auto& a = j.at("alpha");
        if (!a.is_array() || static_cast<int>(a.size()) != f.modes) bad(join(path, "alpha"), "one amplitude per mode");
        for (int i = 0; i < f.modes; ++i) f.alpha[i] = complex_num(a[i], join(join(path, "alpha"), i));
    }
    f.beta = num(j, path, "beta", f.kind == "random_gaussian" ? 2.0 : 0.0);
    if (f.beta < 0.0) bad(join(path, "beta"), "must be non-negative");
    if (f.kind == "thermal" && !(f.beta > 0.0)) bad(join(path, "beta"), "thermal state needs beta > 0");
    f.seed = static_cast<unsigned>(integer(j, path, "seed", 1));
    f.strength = num(j, path, "strength", 0.3);
    if (f.kind == "squeezed_thermal") {
        if (!j.contains("squeeze")) bad(join(path, "squeeze"), "squeezed_thermal needs {A, B}");
        const auto& s = j.at("squeeze");
        auto sp = join(path, "squeeze");
        only_keys(s, sp, {"A", "B"});
        auto mat = [&](const char* key) {
            Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(f.modes, f.modes);
            if (!s.contains(key)) return m;
            const auto& a = s.at(key);
            auto ap = join(sp, key);
            if (!a.is_array() || static_cast<int>(a.size()) != f.modes) bad(ap, "expected a modes x modes matrix");
            for (int r = 0; r < f.modes; ++r) {
                if (!a[r].is_array() || static_cast<int>(a[r].size()) != f.modes) bad(join(ap, r), "expected a row of length modes");
                for (int c = 0; c < f.modes; ++c) m(r, c) = complex_num(a[r][c], join(join(ap, r), c));
            }
            return m;
        };
        f.squeeze_A = mat("A");
        f.squeeze_B = mat("B");
    }
    return f;
}

} // namespace

Backend parse_backend(const std::string& s, const std::string& path) {
    if (s == "continuum") return Backend::Continuum;
    if (s == "box") return Backend::Box;
    if (s == "oracle") return Backend::Oracle;
    bad(path, "backend must be continuum, box or oracle");
}

std::string to_string(Backend b) {
    switch (b) {
    case Backend::Continuum: return "continuum";
    case Backend::Box: return "box";
    case Backend::Oracle: return "oracle";
    }
    return "?";
}

RunConfig parse_config(const json& j) {
    only_keys(j, "", {"schema_version", "units", "backend", "order", "field", "detector", "quadrature", "oracle", "query",
                      "compare", "abc", "support_level"});
    RunConfig c;
    c.raw = j;
    if (!j.contains("schema_version")) bad("/schema_version", "required");
    c.schema_version = integer(j.at("schema_version"), "/schema_version");
    if (c.schema_version != kSchemaVersion) bad("/schema_version", "unsupported version " + std::to_string(c.schema_version));
    c.backend = parse_backend(str(j, "", "backend", "box"), "/backend");
    c.order = integer(j, "", "order", 2);
    if (c.order < 0 || c.order > 2) bad("/order", "must be 0, 1 or 2");
    c.field = field(j.contains("field") ? j.at("field") : json::object(), "/field", c.backend);
    const int d = c.field.d;

    c.meas.det = detector(j.contains("detector") ? j.at("detector") : json::object(), "/detector", d, &c.meas.psi, &c.meas.s);
    c.meas.support_level = num(j, "", "support_level", c.meas.support_level);
    if (!(c.meas.support_level > 0.0 && c.meas.support_level < 1.0)) bad("/support_level", "must lie in (0, 1)");
    if (c.meas.det.f.dim() != d) bad("/detector/smearing", "smearing dimension does not match the field");
    try {
        c.meas.validate();
    } catch (const ConfigError& e) {
        bad("/detector" + (e.path.empty() ? std::string() : "/" + e.path), e.what());
    }

    if (j.contains("quadrature")) {
        const auto& q = j.at("quadrature");
        only_keys(q, "/quadrature", {"fine", "coarse"});
        if (q.contains("fine")) c.quad.fine = quad(q.at("fine"), "/quadrature/fine", c.quad.fine);
        if (q.contains("coarse")) c.quad.coarse = quad(q.at("coarse"), "/quadrature/coarse", c.quad.coarse);
    }
    if (j.contains("oracle")) {
        const auto& o = j.at("oracle");
        only_keys(o, "/oracle", {"n_max", "total_quanta", "rtol", "atol", "dim_cap", "window_sigmas"});
        c.oracle.n_max = integer(o, "/oracle", "n_max", 4);
        if (o.contains("total_quanta")) c.oracle.total_quanta = integer(o.at("total_quanta"), "/oracle/total_quanta");
        c.oracle.options.rtol = num(o, "/oracle", "rtol", c.oracle.options.rtol);
        c.oracle.options.atol = num(o, "/oracle", "atol", c.oracle.options.atol);
        c.oracle.options.window_sigmas = num(o, "/oracle", "window_sigmas", c.oracle.options.window_sigmas);
        c.oracle.options.dim_cap = static_cast<size_t>(integer(o, "/oracle", "dim_cap", 4096));
    }
    if (c.backend == Backend::Oracle && c.field.d != 1) bad("/backend", "oracle backend needs the box field");

    if (j.contains("query")) {
        const auto& q = j.at("query");
        only_keys(q, "/query", {"mode", "tuples", "grid", "spacelike_only"});
        std::string mode = str(q, "/query", "mode", "NS");
        if (mode == "NS") c.query.mode = UpdateMode::NonSelective;
        else if (mode == "S") c.query.mode = UpdateMode::Selective;
        else bad("/query/mode", "must be NS or S");
        c.query.spacelike_only = boolean(q, "/query", "spacelike_only", false);
        if (q.contains("tuples")) {
            const auto& t = q.at("tuples");
            if (!t.is_array()) bad("/query/tuples", "expected a list of point tuples");
            for (size_t i = 0; i < t.size(); ++i) {
                auto tp = join("/query/tuples", i);
                if (!t[i].is_array() || t[i].empty()) bad(tp, "expected a non-empty list of events");
                std::vector<Event> tup;
                for (size_t k = 0; k < t[i].size(); ++k) tup.push_back(event(t[i][k], join(tp, k), d));
                if (!c.query.tuples.empty() && tup.size() != c.query.tuples.front().size())
                    bad(tp, "all tuples must have the same number of points");
                c.query.tuples.push_back(std::move(tup));
            }
        }
        if (q.contains("grid")) {
            // single-point rows on a (t, x) grid; further spatial coordinates zero
            const auto& g = q.at("grid");
            only_keys(g, "/query/grid", {"t", "x"});
            if (!g.contains("t") || !g.contains("x")) bad("/query/grid", "needs t and x ranges");
            if (!c.query.tuples.empty() && c.query.tuples.front().size() != 1)
                bad("/query/grid", "grid rows are single points; tuples have a different size");
            for (double t : linspace(g.at("t"), "/query/grid/t"))
                for (double x : linspace(g.at("x"), "/query/grid/x")) c.query.tuples.push_back({Event(t, Vec3{x, 0.0, 0.0}, d)});
        }
    }
    if (j.contains("compare")) {
        const auto& k = j.at("compare");
        only_keys(k, "/compare", {"lambdas", "flavor", "points"});
        if (k.contains("lambdas")) {
            const auto& l = k.at("lambdas");
            if (!l.is_array() || l.size() < 2) bad("/compare/lambdas", "need at least two couplings");
            c.compare.lambdas.clear();
            for (size_t i = 0; i < l.size(); ++i) {
                double v = num(l[i], join("/compare/lambdas", i));
                if (!(v > 0.0)) bad(join("/compare/lambdas", i), "must be positive");
                c.compare.lambdas.push_back(v);
            }
        }
        c.compare.flavor = str(k, "/compare", "flavor", "NS");
        if (c.compare.flavor != "NS" && c.compare.flavor != "S") bad("/compare/flavor", "must be NS or S");
        if (k.contains("points")) {
            const auto& p = k.at("points");
            if (!p.is_array()) bad("/compare/points", "expected a list of events");
            for (size_t i = 0; i < p.size(); ++i) c.compare.points.push_back(event(p[i], join("/compare/points", i), d));
        }
    }
    if (j.contains("abc")) {
        const auto& a = j.at("abc");
        only_keys(a, "/abc", {"L", "mass", "modes", "total_quanta", "mode", "support_level", "outcome", "A", "B", "C",
                              "factorization"});
        AbcConfig ac = AbcConfig::defaults();
        ac.L = num(a, "/abc", "L", ac.L);
        ac.mass = num(a, "/abc", "mass", ac.mass);
        ac.modes = integer(a, "/abc", "modes", ac.modes);
        ac.total_quanta = integer(a, "/abc", "total_quanta", ac.total_quanta);
        std::string mode = str(a, "/abc", "mode", "S");
        if (mode != "NS" && mode != "S") bad("/abc/mode", "must be NS or S");
        ac.selective = mode == "S";
        ac.support_level = num(a, "/abc", "support_level", ac.support_level);
        if (a.contains("outcome")) ac.c = det_state(a.at("outcome"), "/abc/outcome");
        for (auto [key, party] : {std::pair{"A", &ac.A}, std::pair{"B", &ac.B}, std::pair{"C", &ac.C}}) {
            if (!a.contains(key)) continue;
            std::string label = party->spec.label;
            party->spec = detector(a.at(key), join("/abc", key), 1, &party->psi, nullptr);
            party->spec.label = label;
        }
        if (a.contains("factorization")) {
            const auto& f = a.at("factorization");
            only_keys(f, "/abc/factorization", {"mode_counts", "probes"});
            if (f.contains("mode_counts")) {
                c.factorization_modes.clear();
                const auto& m = f.at("mode_counts");
                if (!m.is_array()) bad("/abc/factorization/mode_counts", "expected a list of integers");
                for (size_t i = 0; i < m.size(); ++i)
                    c.factorization_modes.push_back(integer(m[i], join("/abc/factorization/mode_counts", i)));
            }
            c.factorization_probes = integer(f, "/abc/factorization", "probes", 4);
        }
        ac.oracle = c.oracle.options;
        c.abc = ac;
    }
    return c;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("--config", "cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("--config", std::string("not valid JSON: ") + e.what());
    }
    return parse_config(j);
}

BoxModes box_modes(const FieldConfig& f) { return make_box_modes(f.L, f.mass, f.modes, f.include_zero); }

BoxField box_state(const FieldConfig& f) {
    auto m = box_modes(f);
    if (f.kind == "vacuum") return BoxField::vacuum(m);
    if (f.kind == "coherent") return BoxField::coherent(m, f.alpha);
    if (f.kind == "thermal") return BoxField::thermal(m, f.beta);
    if (f.kind == "squeezed_thermal") return BoxField::squeezed_thermal(m, f.beta, f.squeeze_A, f.squeeze_B);
    return BoxField::random_gaussian(m, f.seed, f.beta, f.strength);
}

std::unique_ptr<FieldState> make_state(const RunConfig& c) {
    const auto& f = c.field;
    if (c.backend == Backend::Continuum) {
        if (f.kind == "coherent") return std::make_unique<ContinuumField>(ContinuumField::coherent(f.d, f.mass, f.packet, f.continuum));
        return std::make_unique<ContinuumField>(ContinuumField::vacuum(f.d, f.mass, f.continuum));
    }
    return std::make_unique<BoxField>(box_state(f));
}

TruncatedSystem oracle_system(const RunConfig& c, const MeasurementSpec& m) {
    auto modes = box_modes(c.field);
    auto basis = c.oracle.total_quanta ? FockBasis::total(modes.size(), *c.oracle.total_quanta)
                                       : FockBasis::per_mode(modes.size(), c.oracle.n_max);
    return TruncatedSystem(modes, std::move(basis), {OracleDetector{m.det, m.psi, {}}}, c.oracle.options);
}

} // namespace udw::cli
