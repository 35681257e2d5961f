#pragma once

#include <json.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "udw/causality.hpp"
#include "udw/oracle.hpp"
#include "udw/scenarios.hpp"

namespace udw::cli {

using nlohmann::json;

enum class Backend { Continuum, Box, Oracle };

Backend parse_backend(const std::string& s, const std::string& path);
std::string to_string(Backend b);

struct FieldConfig {
    std::string kind = "vacuum";
    int d = 1;
    double mass = 0.0;
    // box
    double L = 10.0;
    int modes = 3;
    bool include_zero = false;
    Eigen::VectorXcd alpha;
    double beta = 0.0;
    unsigned seed = 1;
    double strength = 0.3;
    Eigen::MatrixXcd squeeze_A, squeeze_B;
    // continuum
    ContinuumField::Packet packet;
    ContinuumOptions continuum;
};

struct OracleConfig {
    int n_max = 4;
    std::optional<int> total_quanta;
    OracleOptions options;
};

struct QueryConfig {
    UpdateMode mode = UpdateMode::NonSelective;
    std::vector<std::vector<Event>> tuples;
    bool spacelike_only = false;
};

struct CompareConfig {
    std::vector<double> lambdas{0.1, 0.05, 0.025, 0.0125};
    std::string flavor = "NS";  // NS | S
    std::vector<Event> points;
};

struct RunConfig {
    int schema_version = 1;
    Backend backend = Backend::Box;
    int order = 2;
    FieldConfig field;
    MeasurementSpec meas;
    QuadOptions quad;
    OracleConfig oracle;
    QueryConfig query;
    CompareConfig compare;
    std::optional<AbcConfig> abc;
    std::vector<int> factorization_modes{4, 8, 16};
    int factorization_probes = 4;
    json raw;
};

inline constexpr int kSchemaVersion = 1;

// throws ConfigError with a JSON-pointer-like path
RunConfig parse_config(const json& j);
RunConfig load_config(const std::string& path);

// state construction for the chosen backend
std::unique_ptr<FieldState> make_state(const RunConfig& c);
BoxModes box_modes(const FieldConfig& f);
BoxField box_state(const FieldConfig& f);
TruncatedSystem oracle_system(const RunConfig& c, const MeasurementSpec& m);

} // namespace udw::cli
