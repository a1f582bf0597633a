#ifndef QVEPAIR_CONFIG_HPP
#define QVEPAIR_CONFIG_HPP

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qvepair/field.hpp"
#include "qvepair/solver.hpp"
#include "qvepair/sweeps.hpp"

namespace qvepair {

enum class Command { Spectrum, Density, Sweep, OracleCheck };

std::string to_string(Command command);
std::optional<Command> command_from_string(const std::string& text);

struct OracleCheckConfig {
    std::vector<double> momenta;
    std::optional<double> step;  ///< unset: half the per-mode step limit
    double tolerance = 1e-4;
    double f_floor = 1e-20;  ///< modes with f_oracle at or below this are reported but not judged
};

struct SweepConfig {
    SweepKind kind = SweepKind::ChirpMagnitude;
    std::vector<double> axis;
    std::vector<SweepVariant> variants;
    bool write_spectra = false;
};

struct OutputConfig {
    std::string directory = "out";
    bool overwrite = false;
};

/// A fully validated run description with every default filled in.
struct RunConfig {
    int schema_version = 1;
    std::optional<Command> command;
    FieldConfig field;
    ValidationPolicy validation;
    GridPolicy grid;
    SolverOptions solver;  ///< t_start / t_end always set after parsing
    std::optional<SweepConfig> sweep;
    std::optional<OracleCheckConfig> oracle;
    OutputConfig output;
};

struct ConfigError {
    std::string pointer;  ///< JSON pointer to the offending value, "" for the document
    std::string message;
};

struct ParseResult {
    std::optional<RunConfig> config;
    std::vector<ConfigError> errors;  ///< every violation found, not just the first

    bool ok() const { return config.has_value(); }
};

ParseResult parse_config(const std::string& text);
ParseResult parse_config(const nlohmann::json& doc);

nlohmann::json to_json(const FieldConfig& field);
nlohmann::json to_json(const RunConfig& config);

/// Reads a FieldConfig object ({"pulses": [...]}); errors are appended with `pointer` as prefix.
FieldConfig field_from_json(const nlohmann::json& j, const std::string& pointer, std::vector<ConfigError>& errors);

}  // namespace qvepair

#endif  // QVEPAIR_CONFIG_HPP
