#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace heisenfft {

enum class Scenario {
    PropagatorSelftest,
    Annihilation,
    Observability,
    Counterexample,
    ReductionChain,
};

const char* scenario_name(Scenario s);

struct Diagnostic {
    std::string field;     // config path, e.g. "grid.N"
    std::string message;
    bool fatal = false;
};

/// Declarative experiment description; schema "heisenfft-config/1".
/// Unknown keys anywhere in the document are validation errors.
struct ExperimentConfig {
    Scenario scenario = Scenario::PropagatorSelftest;
    std::uint64_t seed = 1;
    std::string raw_json;   // normalized config document (serialized)

    static ExperimentConfig from_json_text(const std::string& text,
                                           std::vector<Diagnostic>* diags);
    static std::string default_json(Scenario s);
};

struct RunResult {
    int exit_code = 0;                  // 0 pass, 1 assertion failure, 2 invalid config
    std::string failed_invariant;       // set when exit_code == 1
    std::string report_json;            // deterministic content (no timestamps)
    std::map<std::string, std::string> artifacts;  // filename -> content (CSV, ...)
};

/// Executes the scenario.  Deterministic: identical config + seed produce
/// byte-identical report_json and artifacts.
RunResult run_experiment(const ExperimentConfig& config);

/// Non-fatal preflight diagnostics (singular-lambda collisions, boundary
/// decay pre-estimates); empty iff run_experiment's preconditions hold.
std::vector<Diagnostic> validate_config(const ExperimentConfig& config);

/// Writes report.json, run_meta.json (timestamp lives there, not in the
/// report) and CSV/HSNF artifacts into out_dir.  Returns the exit code.
int run_to_directory(const ExperimentConfig& config, const std::string& out_dir);

} // namespace heisenfft
