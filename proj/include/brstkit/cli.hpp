#pragma once

// The wcli driver: run configuration, the five subcommands, and report output.

#include "brstkit/cohomod.hpp"
#include "brstkit/io.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace brstkit::cli {

inline constexpr const char* kThreadsEnv = "BRSTKIT_THREADS";
inline constexpr const char* kOutputDirEnv = "BRSTKIT_OUTPUT_DIR";

struct RunConfig {
    std::string algebra;                 // path of the algebra-spec file
    std::optional<Json> grading;         // {"element": {...}} or {"degrees": {...}}
    std::optional<Json> e;
    int a = 2;
    Json polarization = "sec1";          // preset name or {"iota_from", "eps_from", "boson_from"}
    Rat level = 1;
    Json beta = "beta_e";                // "beta_e" | "zero" | [[label, mode, value], ...]
    std::optional<Json> isotropic;       // subspace, or a path to a file holding one
    std::optional<Json> pair;            // {"m": ..., "n": ...}, or a path
    std::string complex = "adjusted";    // adjusted | ordinary | ordinary-twisted | compare
    std::string suite;
    std::vector<std::string> suites;     // for report; empty means every suite
    int cutoff = 2;
    int max_bosons = 1;
    std::size_t budget = 20000;
    std::vector<int> cutoffs{2, 3, 4};
    int samples = 20;
    std::uint64_t seed = 1;
    int max_mode = 2;
    int search_bound = 0;                // admissible: grid search for isotropic lines when > 0
    std::string output_dir = "out";
    int threads = 0;
    bool timing = false;
    std::string base_dir = ".";          // relative paths in the config resolve against this
};

/// Unknown keys and ill-typed values throw InputError.
RunConfig config_from_json(const Json& doc, const std::string& base_dir);
RunConfig load_config(const std::string& path);
/// BRSTKIT_THREADS and BRSTKIT_OUTPUT_DIR.
void apply_env(RunConfig& cfg);

struct Outcome {
    int code = 0;  // 0 pass, 1 mathematical witness or refusal, 2 input error
    Json report;
    std::vector<std::pair<std::string, std::string>> files;  // file name -> contents
    std::vector<std::string> summary;
};

Outcome cmd_algebra_check(const RunConfig& cfg);
Outcome cmd_admissible(const RunConfig& cfg);
Outcome cmd_verify(const RunConfig& cfg, const std::string& suite);
Outcome cmd_cohomology(const RunConfig& cfg);
Outcome cmd_report(const RunConfig& cfg);

const std::vector<std::string>& suite_names();

/// Full command line: parses, runs, writes the report files and returns the exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace brstkit::cli
