#pragma once

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "qdyn/config.hpp"

namespace qdyn {

// Runs one scenario pipeline and writes its outputs (CSV tables plus
// manifest.json) under out_dir. Subcommands: dirac, quasicanon, soperator,
// oracle. Throws ConfigError / PolicyError; use guarded() for exit codes.
void run_single(const std::string& subcommand, const std::filesystem::path& config_path,
                const std::filesystem::path& out_dir, std::ostream& log);

// Joins two summary.csv files (perturbative vs exact) on the quantity column
// and writes a discrepancy table to out_path.
void run_compare(const std::filesystem::path& perturbative_csv,
                 const std::filesystem::path& exact_csv, const std::filesystem::path& out_path,
                 std::ostream& log);

// Runs one subcommand over several configs concurrently, each into
// out_root/<config stem>/.
void run_sweep(const std::string& subcommand,
               const std::vector<std::filesystem::path>& config_paths,
               const std::filesystem::path& out_root, std::ostream& log);

// Maps exceptions to process exit codes: 0 success, 2 ConfigError,
// 3 PolicyError, 1 anything else. Messages go to err.
int guarded(const std::function<void()>& body, std::ostream& err);

}  // namespace qdyn
