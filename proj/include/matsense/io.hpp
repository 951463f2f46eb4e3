#pragma once

#include <filesystem>
#include <string>

#include "matsense/solvers.hpp"

namespace matsense::io {

/// Write-to-temp then rename, so interrupted runs never leave truncated files.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// "f64mat v1": {"format":"f64mat","version":1,"rows":n,"cols":n,
///               "data":[row-major doubles]}
void save_f64mat(const std::filesystem::path& path, const SymMatrix& a);
SymMatrix load_f64mat(const std::filesystem::path& path);

/// An instance on disk plus its optional ground truth.
struct Instance {
  MeasurementSet ms;
  std::optional<GroundTruth> ground_truth;
};

/// "msinst v1": {"format":"msinst","version":1,"n":..,"m":..,
///               "regime":"orthogonal" | {"rho":..},
///               "u":[[..]..] (row per measurement), "b":[..],
///               "ground_truth": optional path to an f64mat file}
void save_instance(const std::filesystem::path& path, const MeasurementSet& ms,
                   const std::optional<std::string>& ground_truth_path = std::nullopt);
Instance load_instance(const std::filesystem::path& path);

/// JSON mirror of SolverConfig fields; absent fields keep the passed defaults.
SolverConfig load_config(const std::filesystem::path& path, SolverConfig defaults);

void save_trace(const std::filesystem::path& path, const ConvergenceTrace& trace);

}  // namespace matsense::io
