#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloakspec/cloak.hpp"
#include "cloakspec/spectra.hpp"

namespace cloakspec {

using ordered_json = nlohmann::ordered_json;

/// Writes to a sibling temporary file and renames it over `path`, so a
/// failed run never leaves a partial file. Throws IoError.
void write_atomic(const std::string& path, const std::string& content);

/// Shortest round-trip decimal for CSV cells.
std::string format_double(double x);

ordered_json matrix_json(const Eigen::MatrixXd& m);
ordered_json dtn_json(const DtNMatrix& d);
ordered_json oracle_json(const OracleMatch& match);

/// `epsilon,dtn_error,dofs,omega,modes` plus one row per record.
std::string sweep_csv(const std::vector<SweepRecord>& records);

}  // namespace cloakspec
