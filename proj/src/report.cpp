#include "cloakspec/report.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <unistd.h>

#include "cloakspec/errors.hpp"

namespace cloakspec {

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + tmp + " for writing");
    out << content;
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      throw IoError("write to " + tmp + " failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    const std::string why = std::strerror(errno);
    std::remove(tmp.c_str());
    throw IoError("cannot rename output into " + path + ": " + why);
  }
}

std::string format_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json dtn_json(const DtNMatrix& d) {
  ordered_json j;
  j["omega"] = d.omega;
  j["modes"] = d.modes;
  j["radius"] = d.radius;
  j["entries"] = matrix_json(d.entries);
  return j;
}

ordered_json oracle_json(const OracleMatch& match) {
  ordered_json j;
  j["cutoff_omega"] = match.cutoff;
  ordered_json entries = ordered_json::array();
  for (const auto& e : match.entries) {
    entries.push_back({{"m", e.m},
                       {"oracle_omega", e.oracle},
                       {"computed_omega", e.nearest},
                       {"relative_error", e.relative_error},
                       {"matched", e.matched}});
  }
  j["entries"] = std::move(entries);
  j["unmatched_computed"] = match.unmatched;
  j["all_matched"] = match.ok;
  return j;
}

std::string sweep_csv(const std::vector<SweepRecord>& records) {
  std::ostringstream os;
  os << "epsilon,dtn_error,dofs,omega,modes\n";
  for (const auto& r : records) {
    os << format_double(r.epsilon) << ',' << format_double(r.dtn_error_value) << ',' << r.dofs
       << ',' << format_double(r.omega) << ',' << r.modes << '\n';
  }
  return os.str();
}

}  // namespace cloakspec
