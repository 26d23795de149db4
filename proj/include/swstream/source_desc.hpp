#ifndef SWSTREAM_SOURCE_DESC_HPP
#define SWSTREAM_SOURCE_DESC_HPP

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "swstream/joint_pmf.hpp"

namespace swstream {

/// Parsed source descriptor. Grammar:
///   dsbs:p=<f> | zchannel:delta=<f> | asym:p=<f> | custom:<path>
/// where the custom path is a CSV grid of probabilities, one x-row per line
/// in row-major (x-major) order.
struct SourceDesc {
  std::string family;  // dsbs, zchannel, asym, custom
  double param = 0;    // family parameter (unused for custom)
  std::string path;    // custom only
};

inline SourceDesc parse_source_desc(const std::string& desc) {
  const auto colon = desc.find(':');
  if (colon == std::string::npos) throw std::invalid_argument("source descriptor: missing ':' in \"" + desc + "\"");
  SourceDesc d;
  d.family = desc.substr(0, colon);
  const std::string rest = desc.substr(colon + 1);
  if (d.family == "custom") {
    if (rest.empty()) throw std::invalid_argument("source descriptor: custom needs a path");
    d.path = rest;
    return d;
  }
  const std::string key = d.family == "zchannel" ? "delta=" : "p=";
  if (rest.rfind(key, 0) != 0)
    throw std::invalid_argument("source descriptor: expected " + d.family + ":" + key + "<f>");
  try {
    std::size_t used = 0;
    d.param = std::stod(rest.substr(key.size()), &used);
    if (used != rest.size() - key.size()) throw std::invalid_argument("trailing junk");
  } catch (const std::exception&) {
    throw std::invalid_argument("source descriptor: bad numeric value in \"" + desc + "\"");
  }
  return d;
}

inline JointPmf load_custom_pmf(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("custom source: cannot open " + path);
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r,") == std::string::npos) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      if (cell.find_first_not_of(" \t\r") == std::string::npos) continue;
      row.push_back(std::stod(cell));
    }
    if (!row.empty()) rows.push_back(std::move(row));
  }
  if (rows.empty()) throw std::invalid_argument("custom source: no rows in " + path);
  const std::size_t ny = rows.front().size();
  std::vector<double> flat;
  for (const auto& r : rows) {
    if (r.size() != ny) throw std::invalid_argument("custom source: ragged rows in " + path);
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return JointPmf(rows.size(), ny, std::move(flat));
}

inline JointPmf make_source(const SourceDesc& d) {
  if (d.family == "dsbs") return make_dsbs(d.param);
  if (d.family == "zchannel") return make_zchannel(d.param);
  if (d.family == "asym") return make_asymmetric(d.param);
  if (d.family == "custom") return load_custom_pmf(d.path);
  throw std::invalid_argument("source descriptor: unknown family \"" + d.family + "\"");
}

inline JointPmf make_source(const std::string& desc) { return make_source(parse_source_desc(desc)); }

}  // namespace swstream

#endif
