// io.hpp - on-disk formats: the EXSC binary trajectory container, CSV
// tables, flat dotted-key config files, and key/value run reports.
//
// EXSC container, version 1, little-endian throughout:
//   offset  size  field
//   0       4     magic "EXSC"
//   4       4     u32 version (= 1)
//   8       4     u32 dimension d
//   12      4     u32 lmax
//   16      4     u32 ncomp
//   20      4     u32 node count
//   24      4     u32 orientation (0 exterior, 1 interior)
//   28      4     u32 reserved (= 0)
//   32      8     f64 t0
//   40      8     f64 dt
//   48      8     f64 smoothness s of the producing run
//   56      8     f64 r0
// followed by node count * 2 * ncomp * nbasis f64 coefficients, node-major,
// value slice before derivative slice, each component-major with
// (l, m)-ascending entries (the in-memory trajectory layout).
#pragma once

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "conformal.hpp"
#include "sphere.hpp"
#include "traj.hpp"

namespace exsc {

static_assert(std::endian::native == std::endian::little,
              "trajectory container assumes a little-endian host");

namespace detail {

inline void put_u32(std::string& b, std::uint32_t x) {
  b.append(reinterpret_cast<const char*>(&x), 4);
}
inline void put_f64(std::string& b, double x) { b.append(reinterpret_cast<const char*>(&x), 8); }

inline std::uint32_t get_u32(const char* p) {
  std::uint32_t x;
  std::memcpy(&x, p, 4);
  return x;
}
inline double get_f64(const char* p) {
  double x;
  std::memcpy(&x, p, 8);
  return x;
}

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline void save_trajectory(const std::string& path, const Trajectory& T,
                            const ConformalFrame& frame, double s) {
  const SphereBasis& b = *T.basis;
  std::string header;
  header.reserve(64);
  header.append("EXSC", 4);
  detail::put_u32(header, 1);
  detail::put_u32(header, std::uint32_t(b.d));
  detail::put_u32(header, std::uint32_t(b.lmax));
  detail::put_u32(header, std::uint32_t(T.ncomp));
  detail::put_u32(header, std::uint32_t(T.grid.n));
  detail::put_u32(header, frame.orient == Orientation::infinity_ ? 0u : 1u);
  detail::put_u32(header, 0);
  detail::put_f64(header, T.grid.t0);
  detail::put_f64(header, T.grid.dt);
  detail::put_f64(header, s);
  detail::put_f64(header, frame.r0);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_trajectory: cannot open " + path);
  out.write(header.data(), std::streamsize(header.size()));
  out.write(reinterpret_cast<const char*>(T.data.data()),
            std::streamsize(T.data.size() * sizeof(double)));
  if (!out) throw std::runtime_error("save_trajectory: write failed for " + path);
}

struct LoadedTrajectory {
  std::shared_ptr<SphereBasis> basis;
  ConformalFrame frame;
  double s = 0;
  Trajectory traj;
};

inline LoadedTrajectory load_trajectory(const std::string& path, int oversample = 4) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_trajectory: cannot open " + path);
  char h[64];
  in.read(h, 64);
  if (in.gcount() != 64)
    throw std::runtime_error("load_trajectory: " + path + " shorter than the 64-byte header");
  if (std::memcmp(h, "EXSC", 4) != 0)
    throw std::runtime_error("load_trajectory: magic mismatch at offset 0 (not a trajectory container)");
  std::uint32_t version = detail::get_u32(h + 4);
  if (version != 1)
    throw std::runtime_error("load_trajectory: unsupported container version " +
                             std::to_string(version));
  int d = int(detail::get_u32(h + 8));
  int lmax = int(detail::get_u32(h + 12));
  int ncomp = int(detail::get_u32(h + 16));
  int nnode = int(detail::get_u32(h + 20));
  std::uint32_t orient_code = detail::get_u32(h + 24);
  double t0 = detail::get_f64(h + 32), dt = detail::get_f64(h + 40);
  double s = detail::get_f64(h + 48), r0 = detail::get_f64(h + 56);
  if (d < 2 || d > 3 || lmax < 0 || ncomp < 1 || nnode < 2 || orient_code > 1)
    throw std::runtime_error("load_trajectory: header fields out of range in " + path);

  LoadedTrajectory out;
  out.basis = std::make_shared<SphereBasis>(SphereBasis::make(d, lmax, oversample));
  out.frame = orient_code == 0 ? ConformalFrame::infinity(d, r0) : ConformalFrame::zero(d, r0);
  out.s = s;
  TimeGrid grid;
  grid.t0 = t0;
  grid.dt = dt;
  grid.n = nnode;
  out.traj = Trajectory(*out.basis, grid, ncomp);
  std::size_t want = out.traj.data.size() * sizeof(double);
  in.read(reinterpret_cast<char*>(out.traj.data.data()), std::streamsize(want));
  if (std::size_t(in.gcount()) != want)
    throw std::runtime_error("load_trajectory: payload truncated at byte offset " +
                             std::to_string(64 + in.gcount()) + " of " + path +
                             " (expected " + std::to_string(64 + want) + " bytes total)");
  return out;
}

/// CSV with a header row and fixed column count; 17 significant digits.
inline void write_csv(const std::string& path, const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& columns) {
  if (!columns.empty())
    for (const auto& c : columns)
      if (c.size() != columns.front().size())
        throw std::invalid_argument("write_csv: ragged columns");
  if (header.size() != columns.size())
    throw std::invalid_argument("write_csv: header/column count mismatch");
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_csv: cannot open " + path);
  for (std::size_t j = 0; j < header.size(); ++j)
    out << (j ? "," : "") << header[j];
  out << "\n";
  std::size_t rows = columns.empty() ? 0 : columns.front().size();
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < columns.size(); ++j)
      out << (j ? "," : "") << detail::fmt17(columns[j][i]);
    out << "\n";
  }
  if (!out) throw std::runtime_error("write_csv: write failed for " + path);
}

/// Flat config file: one `dotted.key = value` per line, `#` comments,
/// blank lines ignored. Keys are unique; later duplicates override.
struct Config {
  std::map<std::string, std::string> kv;

  static Config parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str(), path);
  }

  static Config parse(const std::string& text, const std::string& origin = "<string>") {
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
      std::size_t a = s.find_first_not_of(" \t\r");
      std::size_t b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
      ++lineno;
      std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        throw std::runtime_error(origin + ":" + std::to_string(lineno) +
                                 ": expected `key = value`");
      std::string key = trim(line.substr(0, eq)), val = trim(line.substr(eq + 1));
      if (key.empty())
        throw std::runtime_error(origin + ":" + std::to_string(lineno) + ": empty key");
      c.kv[key] = val;
    }
    return c;
  }

  bool has(const std::string& key) const { return kv.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& dflt) const {
    auto it = kv.find(key);
    return it == kv.end() ? dflt : it->second;
  }
  std::string require_string(const std::string& key) const {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("config: missing required key `" + key + "`");
    return it->second;
  }
  double get_double(const std::string& key, double dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config: key `" + key + "` is not a number: " + it->second);
    }
  }
  int get_int(const std::string& key, int dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    try {
      std::size_t pos = 0;
      int v = std::stoi(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (const std::exception&) {
      throw std::runtime_error("config: key `" + key + "` is not an integer: " + it->second);
    }
  }
  bool get_bool(const std::string& key, bool dflt) const {
    auto it = kv.find(key);
    if (it == kv.end()) return dflt;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::runtime_error("config: key `" + key + "` is not a boolean: " + it->second);
  }
};

/// Ordered key/value run report; doubles at full precision.
struct Report {
  std::vector<std::pair<std::string, std::string>> rows;

  void add(const std::string& k, const std::string& v) { rows.emplace_back(k, v); }
  void add(const std::string& k, double v) { rows.emplace_back(k, detail::fmt17(v)); }
  void add(const std::string& k, int v) { rows.emplace_back(k, std::to_string(v)); }
  void add(const std::string& k, bool v) { rows.emplace_back(k, v ? "true" : "false"); }

  void write(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("report: cannot open " + path);
    for (const auto& [k, v] : rows) out << k << " = " << v << "\n";
    if (!out) throw std::runtime_error("report: write failed for " + path);
  }
  std::string str() const {
    std::string s;
    for (const auto& [k, v] : rows) s += k + " = " + v + "\n";
    return s;
  }
};

}  // namespace exsc
