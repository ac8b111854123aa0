/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "rgf/io.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include <json.hpp>

namespace rgf {

namespace {

using nlohmann::json;

static_assert(std::endian::native == std::endian::little,
              "file payloads are little-endian; big-endian hosts unsupported");

std::ifstream open_input(const std::filesystem::path& path, bool binary) {
  std::ifstream in(path, binary ? std::ios::binary : std::ios::in);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  return in;
}

FileFormat sniff(const std::filesystem::path& path, FileFormat format) {
  if (format != FileFormat::auto_detect) return format;
  std::ifstream in = open_input(path, true);
  const int c = in.peek();
  return c == '{' ? FileFormat::json_binary : FileFormat::csv;
}

json read_header(std::istream& in, const std::string& expected_format) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error("missing container header");
  json h;
  try {
    h = json::parse(line);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("malformed container header: ") + e.what());
  }
  if (h.value("format", "") != expected_format)
    throw std::runtime_error("expected a \"" + expected_format + "\" container");
  if (h.value("endianness", "little") != "little")
    throw std::runtime_error("only little-endian payloads are supported");
  if (!h.contains("nx") || !h.contains("ny"))
    throw std::runtime_error("container header is missing nx/ny");
  return h;
}

Field read_f64_section(std::istream& in, Index nx, Index ny,
                       const std::string& name) {
  Field out(nx, ny);
  // Eigen column-major (nx rows) matches the x-fastest raster layout.
  in.read(reinterpret_cast<char*>(out.data()),
          static_cast<std::streamsize>(sizeof(Scalar)) * nx * ny);
  if (!in)
    throw std::runtime_error("payload section \"" + name +
                             "\" is truncated (dimension mismatch?)");
  return out;
}

MaskField read_mask_section(std::istream& in, Index nx, Index ny) {
  std::vector<unsigned char> raw(static_cast<std::size_t>(nx * ny));
  in.read(reinterpret_cast<char*>(raw.data()),
          static_cast<std::streamsize>(raw.size()));
  if (!in) throw std::runtime_error("mask section is truncated");
  MaskField mask(nx, ny);
  for (Index j = 0; j < ny; ++j)
    for (Index i = 0; i < nx; ++i)
      mask(i, j) = raw[static_cast<std::size_t>(j * nx + i)] != 0;
  return mask;
}

void write_f64_section(std::ostream& out, const Field& f) {
  out.write(reinterpret_cast<const char*>(f.data()),
            static_cast<std::streamsize>(sizeof(Scalar)) * f.size());
}

// A key,value CSV: each logical section is one line "name,v1,v2,...".
// Scalar sections (nx, ny, ghost_width) take one value; field sections take
// either one value (uniform) or nx*ny values.
std::map<std::string, std::vector<double>> read_csv_sections(std::istream& in) {
  std::map<std::string, std::vector<double>> sections;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::string key;
    if (!std::getline(ss, key, ',')) continue;
    key.erase(0, key.find_first_not_of(" \t"));
    key.erase(key.find_last_not_of(" \t\r") + 1);
    if (key.empty()) continue;
    std::vector<double>& vals = sections[key];
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      try {
        vals.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw std::runtime_error("csv section \"" + key +
                                 "\" holds a non-numeric value");
      }
    }
  }
  return sections;
}

Field csv_field(const std::vector<double>& vals, Index nx, Index ny,
                const std::string& name) {
  if (vals.size() == 1) return Field::Constant(nx, ny, vals[0]);
  if (static_cast<Index>(vals.size()) != nx * ny)
    throw std::runtime_error("csv section \"" + name + "\" has " +
                             std::to_string(vals.size()) + " values, expected " +
                             std::to_string(nx * ny));
  Field out(nx, ny);
  std::memcpy(out.data(), vals.data(), sizeof(double) * vals.size());
  return out;
}

}  // namespace

Grid2D load_grid(const std::filesystem::path& path, FileFormat format) {
  Grid2D g;
  if (sniff(path, format) == FileFormat::json_binary) {
    std::ifstream in = open_input(path, true);
    const json h = read_header(in, "rgf-grid");
    g.nx = h["nx"].get<Index>();
    g.ny = h["ny"].get<Index>();
    g.ghost_width = h.value("ghost_width", Index(0));
    bool has_mask = false;
    for (const auto& sec : h.value("sections", std::vector<std::string>{})) {
      if (sec == "dx")
        g.dx = read_f64_section(in, g.nx, g.ny, "dx");
      else if (sec == "dy")
        g.dy = read_f64_section(in, g.nx, g.ny, "dy");
      else if (sec == "mask") {
        g.mask = read_mask_section(in, g.nx, g.ny);
        has_mask = true;
      } else
        throw std::runtime_error("unknown grid section \"" + sec + "\"");
    }
    if (g.dx.size() == 0 || g.dy.size() == 0)
      throw std::runtime_error("grid container is missing dx/dy sections");
    if (!has_mask) g.mask = MaskField::Constant(g.nx, g.ny, true);
    in.peek();
    if (!in.eof()) throw std::runtime_error("trailing bytes after grid payload");
  } else {
    std::ifstream in = open_input(path, false);
    auto sections = read_csv_sections(in);
    if (!sections.count("nx") || !sections.count("ny"))
      throw std::runtime_error("grid csv is missing nx/ny");
    g.nx = static_cast<Index>(sections["nx"].at(0));
    g.ny = static_cast<Index>(sections["ny"].at(0));
    g.ghost_width = sections.count("ghost_width")
                        ? static_cast<Index>(sections["ghost_width"].at(0))
                        : 0;
    if (!sections.count("dx") || !sections.count("dy"))
      throw std::runtime_error("grid csv is missing dx/dy");
    g.dx = csv_field(sections["dx"], g.nx, g.ny, "dx");
    g.dy = csv_field(sections["dy"], g.nx, g.ny, "dy");
    if (sections.count("mask")) {
      const Field m = csv_field(sections["mask"], g.nx, g.ny, "mask");
      g.mask = m != 0.0;
    } else {
      g.mask = MaskField::Constant(g.nx, g.ny, true);
    }
  }
  g.validate();
  return g;
}

void save_grid(const Grid2D& grid, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  json h{{"format", "rgf-grid"},
         {"nx", grid.nx},
         {"ny", grid.ny},
         {"ghost_width", grid.ghost_width},
         {"endianness", "little"},
         {"sections", {"dx", "dy", "mask"}}};
  out << h.dump() << '\n';
  write_f64_section(out, grid.dx);
  write_f64_section(out, grid.dy);
  std::vector<unsigned char> raw(static_cast<std::size_t>(grid.nx * grid.ny));
  for (Index j = 0; j < grid.ny; ++j)
    for (Index i = 0; i < grid.nx; ++i)
      raw[static_cast<std::size_t>(j * grid.nx + i)] = grid.mask(i, j) ? 1 : 0;
  out.write(reinterpret_cast<const char*>(raw.data()),
            static_cast<std::streamsize>(raw.size()));
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

ScaleField load_scale_field(const std::filesystem::path& path, const Grid2D& grid,
                            FileFormat format) {
  ScaleField s;
  if (sniff(path, format) == FileFormat::json_binary) {
    std::ifstream in = open_input(path, true);
    const json h = read_header(in, "rgf-scale");
    if (h["nx"].get<Index>() != grid.nx || h["ny"].get<Index>() != grid.ny)
      throw std::runtime_error("scale file dimensions do not match the grid");
    for (const auto& sec : h.value("sections", std::vector<std::string>{})) {
      if (sec == "rx")
        s.rx = read_f64_section(in, grid.nx, grid.ny, "rx");
      else if (sec == "ry")
        s.ry = read_f64_section(in, grid.nx, grid.ny, "ry");
      else
        throw std::runtime_error("unknown scale section \"" + sec + "\"");
    }
  } else {
    std::ifstream in = open_input(path, false);
    auto sections = read_csv_sections(in);
    if (sections.count("nx") &&
        static_cast<Index>(sections["nx"].at(0)) != grid.nx)
      throw std::runtime_error("scale file dimensions do not match the grid");
    if (sections.count("rx")) s.rx = csv_field(sections["rx"], grid.nx, grid.ny, "rx");
    if (sections.count("ry")) s.ry = csv_field(sections["ry"], grid.nx, grid.ny, "ry");
  }
  if (s.rx.size() == 0)
    throw std::runtime_error("scale file is missing the zonal (rx) component");
  if (s.ry.size() == 0)
    throw std::runtime_error("scale file is missing the meridional (ry) component");
  s.validate(grid);
  return s;
}

void save_scale_field(const ScaleField& scales, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  json h{{"format", "rgf-scale"},
         {"nx", scales.rx.rows()},
         {"ny", scales.rx.cols()},
         {"endianness", "little"},
         {"sections", {"rx", "ry"}}};
  out << h.dump() << '\n';
  write_f64_section(out, scales.rx);
  write_f64_section(out, scales.ry);
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

StateField load_state_field(const std::filesystem::path& path, const Grid2D& grid,
                            FileFormat format) {
  Field values;
  if (sniff(path, format) == FileFormat::json_binary) {
    std::ifstream in = open_input(path, true);
    const json h = read_header(in, "rgf-field");
    if (h["nx"].get<Index>() != grid.nx || h["ny"].get<Index>() != grid.ny)
      throw std::runtime_error("field file dimensions do not match the grid");
    values = read_f64_section(in, grid.nx, grid.ny, "values");
  } else {
    std::ifstream in = open_input(path, false);
    auto sections = read_csv_sections(in);
    if (!sections.count("values"))
      throw std::runtime_error("field csv is missing a values section");
    values = csv_field(sections["values"], grid.nx, grid.ny, "values");
  }
  return StateField::from(grid, std::move(values));
}

void save_state_field(const StateField& field, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  json h{{"format", "rgf-field"},
         {"nx", field.values.rows()},
         {"ny", field.values.cols()},
         {"endianness", "little"},
         {"sections", {"values"}}};
  out << h.dump() << '\n';
  write_f64_section(out, field.values);
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

ObsSet load_obs(const std::filesystem::path& path) {
  std::ifstream in = open_input(path, false);
  std::vector<std::array<double, 4>> rows;
  std::string line;
  Index lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::stringstream ss(line);
    std::array<double, 4> row{};
    std::string tok;
    int col = 0;
    bool numeric = true;
    while (std::getline(ss, tok, ',') && col < 4) {
      try {
        row[static_cast<std::size_t>(col++)] = std::stod(tok);
      } catch (const std::exception&) {
        numeric = false;
        break;
      }
    }
    if (!numeric) {
      if (rows.empty()) continue;  // header line
      throw std::runtime_error("obs row " + std::to_string(lineno) +
                               ": non-numeric value");
    }
    if (col != 4)
      throw std::runtime_error("obs row " + std::to_string(lineno) +
                               ": expected i,j,value,error_std");
    rows.push_back(row);
  }
  ObsSet obs;
  const Index n = static_cast<Index>(rows.size());
  obs.positions.resize(n, 2);
  obs.values.resize(n);
  obs.r_var.resize(n);
  for (Index k = 0; k < n; ++k) {
    obs.positions(k, 0) = rows[static_cast<std::size_t>(k)][0];
    obs.positions(k, 1) = rows[static_cast<std::size_t>(k)][1];
    obs.values[k] = rows[static_cast<std::size_t>(k)][2];
    const double std_dev = rows[static_cast<std::size_t>(k)][3];
    obs.r_var[k] = std_dev * std_dev;
  }
  return obs;
}

void save_obs(const ObsSet& obs, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "i,j,value,error_std\n";
  out.precision(17);
  for (Index k = 0; k < obs.size(); ++k)
    out << obs.positions(k, 0) << ',' << obs.positions(k, 1) << ','
        << obs.values[k] << ',' << std::sqrt(obs.r_var[k]) << '\n';
}

}  // namespace rgf
