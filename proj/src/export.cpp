#include "bicons/export.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"

#include "bicons/error.hpp"

namespace bicons::io {
namespace {

// One projected row of coordinates: 5 raw or 4 ball coordinates.
std::vector<double> coords_of(const Vec5& x, Projection proj) {
  if (proj == Projection::None) return {x[0], x[1], x[2], x[3], x[4]};
  const auto y = project_poincare(x);
  return {y[0], y[1], y[2], y[3]};
}

std::vector<std::string> coord_columns(Projection proj) {
  if (proj == Projection::None) return {"x1", "x2", "x3", "x4", "x5"};
  return {"y1", "y2", "y3", "y4"};
}

}  // namespace

const char* to_string(OutputFormat f) noexcept {
  switch (f) {
    case OutputFormat::Csv: return "csv";
    case OutputFormat::Json: return "json";
    case OutputFormat::Obj: return "obj";
  }
  return "?";
}

const char* to_string(Projection p) noexcept {
  return p == Projection::None ? "none" : "poincare";
}

OutputFormat parse_format(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  if (name == "obj") return OutputFormat::Obj;
  fail(ErrorKind::InvalidArgument, "unknown format: " + name);
}

Projection parse_projection(const std::string& name) {
  if (name == "none") return Projection::None;
  if (name == "poincare") return Projection::Poincare;
  fail(ErrorKind::InvalidArgument, "unknown projection: " + name);
}

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::array<double, 4> project_poincare(const Vec5& x, double tol) {
  if (!on_hyperboloid(x, tol))
    fail(ErrorKind::NotOnHyperboloid, "Poincare projection needs <x,x> = -1, x5 > 0");
  const double s = 1.0 / (1.0 + x[4]);
  return {x[0] * s, x[1] * s, x[2] * s, x[3] * s};
}

void write_csv(std::ostream& os, const surface::SurfaceGrid& grid,
               Projection proj, const std::vector<std::string>& metadata) {
  for (const auto& line : metadata) os << "# " << line << '\n';
  os << "u,t";
  for (const auto& c : coord_columns(proj)) os << ',' << c;
  os << '\n';
  for (std::size_t i = 0; i < grid.params.nu; ++i) {
    for (std::size_t j = 0; j < grid.params.nt; ++j) {
      os << format_double(grid.u_values[i]) << ',' << format_double(grid.t_values[j]);
      for (double v : coords_of(grid.at(i, j), proj)) os << ',' << format_double(v);
      os << '\n';
    }
  }
}

void write_json(std::ostream& os, const surface::SurfaceGrid& grid,
                Projection proj, const std::vector<std::string>& metadata) {
  nlohmann::json j;
  j["metadata"] = metadata;
  j["case"] = frame_flow::to_string(grid.conic);
  j["projection"] = to_string(proj);
  j["columns"] = coord_columns(proj);
  const auto& p = grid.params;
  j["params"] = {{"c", p.moduli.c},   {"C", p.moduli.C},   {"f0", p.moduli.f0},
                 {"u_min", p.u_min},  {"u_max", p.u_max},  {"t_min", p.t_min},
                 {"t_max", p.t_max},  {"nu", p.nu},        {"nt", p.nt},
                 {"tol", p.tol}};
  j["u_values"] = grid.u_values;
  j["t_values"] = grid.t_values;
  auto& pts = j["points"] = nlohmann::json::array();
  for (std::size_t i = 0; i < p.nu; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (std::size_t jj = 0; jj < p.nt; ++jj)
      row.push_back(coords_of(grid.at(i, jj), proj));
    pts.push_back(std::move(row));
  }
  os << j.dump(2) << '\n';
}

void write_obj(std::ostream& os, const surface::SurfaceGrid& grid,
               int drop_axis, const std::vector<std::string>& metadata) {
  if (drop_axis < 1 || drop_axis > 4)
    fail(ErrorKind::InvalidArgument, "obj drop axis must be 1..4");
  for (const auto& line : metadata) os << "# " << line << '\n';
  const std::size_t nu = grid.params.nu, nt = grid.params.nt;
  for (std::size_t i = 0; i < nu; ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const auto y = project_poincare(grid.at(i, j));
      os << 'v';
      for (int k = 0; k < 4; ++k)
        if (k != drop_axis - 1) os << ' ' << format_double(y[k]);
      os << '\n';
    }
  }
  for (std::size_t i = 0; i + 1 < nu; ++i) {
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      const std::size_t a = i * nt + j + 1;
      os << "f " << a << ' ' << a + nt << ' ' << a + nt + 1 << ' ' << a + 1 << '\n';
    }
  }
}

namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = line.find(sep, start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string::npos) return out;
    start = pos + 1;
  }
}

double parse_number(const std::string& field) {
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end == field.c_str() || *end != '\0')
    fail(ErrorKind::IoFailure, "not a number: '" + field + "'");
  return v;
}

}  // namespace

GridData read_csv(std::istream& is) {
  GridData data;
  std::string line;
  bool have_header = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      data.metadata.push_back(line.substr(line.size() > 1 && line[1] == ' ' ? 2 : 1));
      continue;
    }
    if (!have_header) {
      data.columns = split(line, ',');
      have_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != data.columns.size())
      fail(ErrorKind::IoFailure, "csv row width does not match the header");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_number(f));
    data.rows.push_back(std::move(row));
  }
  if (!have_header) fail(ErrorKind::IoFailure, "csv input has no header row");
  return data;
}

GridData read_json(std::istream& is) {
  nlohmann::json j;
  try {
    is >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::IoFailure, std::string("json parse: ") + e.what());
  }
  try {
    GridData data;
    data.metadata = j.at("metadata").get<std::vector<std::string>>();
    data.columns = {"u", "t"};
    for (const auto& c : j.at("columns")) data.columns.push_back(c.get<std::string>());
    const auto u_values = j.at("u_values").get<std::vector<double>>();
    const auto t_values = j.at("t_values").get<std::vector<double>>();
    const auto& pts = j.at("points");
    for (std::size_t i = 0; i < pts.size(); ++i) {
      for (std::size_t jj = 0; jj < pts[i].size(); ++jj) {
        std::vector<double> row{u_values.at(i), t_values.at(jj)};
        for (const auto& v : pts[i][jj]) row.push_back(v.get<double>());
        data.rows.push_back(std::move(row));
      }
    }
    return data;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::IoFailure, std::string("json layout: ") + e.what());
  }
}

}  // namespace bicons::io
