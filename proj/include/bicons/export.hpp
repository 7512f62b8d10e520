#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "bicons/minkowski.hpp"
#include "bicons/surface.hpp"

namespace bicons::io {

enum class OutputFormat { Csv, Json, Obj };
enum class Projection { None, Poincare };

const char* to_string(OutputFormat f) noexcept;
const char* to_string(Projection p) noexcept;

// Errors: InvalidArgument for unrecognized names.
OutputFormat parse_format(const std::string& name);
Projection parse_projection(const std::string& name);

// Shortest exact decimal form: parsing the result recovers x bit for bit.
std::string format_double(double x);

// Hyperboloid-to-ball chart y_i = x_i / (1 + x5); the image satisfies
// sum y_i^2 < 1. Errors: NotOnHyperboloid when |<x,x>+1| > tol or x5 <= 0.
std::array<double, 4> project_poincare(const Vec5& x, double tol = 1e-6);

// Parsed-back grid file: column names plus one numeric row per grid node.
// metadata holds the leading comment lines with the "# " prefix stripped.
struct GridData {
  std::vector<std::string> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

// Rows ordered (u outer, t inner) matching SurfaceGrid storage; columns are
// u,t,x1..x5 unprojected and u,t,y1..y4 under the Poincare projection.
void write_csv(std::ostream& os, const surface::SurfaceGrid& grid,
               Projection proj, const std::vector<std::string>& metadata);

void write_json(std::ostream& os, const surface::SurfaceGrid& grid,
                Projection proj, const std::vector<std::string>& metadata);

// Wavefront mesh of the Poincare image with quad faces; drop_axis in 1..4
// names the ball coordinate omitted from the 3-vector written per vertex.
// Errors: InvalidArgument for drop_axis outside 1..4.
void write_obj(std::ostream& os, const surface::SurfaceGrid& grid,
               int drop_axis, const std::vector<std::string>& metadata);

// Errors: IoFailure on malformed content (missing header, short row, or a
// field that is not a number).
GridData read_csv(std::istream& is);
GridData read_json(std::istream& is);

}  // namespace bicons::io
