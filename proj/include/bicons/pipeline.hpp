#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "bicons/error.hpp"
#include "bicons/export.hpp"
#include "bicons/surface.hpp"
#include "bicons/verifier.hpp"

namespace bicons::pipeline {

inline constexpr const char* kVersion = "1.0.0";

struct RunConfig {
  surface::SurfaceParams surface;
  io::OutputFormat format = io::OutputFormat::Csv;
  io::Projection projection = io::Projection::None;
  std::string out_path;  // empty writes to stdout
  double fd_step = 1e-3;
  int obj_drop_axis = 4;
};

// Builds the grid and writes it in the configured format with a metadata
// header. OBJ needs the Poincare projection (meshes are 3-coordinate).
// Errors: InvalidArgument, IoFailure, plus whatever generate_grid raises.
void run_generate(const RunConfig& cfg);

// Builds the grid in memory, runs the check battery, renders the report to
// out_path or stdout. Returns 0 when every check passes, else 5; the report
// is emitted either way.
int run_verify(const RunConfig& cfg);

// Classifies the flow curves of three grid rows (near the edges and the
// middle) and prints one line per row plus a closing "class:" line.
int run_classify(const RunConfig& cfg);

struct SweepConfig {
  std::vector<double> c_values;
  std::vector<double> C_values;
  double f0_fraction = 0.4;  // f0 = fraction * upper admissible bound
  std::string out_dir;
  surface::SurfaceParams base;  // spans, resolution, tol; moduli overwritten
  double fd_step = 1e-3;
};

struct SweepPointResult {
  double c = 0.0, C = 0.0, f0 = 0.0;
  bool ran = false;  // false: skipped before verification could start
  bool passed = false;
  std::string detail;  // skip reason, or the per-point report path
};

// Verifies every (c, C) lattice point, concurrently up to BICONS_WORKERS
// threads. Per-point failures are recorded as skips, never fatal. Writes one
// report per completed point plus summary.txt (sorted by (c, C)) into
// out_dir, and returns the results in the same order.
std::vector<SweepPointResult> run_sweep(const SweepConfig& cfg);

void render_report(std::ostream& os, const verifier::CheckReport& rep);

// Process exit code for a raised Error: 2 validation, 3 numerics, 4 I/O.
int exit_code_for(ErrorKind kind) noexcept;

}  // namespace bicons::pipeline
