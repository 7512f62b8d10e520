#include "bicons/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "bicons/frame_flow.hpp"
#include "bicons/profile.hpp"

namespace bicons::pipeline {
namespace {

std::vector<std::string> metadata_lines(const RunConfig& cfg,
                                        const surface::SurfaceGrid& grid) {
  using io::format_double;
  const auto& p = cfg.surface;
  std::vector<std::string> lines;
  lines.push_back(std::string("bicons ") + kVersion);
  lines.push_back("c=" + format_double(p.moduli.c) + " C=" + format_double(p.moduli.C) +
                  " f0=" + format_double(p.moduli.f0));
  lines.push_back(std::string("case=") + frame_flow::to_string(grid.conic));
  lines.push_back("u=[" + format_double(p.u_min) + "," + format_double(p.u_max) +
                  "] t=[" + format_double(p.t_min) + "," + format_double(p.t_max) +
                  "] nu=" + std::to_string(p.nu) + " nt=" + std::to_string(p.nt));
  lines.push_back("tol=" + format_double(p.tol) +
                  " projection=" + io::to_string(cfg.projection));
  return lines;
}

// Writes through `emit` to cfg.out_path, or to stdout when the path is empty.
template <class Emit>
void with_output(const std::string& out_path, Emit&& emit) {
  if (out_path.empty()) {
    emit(std::cout);
    std::cout.flush();
    return;
  }
  std::ofstream os(out_path);
  if (!os) fail(ErrorKind::IoFailure, "cannot open for writing: " + out_path);
  emit(os);
  os.flush();
  if (!os) fail(ErrorKind::IoFailure, "write failed: " + out_path);
}

std::string classify_line(const surface::SurfaceGrid& grid, std::size_t i) {
  const double dt = grid.t_values[1] - grid.t_values[0];
  std::vector<Vec5> row;
  row.reserve(grid.params.nt);
  for (std::size_t j = 0; j < grid.params.nt; ++j) row.push_back(grid.at(i, j));
  const verifier::ConicClassification cls = verifier::classify_e2_curve(row, dt);
  std::ostringstream os;
  os << "u=" << io::format_double(grid.u_values[i])
     << " class=" << verifier::to_string(cls.conic)
     << " planarity=" << io::format_double(cls.planarity_ratio)
     << " kappa_fit=" << io::format_double(cls.fitted_curvature);
  return os.str();
}

}  // namespace

void run_generate(const RunConfig& cfg) {
  if (cfg.format == io::OutputFormat::Obj && cfg.projection != io::Projection::Poincare)
    fail(ErrorKind::InvalidArgument, "obj output requires --projection poincare");
  const surface::SurfaceGrid grid = surface::generate_grid(cfg.surface);
  const auto meta = metadata_lines(cfg, grid);
  with_output(cfg.out_path, [&](std::ostream& os) {
    switch (cfg.format) {
      case io::OutputFormat::Csv: io::write_csv(os, grid, cfg.projection, meta); break;
      case io::OutputFormat::Json: io::write_json(os, grid, cfg.projection, meta); break;
      case io::OutputFormat::Obj: io::write_obj(os, grid, cfg.obj_drop_axis, meta); break;
    }
  });
}

int run_verify(const RunConfig& cfg) {
  const surface::SurfaceGrid grid = surface::generate_grid(cfg.surface);
  const verifier::CheckReport rep = verifier::run_checks(grid, cfg.fd_step);
  with_output(cfg.out_path, [&](std::ostream& os) { render_report(os, rep); });
  return rep.all_pass ? 0 : 5;
}

int run_classify(const RunConfig& cfg) {
  const surface::SurfaceGrid grid = surface::generate_grid(cfg.surface);
  const std::size_t nu = grid.params.nu;
  std::vector<std::size_t> rows{2, nu / 2, nu - 3};
  rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
  with_output(cfg.out_path, [&](std::ostream& os) {
    for (std::size_t i : rows) os << classify_line(grid, i) << '\n';
    os << "class: " << verifier::to_string(verifier::expected_class(grid.conic))
       << '\n';
  });
  return 0;
}

void render_report(std::ostream& os, const verifier::CheckReport& rep) {
  std::size_t width = 0;
  for (const auto& e : rep.entries) width = std::max(width, e.name.size());
  for (const auto& e : rep.entries) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%-*s  %12.5e %s %9.1e  %s",
                  static_cast<int>(width), e.name.c_str(), e.value,
                  e.less_is_pass ? "<=" : ">=", e.bound, e.pass ? "PASS" : "FAIL");
    os << buf << '\n';
  }
  os << "overall: " << (rep.all_pass ? "PASS" : "FAIL") << '\n';
}

namespace {

unsigned worker_count(std::size_t points) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BICONS_WORKERS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v >= 1) n = static_cast<unsigned>(std::min<long>(v, 64));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(points, 1)));
}

std::string point_tag(double c, double C) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "c%g_C%g", c, C);
  return buf;
}

}  // namespace

std::vector<SweepPointResult> run_sweep(const SweepConfig& cfg) {
  if (cfg.c_values.empty() || cfg.C_values.empty())
    fail(ErrorKind::InvalidArgument, "sweep needs at least one c and one C value");
  if (!(cfg.f0_fraction > 0.0 && cfg.f0_fraction < 1.0))
    fail(ErrorKind::InvalidArgument, "f0 fraction must lie in (0, 1)");
  if (cfg.out_dir.empty())
    fail(ErrorKind::InvalidArgument, "sweep needs an output directory");
  std::error_code ec;
  std::filesystem::create_directories(cfg.out_dir, ec);
  if (ec) fail(ErrorKind::IoFailure, "cannot create directory: " + cfg.out_dir);

  std::vector<double> cs = cfg.c_values, Cs = cfg.C_values;
  std::sort(cs.begin(), cs.end());
  std::sort(Cs.begin(), Cs.end());
  std::vector<SweepPointResult> results;
  for (double c : cs)
    for (double C : Cs) results.push_back({c, C, 0.0, false, false, ""});

  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t k = next.fetch_add(1);
      if (k >= results.size()) return;
      SweepPointResult& r = results[k];
      try {
        r.f0 = cfg.f0_fraction * profile::upper_admissible_bound(r.c, r.C);
        RunConfig run;
        run.surface = cfg.base;
        run.surface.moduli = {r.c, r.C, r.f0};
        run.fd_step = cfg.fd_step;
        run.out_path = (std::filesystem::path(cfg.out_dir) /
                        ("report_" + point_tag(r.c, r.C) + ".txt"))
                           .string();
        r.passed = run_verify(run) == 0;
        r.ran = true;
        r.detail = run.out_path;
      } catch (const Error& e) {
        r.ran = false;
        r.detail = std::string(to_string(e.kind())) + ": " + e.what();
      }
    }
  };
  const unsigned workers = worker_count(results.size());
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned i = 0; i < workers; ++i) pool.emplace_back(work);
  for (auto& t : pool) t.join();

  const std::string summary_path =
      (std::filesystem::path(cfg.out_dir) / "summary.txt").string();
  std::ofstream os(summary_path);
  if (!os) fail(ErrorKind::IoFailure, "cannot open for writing: " + summary_path);
  for (const auto& r : results) {
    os << "c=" << io::format_double(r.c) << " C=" << io::format_double(r.C);
    if (r.ran)
      os << " f0=" << io::format_double(r.f0) << ' ' << (r.passed ? "PASS" : "FAIL")
         << '\n';
    else
      os << " SKIP (" << r.detail << ")\n";
  }
  os.flush();
  if (!os) fail(ErrorKind::IoFailure, "write failed: " + summary_path);
  return results;
}

int exit_code_for(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::StepFailure:
    case ErrorKind::DriftExceeded:
    case ErrorKind::DegenerateMetric:
    case ErrorKind::ZeroMeanCurvature:
    case ErrorKind::NegativeNormSquared:
    case ErrorKind::NotOnHyperboloid:
      return 3;
    case ErrorKind::IoFailure:
      return 4;
    default:
      return 2;
  }
}

}  // namespace bicons::pipeline
