#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"

#include "bicons/pipeline.hpp"

namespace {

using bicons::Error;
using bicons::ErrorKind;

struct FormatNames {
  std::string format = "csv";
  std::string projection = "none";
};

std::string trim(std::string s) {
  const auto keep = [](unsigned char ch) { return !std::isspace(ch); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), keep));
  s.erase(std::find_if(s.rbegin(), s.rend(), keep).base(), s.end());
  return s;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value) {
  throw Error(ErrorKind::InvalidArgument,
              "config key '" + key + "': cannot parse value '" + value + "'");
}

double parse_number(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (end == value.c_str() || *end != '\0') bad_value(key, value);
  return x;
}

// Key=value file applied to options the command line left untouched. Keys
// match long option names without the leading dashes; '#' starts a comment.
class ConfigBindings {
 public:
  void number(std::string key, double* t) {
    add(std::move(key), [t](const std::string& k, const std::string& v) {
      *t = parse_number(k, v);
    });
  }
  void count(std::string key, std::size_t* t) {
    add(std::move(key), [t](const std::string& k, const std::string& v) {
      char* end = nullptr;
      const unsigned long x = std::strtoul(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0' || v.find('-') != std::string::npos)
        bad_value(k, v);
      *t = static_cast<std::size_t>(x);
    });
  }
  void integer(std::string key, int* t) {
    add(std::move(key), [t](const std::string& k, const std::string& v) {
      char* end = nullptr;
      const long x = std::strtol(v.c_str(), &end, 10);
      if (end == v.c_str() || *end != '\0') bad_value(k, v);
      *t = static_cast<int>(x);
    });
  }
  void text(std::string key, std::string* t) {
    add(std::move(key),
        [t](const std::string&, const std::string& v) { *t = v; });
  }
  void numbers(std::string key, std::vector<double>* t) {
    add(std::move(key), [t](const std::string& k, const std::string& v) {
      t->clear();
      std::size_t pos = 0;
      while (pos <= v.size()) {
        const std::size_t comma = std::min(v.find(',', pos), v.size());
        t->push_back(parse_number(k, trim(v.substr(pos, comma - pos))));
        pos = comma + 1;
      }
    });
  }

  // Skips keys whose option was given on the command line: flags override.
  void apply_file(const std::string& path, const CLI::App& cmd) const {
    std::ifstream is(path);
    if (!is) bicons::fail(ErrorKind::IoFailure, "cannot read config file: " + path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const std::size_t hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      line = trim(line);
      if (line.empty()) continue;
      const std::size_t eq = line.find('=');
      if (eq == std::string::npos)
        bicons::fail(ErrorKind::InvalidArgument,
                     "config line " + std::to_string(lineno) + ": expected key=value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      const auto it =
          std::find_if(entries_.begin(), entries_.end(),
                       [&key](const auto& e) { return e.first == key; });
      if (it == entries_.end())
        bicons::fail(ErrorKind::InvalidArgument, "unknown config key '" + key + "'");
      const CLI::Option* opt = cmd.get_option_no_throw("--" + key);
      if (opt != nullptr && opt->count() > 0) continue;
      it->second(key, value);
    }
  }

 private:
  using Apply = std::function<void(const std::string&, const std::string&)>;
  void add(std::string key, Apply apply) {
    entries_.emplace_back(std::move(key), std::move(apply));
  }
  std::vector<std::pair<std::string, Apply>> entries_;
};

void add_moduli_options(CLI::App* cmd, bicons::profile::ModuliParams& m,
                        ConfigBindings& cb) {
  cmd->add_option("--c", m.c, "shape-operator constant, non-zero");
  cmd->add_option("--C", m.C, "first-integral constant; sign picks the flow conic");
  cmd->add_option("--f0", m.f0, "mean curvature at u = 0, inside the admissible interval");
  cb.number("c", &m.c);
  cb.number("C", &m.C);
  cb.number("f0", &m.f0);
}

void add_grid_options(CLI::App* cmd, bicons::surface::SurfaceParams& p,
                      ConfigBindings& cb) {
  cmd->add_option("--u-min", p.u_min, "lower edge of the directrix span");
  cmd->add_option("--u-max", p.u_max, "upper edge of the directrix span");
  cmd->add_option("--t-min", p.t_min, "lower edge of the flow span");
  cmd->add_option("--t-max", p.t_max, "upper edge of the flow span");
  cmd->add_option("--nu", p.nu, "grid rows (u samples)");
  cmd->add_option("--nt", p.nt, "grid columns (t samples)");
  cmd->add_option("--tol", p.tol, "integrator local error tolerance");
  cb.number("u-min", &p.u_min);
  cb.number("u-max", &p.u_max);
  cb.number("t-min", &p.t_min);
  cb.number("t-max", &p.t_max);
  cb.count("nu", &p.nu);
  cb.count("nt", &p.nt);
  cb.number("tol", &p.tol);
}

void add_run_options(CLI::App* cmd, bicons::pipeline::RunConfig& rc, FormatNames& fn,
                     std::string& config_path, ConfigBindings& cb) {
  add_moduli_options(cmd, rc.surface.moduli, cb);
  add_grid_options(cmd, rc.surface, cb);
  cmd->add_option("--fd-step", rc.fd_step, "finite-difference probe step");
  cmd->add_option("--format", fn.format, "output format: csv, json, obj");
  cmd->add_option("--projection", fn.projection, "coordinates written: none, poincare");
  cmd->add_option("--out", rc.out_path, "output path (default stdout)");
  cmd->add_option("--config", config_path, "key=value config file; flags override it");
  cb.number("fd-step", &rc.fd_step);
  cb.text("format", &fn.format);
  cb.text("projection", &fn.projection);
  cb.text("out", &rc.out_path);
}

}  // namespace

int main(int argc, char** argv) {
  using namespace bicons;

  CLI::App app{"Construct, sample, and certify non-CMC biconservative surfaces "
               "in the hyperboloid model of H4"};
  app.require_subcommand(1);

  pipeline::RunConfig run;
  FormatNames fn;
  std::string config_path;
  ConfigBindings run_cb;
  bool run_cb_bound = false;

  // gen, ver, and cls share the bound structs, so the bindings registry is
  // filled only once; the option objects still exist per subcommand.
  const auto bind_run = [&](CLI::App* cmd) {
    if (run_cb_bound) {
      ConfigBindings scratch;
      add_run_options(cmd, run, fn, config_path, scratch);
    } else {
      add_run_options(cmd, run, fn, config_path, run_cb);
      run_cb_bound = true;
    }
  };

  CLI::App* gen = app.add_subcommand("generate", "write a sampled surface grid");
  bind_run(gen);
  gen->add_option("--drop-axis", run.obj_drop_axis,
                  "ball coordinate omitted by obj export (1..4)");
  run_cb.integer("drop-axis", &run.obj_drop_axis);

  CLI::App* ver =
      app.add_subcommand("verify", "generate in memory and run the check battery");
  bind_run(ver);

  CLI::App* cls =
      app.add_subcommand("classify-curve", "classify the flow curves of three grid rows");
  bind_run(cls);

  pipeline::SweepConfig sweep;
  ConfigBindings sweep_cb;
  CLI::App* swp = app.add_subcommand("sweep", "verify every point of a (c, C) lattice");
  swp->add_option("--c-values", sweep.c_values, "comma-separated c lattice")
      ->delimiter(',')
      ->required();
  swp->add_option("--C-values", sweep.C_values, "comma-separated C lattice")
      ->delimiter(',')
      ->required();
  swp->add_option("--f0-fraction", sweep.f0_fraction,
                  "f0 as a fraction of the upper admissible bound");
  swp->add_option("--out-dir", sweep.out_dir, "directory for reports and summary.txt")
      ->required();
  add_grid_options(swp, sweep.base, sweep_cb);
  swp->add_option("--fd-step", sweep.fd_step, "finite-difference probe step");
  swp->add_option("--config", config_path, "key=value config file; flags override it");
  sweep_cb.numbers("c-values", &sweep.c_values);
  sweep_cb.numbers("C-values", &sweep.C_values);
  sweep_cb.number("f0-fraction", &sweep.f0_fraction);
  sweep_cb.text("out-dir", &sweep.out_dir);
  sweep_cb.number("fd-step", &sweep.fd_step);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (swp->parsed()) {
      if (!config_path.empty()) sweep_cb.apply_file(config_path, *swp);
      const auto results = pipeline::run_sweep(sweep);
      std::size_t pass = 0, failed = 0, skipped = 0;
      for (const auto& r : results) {
        if (!r.ran)
          ++skipped;
        else if (r.passed)
          ++pass;
        else
          ++failed;
      }
      std::cout << "sweep: " << results.size() << " points, " << pass << " pass, "
                << failed << " fail, " << skipped << " skipped\n";
      return 0;
    }
    CLI::App* active = gen->parsed() ? gen : ver->parsed() ? ver : cls;
    if (!config_path.empty()) run_cb.apply_file(config_path, *active);
    run.format = io::parse_format(fn.format);
    run.projection = io::parse_projection(fn.projection);
    if (gen->parsed()) {
      pipeline::run_generate(run);
      return 0;
    }
    if (ver->parsed()) return pipeline::run_verify(run);
    return pipeline::run_classify(run);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << " [" << to_string(e.kind()) << "]\n";
    return pipeline::exit_code_for(e.kind());
  }
}
