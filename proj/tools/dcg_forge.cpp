// Copyright 2026 The dcg-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// dcg-forge: compile gates to pulse sequences, measure error phases and run
// the cat-state benchmark. Exit codes: 0 ok, 1 invariant failure, 2 bad input.

#include "dcgforge/dcgforge.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>

namespace {

constexpr int kOk = 0;
constexpr int kInvariant = 1;
constexpr int kConfig = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

int n_system_for(const dcg::GateSpec& g, int requested) {
  const int need = std::max(1, g.max_qubit() + 1);
  if (requested == 0) return need;
  if (requested < need) throw InputError("gate " + g.str() + " needs at least " + std::to_string(need) + " system qubits");
  return requested;
}

int run_sweep(const std::string& config_path, const std::string& out_path, bool no_timing, int threads, bool quiet) {
  dcg::BenchConfig cfg = dcg::parse_config(read_file(config_path));
  if (threads >= 0) cfg.threads = static_cast<unsigned>(threads);
  std::ofstream file;
  std::ostream* out = &std::cout;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw InputError("cannot write '" + out_path + "'");
    out = &file;
  }
  const std::size_t total = cfg.a_values.size() * cfg.epsilon_values.size() * cfg.modes.size();
  std::size_t done = 0;
  auto progress = [&](const dcg::BenchmarkRecord& r) {
    ++done;
    if (!quiet) {
      std::cerr << "[" << done << "/" << total << "] eps=" << r.epsilon << " " << dcg::to_string(r.mode)
                << " A=" << r.a << " loss=" << r.fidelity_loss << " (" << r.wall_time << " s)\n";
    }
  };
  const auto records = dcg::sweep(cfg, out, {!no_timing}, progress);
  const auto check = dcg::check_monotone(records);
  if (!check.passed) {
    std::cerr << "invariant failure: " << check.name << ": " << check.detail << "\n";
    return kInvariant;
  }
  return kOk;
}

int run_verify(bool full, bool quiet) {
  std::vector<dcg::CheckResult> results{dcg::check_structure(), dcg::check_decoupling(), dcg::check_equal_error_pair(),
                                        dcg::check_first_order_cancellation(), dcg::check_epg_scaling()};
  if (full) {
    dcg::BenchConfig cfg;
    cfg.epsilon_values = {0.0, 1e-3};
    const auto records = dcg::sweep(cfg);
    results.push_back(dcg::check_monotone(records));
    results.push_back(dcg::check_cone(records));
    results.push_back(dcg::check_plateau(records));
  } else {
    // Ideal control, no coupling: the cat state comes out exactly.
    results.push_back(dcg::detail::timed("ideal benchmark point", [](dcg::CheckResult& r) {
      dcg::BenchConfig cfg;
      cfg.n_bath = 2;
      const double lp = dcg::run_point(cfg, 0.0, 0.0, dcg::CompileMode::Primitive).fidelity_loss;
      const double ld = dcg::run_point(cfg, 0.0, 0.0, dcg::CompileMode::Dcg).fidelity_loss;
      r.passed = lp <= 1e-9 && ld <= 1e-9;
      r.detail = "primitive " + dcg::detail::sci(lp) + ", dcg " + dcg::detail::sci(ld);
    }));
  }
  bool ok = true;
  for (const auto& r : results) {
    ok = ok && r.passed;
    if (!quiet || !r.passed) {
      std::cout << (r.passed ? "PASS " : "FAIL ") << r.name << ": " << r.detail << " [" << std::fixed
                << std::setprecision(2) << r.seconds << " s]\n"
                << std::defaultfloat;
    }
  }
  return ok ? kOk : kInvariant;
}

int run_compile(const std::string& gate_text, const std::string& mode_text, double tau, int n_req, const std::string& shape,
                double epsilon, double h_max) {
  const dcg::GateSpec gate = dcg::GateSpec::parse(gate_text);
  dcg::CompileOptions opt;
  opt.tau = tau;
  opt.shape = dcg::PulseShape::from_name(shape);
  opt.epsilon = epsilon;
  opt.limits = {tau, h_max};
  const int n = n_system_for(gate, n_req);
  std::cout << dcg::to_text(dcg::compile_circuit({gate}, dcg::parse_mode(mode_text), n, opt));
  return kOk;
}

int run_epg(const std::string& gate_text, const std::string& mode_text, const std::string& sweep_text, int n_req,
            int n_bath, std::uint64_t seed, double bath_norm, double coupling_norm, const std::string& shape) {
  const dcg::GateSpec gate = dcg::GateSpec::parse(gate_text);
  const auto parts = dcg::detail::split(sweep_text, ':');
  if (parts.size() != 3) throw InputError("--tau-sweep expects start:stop:points");
  const auto taus = dcg::geometric_range(dcg::detail::parse_double(parts[0]), dcg::detail::parse_double(parts[1]),
                                         std::stoi(parts[2]));
  const int n = n_system_for(gate, n_req);
  dcg::Rng rng(seed);
  const dcg::ErrorModel em = dcg::ErrorModel::random_linear({n, n_bath}, bath_norm, coupling_norm, rng);
  const auto points = dcg::epg_tau_sweep(gate, dcg::parse_mode(mode_text), em, taus, dcg::PulseShape::from_name(shape));
  std::cout << "# dcg-forge epg gate=" << gate.str() << " mode=" << mode_text << " n_system=" << n << " n_bath=" << n_bath
            << " seed=" << seed << " bath_norm=" << bath_norm << " coupling_norm=" << coupling_norm << "\n"
            << "tau,epg_exact,epg_first_order,residual\n";
  for (const auto& p : points) {
    std::cout << dcg::detail::fmt_double(p.tau) << ',' << dcg::detail::fmt_double(p.epg_exact) << ','
              << dcg::detail::fmt_double(p.epg_first_order) << ',' << dcg::detail::fmt_double(p.residual) << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dcg-forge: dynamically corrected gate compiler and simulator"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  bool no_timing = false, quiet = false, full = false;
  int threads = -1;
  auto* sweep = app.add_subcommand("sweep", "run the cat-state benchmark sweep and emit CSV");
  sweep->add_option("--config", config_path, "key=value config file")->required();
  sweep->add_option("--out", out_path, "CSV path (default stdout)");
  sweep->add_flag("--no-timing", no_timing, "write wall_time_s as 0 for byte-stable output");
  sweep->add_option("--threads", threads, "worker threads (0 = all cores)");
  sweep->add_flag("-q,--quiet", quiet, "no progress on stderr");

  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  verify->add_flag("--full", full, "also run the full benchmark sweep checks");
  verify->add_flag("-q,--quiet", quiet, "print failures only");

  std::string gate_text, mode_text = "dcg", shape = "rect", tau_sweep;
  double tau = 1.0, epsilon = 0.0, h_max = std::numeric_limits<double>::infinity();
  int n_system = 0, n_bath = 2;
  std::uint64_t seed = 1;
  double bath_norm = 0.5, coupling_norm = 0.25;

  auto* compile = app.add_subcommand("compile", "emit the pulse sequence of one gate");
  compile->add_option("--gate", gate_text, "noop | x:Q:PHI | y:Q:PHI | zz:A,B:PHI | h:Q | cnot:C,T")->required();
  compile->add_option("--mode", mode_text, "primitive | dcg")->required();
  compile->add_option("--tau", tau, "slot duration tau_min")->required();
  compile->add_option("--n-system", n_system, "system qubits (default: smallest that fits)");
  compile->add_option("--shape", shape, "rect | tri | ramp");
  compile->add_option("--epsilon", epsilon, "relative amplitude error");
  compile->add_option("--h-max", h_max, "peak amplitude bound");

  auto* epg = app.add_subcommand("epg", "exact and first-order EPG against tau on a random linear model");
  epg->add_option("--gate", gate_text, "gate spec as for compile")->required();
  epg->add_option("--mode", mode_text, "primitive | dcg")->required();
  epg->add_option("--tau-sweep", tau_sweep, "start:stop:points, geometric spacing")->required();
  epg->add_option("--n-system", n_system, "system qubits (default: smallest that fits)");
  epg->add_option("--n-bath", n_bath, "bath qubits");
  epg->add_option("--seed", seed, "error-model seed");
  epg->add_option("--bath-norm", bath_norm, "spectral norm of H_B");
  epg->add_option("--coupling-norm", coupling_norm, "spectral norm of each B operator");
  epg->add_option("--shape", shape, "rect | tri | ramp");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*sweep) return run_sweep(config_path, out_path, no_timing, threads, quiet);
    if (*verify) return run_verify(full, quiet);
    if (*compile) return run_compile(gate_text, mode_text, tau, n_system, shape, epsilon, h_max);
    if (*epg) return run_epg(gate_text, mode_text, tau_sweep, n_system, n_bath, seed, bath_norm, coupling_norm, shape);
  } catch (const dcg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "failure: " << e.what() << "\n";
    return kInvariant;
  }
  return kOk;
}
