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

// Acceptance run: one PASS/FAIL line per criterion.

#include "generators.hpp"
#include "oracles.hpp"

#include <cstdio>
#include <string>

using namespace dcg;

namespace {

int failures = 0;

void report(int id, const CheckResult& r, double budget_s) {
  const bool in_time = r.seconds <= budget_s;
  const bool ok = r.passed && in_time;
  if (!ok) ++failures;
  std::printf("criterion %d: %s  %s: %s [%.2f s, budget %.0f s%s]\n", id, ok ? "PASS" : "FAIL", r.name.c_str(),
              r.detail.c_str(), r.seconds, budget_s, in_time ? "" : ", over budget");
  std::fflush(stdout);
}

// Target structural constants: NOOP 8 slots, DCG gate 16 slots, modified
// graph 5/12, H = 2 and CNOT = 6 primitives, cat circuit 14 primitives and
// 224 DCG slots.
CheckResult structural_constants() {
  return detail::timed("structural constants", [](CheckResult& r) {
    const int noop = static_cast<int>(compile_noop(3).slot_count(1.0));
    const int dcg = static_cast<int>(compile_dcg(GateSpec::zz(0, 1, 0.4), 3).slot_count(1.0));
    const CayleyGraph mg = modify_graph_for_gate(cayley_graph(dd_group_z2z2(3)));
    const auto h = decompose_gate(GateSpec::hadamard(0)).size();
    const auto cnot = decompose_gate(GateSpec::cnot(0, 1)).size();
    std::size_t prims = 0;
    for (const auto& g : cat_circuit()) prims += decompose_gate(g).size();
    const long slots = compile_circuit(cat_circuit(), CompileMode::Dcg, 3).slot_count(1.0);
    std::string text;
    bool ok = true;
    auto item = [&](const char* what, long got, long want) {
      const bool pass = got == want;
      ok = ok && pass;
      text += std::string(text.empty() ? "" : ", ") + what + " " + std::to_string(got) + (pass ? "" : " (want " + std::to_string(want) + ")");
    };
    item("noop slots", noop, 8);
    item("dcg slots", dcg, 16);
    item("graph vertices", mg.vertex_count(), 5);
    item("graph edges", mg.edge_count(), 12);
    item("H primitives", static_cast<long>(h), 2);
    item("CNOT primitives", static_cast<long>(cnot), 6);
    item("cat primitives", static_cast<long>(prims), 14);
    item("cat dcg slots", slots, 224);
    r.passed = ok;
    r.detail = text;
  });
}

CheckResult propagation_oracles() {
  return detail::timed("propagation oracles", [](CheckResult& r) {
    Rng rng(15);
    double worst_ode = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto em = ErrorModel::random_linear({2, 1}, 1.0, 0.5, rng);
      const auto seq = gen::sequence(2, 4, rng);
      worst_ode = std::max(worst_ode, (propagate(seq, em).matrix() - oracle::ode_propagate(seq, em)).cwiseAbs().maxCoeff());
    }
    double worst_expm = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const auto h = gen::hermitian({2, 2}, gen::uniform(rng, 0.1, 10.0), rng);
      const double t = gen::uniform(rng, 0.1, 2.0);
      worst_expm = std::max(worst_expm, (expm_unitary(h, t).matrix() - oracle::expm(h.matrix(), t)).cwiseAbs().maxCoeff());
    }
    r.passed = worst_ode <= 1e-8 && worst_expm <= 1e-10;
    r.detail = "max |U - U_ode| " + detail::sci(worst_ode) + " (want <= 1e-8); max |expm - pade| " +
               detail::sci(worst_expm) + " (want <= 1e-10)";
  });
}

}  // namespace

int main() {
  report(1, check_decoupling(), 1.0);
  report(2, structural_constants(), 60.0);
  report(3, check_equal_error_pair(), 10.0);
  report(4, check_first_order_cancellation(), 60.0);
  report(5, check_epg_scaling(), 120.0);

  std::vector<BenchmarkRecord> recs;
  const auto sweep_result = detail::timed("benchmark sweep", [&](CheckResult& r) {
    BenchConfig cfg = parse_config("");
    cfg.epsilon_values = {0.0};
    recs = sweep(cfg);
    cfg.epsilon_values = {1e-3};
    cfg.modes = {CompileMode::Dcg};
    const auto noisy = sweep(cfg);
    recs.insert(recs.end(), noisy.begin(), noisy.end());
    r.passed = recs.size() == 39;
    r.detail = std::to_string(recs.size()) + " points";
  });
  std::printf("        sweep: %s [%.1f s]\n", sweep_result.detail.c_str(), sweep_result.seconds);
  auto cone = check_cone(recs);
  if (!sweep_result.passed || sweep_result.seconds > 1800.0) {
    cone.passed = false;
    cone.detail += "; sweep " + sweep_result.detail + " in " + std::to_string(sweep_result.seconds) + " s (budget 1800 s)";
  }
  report(6, cone, 1800.0);
  report(7, check_plateau(recs), 60.0);
  report(8, propagation_oracles(), 120.0);

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
