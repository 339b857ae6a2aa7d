// Copyright 2026 The cswap-lab Authors
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



// cswap-lab: run the named experiments, generic sweeps and shot sampling,
// writing CSV schema v1.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cswap/cswap.hpp"
#include "validate.hpp"

#ifndef CSWAP_LAB_GOLDEN
#define CSWAP_LAB_GOLDEN "golden.json"
#endif

namespace {

using namespace cswap;
using namespace cswap::lab;

constexpr int kOk = 0, kFailure = 1, kUsage = 2;

struct Options {
  std::string experiment;
  std::string out;
  std::uint64_t seed = kDefaultSeed;
  std::uint64_t shots = 0;
  std::optional<std::size_t> workers;
  std::vector<std::string> grid;
  std::string bit_order = "GROUP_FIRST";
  std::string family, test = "full";
  std::string golden = CSWAP_LAB_GOLDEN;
};

void add_common(CLI::App* c, Options& o, bool experiment) {
  if (experiment) c->add_option("--experiment", o.experiment, "experiment id, or 'all'")->required();
  c->add_option("--out", o.out, "output file or directory (default stdout)");
  c->add_option("--seed", o.seed, "seed for randomized states and shots");
  c->add_option("--shots", o.shots, "shots per row (0: exact only)");
  c->add_option("--workers", o.workers, "worker threads (env CSWAP_LAB_WORKERS)")
      ->check(CLI::PositiveNumber);
  c->add_option("--grid", o.grid, "KEY=START:STOP:STEPS or KEY=VALUE")->take_all();
  c->add_option("--bit-order", o.bit_order, "GROUP_FIRST or GROUP_LAST")
      ->check(CLI::IsMember({"GROUP_FIRST", "GROUP_LAST"}));
}

Context context(const Options& o) {
  Context c;
  c.seed = o.seed;
  c.shots = o.shots;
  c.bit_order = parse_bit_order(o.bit_order);
  return c;
}

std::vector<Axis> overrides(const Options& o) {
  std::vector<Axis> v;
  for (const auto& g : o.grid) v.push_back(parse_grid_override(g));
  return v;
}

std::size_t workers(const Options& o) { return o.workers ? *o.workers : workers_from_env(); }

void emit(const Table& t, const std::string& path) {
  if (path.empty() || path == "-") {
    t.write(std::cout);
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot open " + path);
  t.write(f);
}

int cmd_list() {
  for (const auto& e : experiments()) {
    std::cout << e.id << '\t';
    for (std::size_t i = 0; i < e.axes.size(); ++i) {
      const auto& a = e.axes[i];
      std::cout << (i ? " " : "") << a.key << '=' << csv::format(a.start) << ':'
                << csv::format(a.stop) << ':' << a.steps;
    }
    std::cout << '\t' << e.description << (e.randomized ? " (seeded)" : "") << '\n';
  }
  return kOk;
}

int cmd_run(const Options& o) {
  const auto ctx = context(o);
  if (o.experiment != "all") {
    emit(run(find_experiment(o.experiment), ctx, overrides(o), workers(o)), o.out);
    return kOk;
  }
  if (o.out.empty()) throw UsageError("run --experiment all needs --out DIRECTORY");
  if (!o.grid.empty()) throw UsageError("--grid applies to a single experiment");
  for (const auto& e : experiments()) {
    emit(run(e, ctx, {}, workers(o)), o.out + "/" + e.id + ".csv");
  }
  return kOk;
}

int cmd_sweep(const Options& o) {
  emit(run(sweep_experiment(o.family, o.test), context(o), overrides(o), workers(o)), o.out);
  return kOk;
}

int cmd_sample(const Options& o) {
  emit(sample_long(find_experiment(o.experiment), context(o), overrides(o), workers(o)), o.out);
  return kOk;
}

int cmd_validate(const Options& o) {
  const auto results = validation::validate(validation::Golden::load(o.golden));
  int failed = 0;
  for (const auto& r : results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name;
    if (!r.detail.empty()) std::cout << ": " << r.detail;
    std::cout << '\n';
    failed += !r.pass;
  }
  std::cout << results.size() - failed << '/' << results.size() << " checks passed\n";
  return failed ? kFailure : kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"controlled-SWAP test experiments"};
  app.require_subcommand(1);
  Options o;
  auto* list = app.add_subcommand("list", "list experiments and their default grids");
  auto* runc = app.add_subcommand("run", "run a named experiment");
  add_common(runc, o, true);
  auto* sweep = app.add_subcommand("sweep", "sweep a state family under one test");
  sweep->add_option("--family", o.family, "state family")
      ->required()
      ->check(CLI::IsMember(sweep_families()));
  sweep->add_option("--test", o.test, "full or equivalence")
      ->check(CLI::IsMember({"full", "equivalence"}));
  add_common(sweep, o, false);
  auto* sample = app.add_subcommand("sample", "sampled outcome counts, one line per outcome");
  add_common(sample, o, true);
  auto* validate = app.add_subcommand("validate", "run the invariant and golden-value checks");
  validate->add_option("--golden", o.golden, "golden values (JSON)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*list) return cmd_list();
    if (*runc) return cmd_run(o);
    if (*sweep) return cmd_sweep(o);
    if (*sample) return cmd_sample(o);
    if (*validate) return cmd_validate(o);
  } catch (const GridPointError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.bad_parameters() ? kUsage : kFailure;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kFailure;
  }
  return kUsage;
}
