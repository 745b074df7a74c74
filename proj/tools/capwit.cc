// Copyright 2026 The capwit Authors
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

// capwit command-line front end.
//
//   capwit theory    --p 0.375 --mu 0.2
//   capwit simulate  --p 0.5 --mu 1 [--shots N --seed S] --out rec.json
//   capwit fit       --input data/appendix/p1_2_mu1.json
//   capwit witness   --input rec.json | dataset.json [--fit] [--bootstrap N]
//   capwit reproduce --input data/appendix --out fig2.csv [--bootstrap N]
//
// Exit codes: 0 success, 2 usage error, 3 data error.

#include <cmath>
#include <cstdio>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "capwit/capacity.h"
#include "capwit/dataio.h"
#include "capwit/errors.h"
#include "capwit/measure.h"
#include "capwit/witness.h"

namespace {

using namespace capwit;

constexpr int kUsageError = 2;
constexpr int kDataError = 3;

struct Options {
  std::optional<double> p;
  std::optional<double> mu;
  std::string input;
  std::string channel;
  std::string out;
  std::optional<std::int64_t> shots;
  std::optional<std::uint64_t> seed;
  bool poisson = false;
  int grid = 21;
  bool refine = true;
  int refine_starts = 5;
  int bootstrap = 0;
  bool fit = false;
};

SearchConfig search_config(const Options& o) {
  SearchConfig c;
  c.grid = o.grid;
  c.refine = o.refine;
  c.refine_starts = o.refine_starts;
  return c;
}

// (p, mu) of a channel in the correlated flip family, if it is one.
std::optional<ChannelParams> correlated_params(const PauliChannel& ch) {
  if (ch.n_qubits() != 2) {
    return std::nullopt;
  }
  for (const auto& [s, prob] : ch.probs()) {
    if (prob > 0 && s != "II" && s != "IX" && s != "XI" && s != "XX") {
      return std::nullopt;
    }
  }
  const double a = ch.prob("IX");
  if (std::abs(a - ch.prob("XI")) > 1e-12) {
    return std::nullopt;
  }
  const double p = a + ch.prob("XX");
  const double var = p * (1 - p);
  if (var < 1e-9) {
    return ChannelParams{p, 1.0};
  }
  return ChannelParams{p, std::clamp(1 - a / var, 0.0, 1.0)};
}

std::string describe(const BasisSpec& b) {
  std::ostringstream out;
  out << std::fixed << std::setprecision(6);
  for (std::size_t k = 0; k < b.pairs.size(); ++k) {
    out << (k ? " x " : "") << family_name(b.pairs[k].family) << "(" << b.pairs[k].theta_b << ", "
        << b.pairs[k].theta_d << ")";
  }
  return out.str();
}

void print_value(const char* name, double v) { std::cout << name << " = " << std::fixed << std::setprecision(6) << v << "\n"; }

PauliChannel channel_from(const Options& o) {
  if (!o.channel.empty()) {
    if (o.p || o.mu) {
      throw ConfigError("--channel excludes --p/--mu");
    }
    return parse_channel_spec(read_json(o.channel));
  }
  if (!o.p || !o.mu) {
    throw ConfigError("need --p and --mu, or --channel");
  }
  try {
    return correlated_channel({*o.p, *o.mu});
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

int cmd_theory(const Options& o) {
  if (!o.p || !o.mu) {
    throw ConfigError("theory needs --p and --mu");
  }
  CapacityReport r;
  try {
    r = capacity_report({*o.p, *o.mu});
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  print_value("Q", *r.q_exact);
  print_value("Q1", r.q1);
  print_value("Q2", r.q2);
  print_value("Q_lim", r.q_lim);
  print_value("dQ", *r.q_exact - r.q_lim);
  return 0;
}

int cmd_simulate(const Options& o) {
  if (o.out.empty()) {
    throw ConfigError("simulate needs --out");
  }
  const PauliChannel ch = channel_from(o);
  CorrelatorRecord rec;
  if (o.shots) {
    if (!o.seed) {
      throw ConfigError("sampling needs --seed");
    }
    rec = sampled_record(ch, {*o.shots, *o.seed, o.poisson});
  } else {
    if (o.poisson) {
      throw ConfigError("--poisson needs --shots");
    }
    rec = exact_record(ch);
  }
  save_record(rec, o.out);
  return 0;
}

int cmd_fit(const Options& o) {
  if (o.input.empty()) {
    throw ConfigError("fit needs --input");
  }
  const auto ds = load_appendix(o.input);
  const auto fit = fit_channel(ds.matrix);
  print_value("p", fit.p);
  if (fit.mu) {
    print_value("mu", *fit.mu);
  } else {
    std::cout << "mu = undefined\n";
  }
  print_value("A_II", fit.coefficients[0]);
  print_value("A_IX", fit.coefficients[1]);
  print_value("A_XI", fit.coefficients[2]);
  print_value("A_XX", fit.coefficients[3]);
  print_value("residual", fit.residual);
  return 0;
}

struct Evaluated {
  ReportRow row;
  BasisSpec basis;
};

Evaluated evaluate_dataset(const AppendixDataset& ds, const Options& o) {
  const auto fit = fit_channel(ds.matrix);
  const AccessibleChoi choi = appendix_to_choi(ds, fit);
  const auto config = search_config(o);
  const WitnessResult w = q_det(choi, config);

  Evaluated e;
  e.basis = w.best_basis;
  ReportRow& row = e.row;
  row.p = ds.nominal().p;
  row.mu = ds.nominal().mu;
  row.q_theory = exact_capacity(ds.nominal());
  row.q_det_raw = w.q_det_raw;
  row.q_det = w.q_det;
  row.clamped = w.clamped;
  row.assumptions = w.assumptions;
  if (o.bootstrap > 0) {
    BootstrapConfig b;
    b.resamples = o.bootstrap;
    b.seed = o.seed.value_or(0);
    b.refresh = refit_imputed;
    row.sigma_q = bootstrap_error(choi, b, w);
  }
  if (!fit.mu) {
    throw DataError("fitted channel is degenerate; Q1 and Q2 are undefined");
  }
  const auto lim = q_lim(choi, config);
  row.q1 = lim.q1;
  row.q2 = lim.q2;
  row.q_lim = lim.q_lim;
  return e;
}

Evaluated evaluate_record(const CorrelatorRecord& rec, const Options& o) {
  const AccessibleChoi choi = record_to_accessible_choi(rec);
  const auto config = search_config(o);
  const WitnessResult w = q_det(choi, config);

  Evaluated e;
  e.basis = w.best_basis;
  ReportRow& row = e.row;
  if (rec.channel) {
    if (const auto params = correlated_params(*rec.channel)) {
      row.p = params->p;
      row.mu = params->mu;
      row.q_theory = exact_capacity(*params);
    }
  }
  row.q_det_raw = w.q_det_raw;
  row.q_det = w.q_det;
  row.clamped = w.clamped;
  row.assumptions = w.assumptions;
  if (o.bootstrap > 0) {
    BootstrapConfig b;
    b.resamples = o.bootstrap;
    b.seed = o.seed.value_or(0);
    row.sigma_q = bootstrap_error(choi, b, w);
  }
  if (rec.n_pairs == 2) {
    const auto lim = q_lim(choi, config);
    row.q1 = lim.q1;
    row.q2 = lim.q2;
    row.q_lim = lim.q_lim;
  } else {
    row.q1 = w.q_det;
    row.q_lim = w.q_det;
  }
  return e;
}

void print_row(const Evaluated& e) {
  const auto& r = e.row;
  print_value("Q_det_tot_raw", r.q_det_raw);
  print_value("Q_det_tot", r.q_det);
  std::cout << "clamped = " << (r.clamped ? "true" : "false") << "\n";
  if (r.sigma_q) {
    print_value("sigma_Q", *r.sigma_q);
  }
  print_value("Q1", r.q1);
  print_value("Q2", r.q2);
  print_value("Q_lim", r.q_lim);
  if (r.q_theory) {
    print_value("Q_theory", *r.q_theory);
  }
  std::cout << "best_basis = " << describe(e.basis) << "\n";
  std::cout << "assumptions = ";
  for (std::size_t k = 0; k < r.assumptions.size(); ++k) {
    std::cout << (k ? ";" : "") << r.assumptions[k];
  }
  std::cout << "\n";
}

int cmd_witness(const Options& o) {
  if (o.input.empty()) {
    throw ConfigError("witness needs --input");
  }
  const auto j = read_json(o.input);
  const std::string format = j.is_object() && j.contains("format") && j["format"].is_string() ? j["format"].get<std::string>() : "";
  Evaluated e;
  if (format == "capwit.appendix/1") {
    if (!o.fit) {
      throw DataError("dataset has no single-pair correlators; rerun with --fit to impute them from the fitted channel");
    }
    e = evaluate_dataset(parse_appendix(j), o);
  } else {
    if (o.fit) {
      throw ConfigError("--fit applies to appendix datasets only");
    }
    e = evaluate_record(record_from_json(j), o);
  }
  print_row(e);
  if (!o.out.empty()) {
    write_report({e.row}, o.out);
  }
  return 0;
}

int cmd_reproduce(const Options& o) {
  const std::string dir = o.input.empty() ? "data/appendix" : o.input;
  std::vector<ReportRow> rows;
  for (const auto& ds : load_appendix_dir(dir)) {
    rows.push_back(evaluate_dataset(ds, o).row);
  }
  if (o.out.empty()) {
    write_report(rows, std::cout);
  } else {
    write_report(rows, o.out);
  }
  return 0;
}

void add_search_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--grid", o.grid, "grid points per angle (0 disables the grid)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--refine", o.refine, "Nelder-Mead refinement (true/false)");
  cmd->add_option("--refine-starts", o.refine_starts, "grid points refined")->check(CLI::PositiveNumber);
  cmd->add_option("--bootstrap", o.bootstrap, "bootstrap resamples for sigma_Q (>= 10; 0 = off)")
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--seed", o.seed, "bootstrap seed");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum capacity witness for correlated Pauli channels"};
  app.require_subcommand(1);
  Options o;

  auto* theory = app.add_subcommand("theory", "exact capacity and the independent-use limit");
  theory->add_option("--p", o.p, "flip probability")->required();
  theory->add_option("--mu", o.mu, "correlation strength")->required();

  auto* simulate = app.add_subcommand("simulate", "write a correlator record");
  simulate->add_option("--p", o.p, "flip probability");
  simulate->add_option("--mu", o.mu, "correlation strength");
  simulate->add_option("--channel", o.channel, "channel spec JSON file")->check(CLI::ExistingFile);
  simulate->add_option("--shots", o.shots, "shots per setting (sampled mode)")->check(CLI::PositiveNumber);
  simulate->add_option("--seed", o.seed, "sampling seed");
  simulate->add_flag("--poisson", o.poisson, "Poisson-distributed shots per setting");
  simulate->add_option("--out", o.out, "output record path")->required();

  auto* fit = app.add_subcommand("fit", "fit (p, mu) to an appendix dataset");
  fit->add_option("--input", o.input, "appendix dataset")->required();

  auto* witness = app.add_subcommand("witness", "detectable capacity bound from a record or dataset");
  witness->add_option("--input", o.input, "record or appendix dataset")->required();
  witness->add_flag("--fit", o.fit, "impute single-pair correlators from the fitted channel");
  witness->add_option("--out", o.out, "CSV report path");
  add_search_flags(witness, o);

  auto* reproduce = app.add_subcommand("reproduce", "process every appendix dataset into a CSV report");
  reproduce->add_option("--input", o.input, "dataset directory (default data/appendix)");
  reproduce->add_option("--out", o.out, "CSV report path (default stdout)");
  add_search_flags(reproduce, o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (o.bootstrap > 0 && o.bootstrap < 10) {
      throw ConfigError("--bootstrap needs at least 10 resamples");
    }
    if (*theory) return cmd_theory(o);
    if (*simulate) return cmd_simulate(o);
    if (*fit) return cmd_fit(o);
    if (*witness) return cmd_witness(o);
    if (*reproduce) return cmd_reproduce(o);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsageError;
}
