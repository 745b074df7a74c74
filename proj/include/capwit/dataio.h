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

// File formats: appendix correlator datasets, correlator records, channel
// specs, the channel-parameter registry, and the CSV report.

#ifndef CAPWIT_DATAIO_H
#define CAPWIT_DATAIO_H

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "capwit/channels.h"
#include "capwit/measure.h"
#include "capwit/witness.h"

namespace capwit {

/// "0.9687(5)" -> {0.9687, 0.0005}. The uncertainty applies to the last
/// printed digits.
Measured parse_uncertain(std::string_view text);

/// Parses "3/8" or "1".
Rational parse_rational(std::string_view text);
std::string format_rational(const Rational& r);

struct AppendixDataset {
  std::string p_label;
  std::string mu_label;
  ExactChannelParams params;
  Convention convention = Convention::kNoTranspose;
  /// Entries exactly as printed.
  std::array<std::array<std::string, 3>, 3> text;
  MeasuredMatrix3 matrix;

  ChannelParams nominal() const;
};

AppendixDataset parse_appendix(const nlohmann::json& j);
AppendixDataset load_appendix(const std::filesystem::path& path);
/// Canonical text form: one matrix row per line.
std::string dump_appendix(const AppendixDataset& ds);
void save_appendix(const AppendixDataset& ds, const std::filesystem::path& path);
/// Every *.json dataset in a directory, sorted by (p desc, mu asc).
std::vector<AppendixDataset> load_appendix_dir(const std::filesystem::path& dir);

/// Pair-pair correlators in the transpose convention. Without a fit the
/// single-pair correlators are absent. With a fit they are imputed from the
/// fitted channel and the table is flagged "marginals_model_assisted".
AccessibleChoi appendix_to_choi(const AppendixDataset& ds, const std::optional<ChannelFit>& fit = std::nullopt);

/// Re-fits the channel to a table's pair-pair correlators and replaces the
/// single-pair correlators with the fitted model's values.
AccessibleChoi refit_imputed(const AccessibleChoi& table);

struct Table1Row {
  Rational p;
  Rational mu;
  /// (A_II, A_IX, A_XI, A_XX) as printed.
  std::array<Rational, 4> printed;
  /// Same, with A_II and A_XX exchanged where needed so that
  /// p = A_IX + A_XX.
  std::array<Rational, 4> a;
};

std::vector<Table1Row> table1_registry();

// ---------------------------------------------------------------------------
// Channel specs and records.

/// {"type":"correlated_flip","p":..,"mu":..} or
/// {"type":"pauli","n":1|2,"probs":{"XX":0.25,...}}.
PauliChannel parse_channel_spec(const nlohmann::json& j);
nlohmann::json channel_spec_json(const PauliChannel& ch);
nlohmann::json channel_spec_json(const ChannelParams& params);

nlohmann::json record_to_json(const CorrelatorRecord& rec);
CorrelatorRecord record_from_json(const nlohmann::json& j);
CorrelatorRecord load_record(const std::filesystem::path& path);
void save_record(const CorrelatorRecord& rec, const std::filesystem::path& path);

nlohmann::json read_json(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Report.

/// p, mu and Q_theory are empty for channels outside the correlated family.
struct ReportRow {
  std::optional<double> p;
  std::optional<double> mu;
  std::optional<double> q_theory;
  double q_det_raw = 0;
  double q_det = 0;
  std::optional<double> sigma_q;
  double q1 = 0;
  double q2 = 0;
  double q_lim = 0;
  bool clamped = false;
  std::vector<std::string> assumptions;
};

/// Columns p, mu, Q_theory, Q_det_tot_raw, Q_det_tot, sigma_Q, Q1, Q2, Q_lim,
/// clamped, assumptions; six decimals, empty fields for absent values; rows
/// in the order given.
void write_report(const std::vector<ReportRow>& rows, std::ostream& out);
void write_report(const std::vector<ReportRow>& rows, const std::filesystem::path& path);

}  // namespace capwit

#endif  // CAPWIT_DATAIO_H
