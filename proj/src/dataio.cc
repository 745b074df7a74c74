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

#include "capwit/dataio.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <regex>
#include <sstream>

#include "capwit/errors.h"

namespace capwit {

namespace {

constexpr std::string_view kAppendixFormat = "capwit.appendix/1";
constexpr std::string_view kRecordFormat = "capwit.record/1";

double to_double(const Rational& r) {
  return static_cast<double>(r.numerator()) / static_cast<double>(r.denominator());
}

template <class T>
T get_field(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw DataError(std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("field '") + key + "': " + e.what());
  }
}

std::string json_string(std::string_view s) { return nlohmann::json(std::string(s)).dump(); }

// Fills the single-pair correlators from the fitted channel.
void impute_from_fit(AccessibleChoi& table, const ChannelFit& fit) {
  std::array<double, 4> a = fit.coefficients;
  double total = 0;
  for (auto& x : a) {
    x = std::max(x, 0.0);
    total += x;
  }
  for (auto& x : a) {
    x /= total;
  }
  const PauliChannel model(2, {{"II", a[0]}, {"IX", a[1]}, {"XI", a[2]}, {"XX", a[3]}});
  const AccessibleChoi ideal = accessible_choi_from_channel(model);
  for (int k = 7; k <= 9; ++k) {
    for (const std::size_t flat : {table.index(k, 0), table.index(0, k)}) {
      table.set(flat, {ideal.at(flat).value, 0.0, CoefficientSource::kImputed});
    }
  }
}

}  // namespace

Measured parse_uncertain(std::string_view text) {
  static const std::regex re(R"(^\s*(-?\d+(?:\.(\d+))?)\((\d+)\)\s*$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, re)) {
    throw DataError("malformed uncertain value '" + s + "'");
  }
  const std::size_t decimals = m[2].matched ? m[2].length() : 0;
  Measured out;
  out.value = std::stod(m[1].str());
  out.sigma = std::stod(m[3].str() + "e-" + std::to_string(decimals));
  return out;
}

Rational parse_rational(std::string_view text) {
  static const std::regex re(R"(^\s*(\d+)(?:/(\d+))?\s*$)");
  const std::string s(text);
  std::smatch m;
  if (!std::regex_match(s, m, re)) {
    throw DataError("malformed rational '" + s + "'");
  }
  const std::int64_t num = std::stoll(m[1].str());
  const std::int64_t den = m[2].matched ? std::stoll(m[2].str()) : 1;
  if (den == 0) {
    throw DataError("zero denominator in '" + s + "'");
  }
  return Rational(num, den);
}

std::string format_rational(const Rational& r) {
  if (r.denominator() == 1) {
    return std::to_string(r.numerator());
  }
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

ChannelParams AppendixDataset::nominal() const { return {to_double(params.p), to_double(params.mu)}; }

AppendixDataset parse_appendix(const nlohmann::json& j) {
  if (get_field<std::string>(j, "format") != kAppendixFormat) {
    throw DataError("not an appendix dataset (format tag)");
  }
  AppendixDataset ds;
  ds.p_label = get_field<std::string>(j, "p");
  ds.mu_label = get_field<std::string>(j, "mu");
  ds.params = {parse_rational(ds.p_label), parse_rational(ds.mu_label)};
  if (ds.params.p > 1 || ds.params.mu > 1) {
    throw DataError("dataset parameters outside [0, 1]");
  }
  ds.convention = parse_convention(get_field<std::string>(j, "convention"));
  const auto rows = get_field<std::vector<std::vector<std::string>>>(j, "matrix");
  if (rows.size() != 3 || std::any_of(rows.begin(), rows.end(), [](const auto& r) { return r.size() != 3; })) {
    throw DataError("appendix matrix must be 3x3");
  }
  for (std::size_t r = 0; r < 3; ++r) {
    for (std::size_t c = 0; c < 3; ++c) {
      ds.text[r][c] = rows[r][c];
      ds.matrix[r][c] = parse_uncertain(rows[r][c]);
      if (std::abs(ds.matrix[r][c].value) > 1) {
        throw DataError("appendix entry '" + rows[r][c] + "' exceeds 1 in magnitude");
      }
      if (!(ds.matrix[r][c].sigma > 0)) {
        throw DataError("appendix entry '" + rows[r][c] + "' has no uncertainty");
      }
    }
  }
  return ds;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

AppendixDataset load_appendix(const std::filesystem::path& path) {
  try {
    return parse_appendix(read_json(path));
  } catch (const DataError& e) {
    throw DataError(path.filename().string() + ": " + e.what());
  }
}

std::string dump_appendix(const AppendixDataset& ds) {
  std::ostringstream out;
  out << "{\n"
      << "  \"format\": " << json_string(kAppendixFormat) << ",\n"
      << "  \"p\": " << json_string(ds.p_label) << ",\n"
      << "  \"mu\": " << json_string(ds.mu_label) << ",\n"
      << "  \"convention\": " << json_string(convention_name(ds.convention)) << ",\n"
      << "  \"matrix\": [\n";
  for (std::size_t r = 0; r < 3; ++r) {
    out << "    [" << json_string(ds.text[r][0]) << ", " << json_string(ds.text[r][1]) << ", "
        << json_string(ds.text[r][2]) << "]" << (r < 2 ? "," : "") << "\n";
  }
  out << "  ]\n}\n";
  return out.str();
}

void save_appendix(const AppendixDataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << dump_appendix(ds);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
}

std::vector<AppendixDataset> load_appendix_dir(const std::filesystem::path& dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw DataError("not a directory: " + dir.string());
  }
  std::vector<std::filesystem::path> files;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".json") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<AppendixDataset> out;
  for (const auto& f : files) {
    out.push_back(load_appendix(f));
  }
  std::stable_sort(out.begin(), out.end(), [](const AppendixDataset& a, const AppendixDataset& b) {
    if (a.params.p != b.params.p) {
      return a.params.p > b.params.p;
    }
    return a.params.mu < b.params.mu;
  });
  return out;
}

AccessibleChoi appendix_to_choi(const AppendixDataset& ds, const std::optional<ChannelFit>& fit) {
  AccessibleChoi out(2);
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto& m = ds.matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      double value = m.value;
      if (ds.convention == Convention::kNoTranspose && ((i == 1) != (j == 1))) {
        value = -value;
      }
      out.set(out.index(7 + i, 7 + j), {value, m.sigma, CoefficientSource::kMeasured});
    }
  }
  if (fit) {
    impute_from_fit(out, *fit);
    out.assumptions.push_back("marginals_model_assisted");
  }
  return out;
}

AccessibleChoi refit_imputed(const AccessibleChoi& table) {
  if (table.n_pairs() != 2) {
    throw ValidationError("refit_imputed needs a two-pair table");
  }
  MeasuredMatrix3 m;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      const auto& c = table.at(table.index(7 + i, 7 + j));
      if (c.source == CoefficientSource::kAbsent) {
        throw DataError("pair-pair correlator " + table.label(table.index(7 + i, 7 + j)) + " is absent");
      }
      const double sign = (i == 1) != (j == 1) ? -1.0 : 1.0;
      m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = {sign * c.value, c.sigma};
    }
  }
  AccessibleChoi out = table;
  impute_from_fit(out, fit_channel(m));
  return out;
}

std::vector<Table1Row> table1_registry() {
  // (p, mu, A00, A0X, AX0, AXX) as printed.
  static const char* const kRows[][6] = {
      {"1/2", "0", "1/4", "1/4", "1/4", "1/4"},          {"1/2", "1/4", "5/16", "3/16", "3/16", "5/16"},
      {"1/2", "1/2", "3/8", "1/8", "1/8", "3/8"},        {"1/2", "3/4", "7/16", "1/16", "1/16", "7/16"},
      {"1/2", "1", "1/2", "0", "0", "1/2"},              {"3/8", "1/5", "3/16", "3/16", "3/16", "7/16"},
      {"3/8", "7/15", "1/4", "1/8", "1/8", "1/2"},       {"3/8", "11/15", "5/16", "1/16", "1/16", "9/16"},
      {"3/8", "1", "3/8", "0", "0", "5/8"},              {"1/4", "1/3", "1/8", "1/8", "1/8", "5/8"},
      {"1/4", "2/3", "3/16", "1/16", "1/16", "11/16"},   {"1/4", "1", "1/4", "0", "0", "3/4"},
      {"1/8", "3/7", "1/16", "1/16", "1/16", "13/16"},   {"1/8", "1", "1/8", "0", "0", "7/8"},
  };
  std::vector<Table1Row> out;
  for (const auto& r : kRows) {
    Table1Row row;
    row.p = parse_rational(r[0]);
    row.mu = parse_rational(r[1]);
    for (std::size_t k = 0; k < 4; ++k) {
      row.printed[k] = parse_rational(r[k + 2]);
    }
    row.a = row.printed;
    if (row.a[1] + row.a[3] != row.p) {
      std::swap(row.a[0], row.a[3]);
    }
    out.push_back(row);
  }
  return out;
}

PauliChannel parse_channel_spec(const nlohmann::json& j) {
  const auto type = get_field<std::string>(j, "type");
  try {
    if (type == "correlated_flip") {
      return correlated_channel({get_field<double>(j, "p"), get_field<double>(j, "mu")});
    }
    if (type == "pauli") {
      return PauliChannel(get_field<int>(j, "n"), get_field<std::map<std::string, double>>(j, "probs"));
    }
  } catch (const DomainError& e) {
    throw DataError(std::string("channel spec: ") + e.what());
  } catch (const ValidationError& e) {
    throw DataError(std::string("channel spec: ") + e.what());
  }
  throw DataError("unknown channel type '" + type + "'");
}

nlohmann::json channel_spec_json(const PauliChannel& ch) {
  nlohmann::json probs = nlohmann::json::object();
  for (const auto& [s, p] : ch.probs()) {
    probs[s] = p;
  }
  return {{"type", "pauli"}, {"n", ch.n_qubits()}, {"probs", probs}};
}

nlohmann::json channel_spec_json(const ChannelParams& params) {
  return {{"type", "correlated_flip"}, {"p", params.p}, {"mu", params.mu}};
}

nlohmann::json record_to_json(const CorrelatorRecord& rec) {
  nlohmann::json meta = nlohmann::json::object();
  meta["seed"] = rec.seed ? nlohmann::json(*rec.seed) : nlohmann::json(nullptr);
  meta["shots_per_setting"] = rec.shots_per_setting;
  meta["poisson_shots"] = rec.poisson_shots;
  meta["channel"] = rec.channel ? channel_spec_json(*rec.channel) : nlohmann::json(nullptr);
  nlohmann::json settings = nlohmann::json::array();
  for (const auto& s : rec.settings) {
    nlohmann::json js = {{"axes", s.axes}, {"shots", s.shots}};
    if (rec.sampled) {
      js["counts"] = s.counts;
    } else {
      js["probabilities"] = s.probabilities;
    }
    settings.push_back(std::move(js));
  }
  nlohmann::json coefs = nlohmann::json::array();
  for (const auto& c : rec.coefficients) {
    coefs.push_back({{"component", c.component}, {"value", c.value}, {"sigma", c.sigma}});
  }
  return {{"format", kRecordFormat},
          {"n_pairs", rec.n_pairs},
          {"convention", convention_name(rec.convention)},
          {"mode", rec.sampled ? "sampled" : "exact"},
          {"metadata", meta},
          {"settings", settings},
          {"coefficients", coefs}};
}

CorrelatorRecord record_from_json(const nlohmann::json& j) {
  if (get_field<std::string>(j, "format") != kRecordFormat) {
    throw DataError("not a correlator record (format tag)");
  }
  CorrelatorRecord rec;
  rec.n_pairs = get_field<int>(j, "n_pairs");
  if (rec.n_pairs != 1 && rec.n_pairs != 2) {
    throw DataError("record n_pairs must be 1 or 2");
  }
  rec.convention = parse_convention(get_field<std::string>(j, "convention"));
  const auto mode = get_field<std::string>(j, "mode");
  if (mode != "exact" && mode != "sampled") {
    throw DataError("record mode must be 'exact' or 'sampled'");
  }
  rec.sampled = mode == "sampled";
  if (j.contains("metadata")) {
    const auto& meta = j.at("metadata");
    if (meta.contains("seed") && !meta.at("seed").is_null()) {
      rec.seed = get_field<std::uint64_t>(meta, "seed");
    }
    if (meta.contains("shots_per_setting")) {
      rec.shots_per_setting = get_field<std::int64_t>(meta, "shots_per_setting");
    }
    if (meta.contains("poisson_shots")) {
      rec.poisson_shots = get_field<bool>(meta, "poisson_shots");
    }
    if (meta.contains("channel") && !meta.at("channel").is_null()) {
      rec.channel = parse_channel_spec(meta.at("channel"));
    }
  }
  const std::size_t n_outcomes = std::size_t{1} << (2 * rec.n_pairs);
  for (const auto& js : get_field<nlohmann::json>(j, "settings")) {
    SettingData s;
    s.axes = get_field<std::string>(js, "axes");
    s.shots = js.contains("shots") ? get_field<std::int64_t>(js, "shots") : 0;
    if (rec.sampled) {
      s.counts = get_field<std::vector<std::int64_t>>(js, "counts");
      if (s.counts.size() != n_outcomes) {
        throw DataError("setting " + s.axes + ": wrong number of counts");
      }
      std::int64_t total = 0;
      for (auto c : s.counts) {
        if (c < 0) {
          throw DataError("setting " + s.axes + ": negative count");
        }
        total += c;
      }
      if (total != s.shots) {
        throw DataError("setting " + s.axes + ": counts do not sum to shots");
      }
    } else {
      s.probabilities = get_field<std::vector<double>>(js, "probabilities");
      if (s.probabilities.size() != n_outcomes) {
        throw DataError("setting " + s.axes + ": wrong number of probabilities");
      }
    }
    rec.settings.push_back(std::move(s));
  }
  for (const auto& jc : get_field<nlohmann::json>(j, "coefficients")) {
    RecordCoefficient c{get_field<std::string>(jc, "component"), get_field<double>(jc, "value"),
                        jc.contains("sigma") ? get_field<double>(jc, "sigma") : 0.0};
    if (std::abs(c.value) > 1 + 1e-12) {
      throw DataError("coefficient " + c.component + " exceeds 1 in magnitude");
    }
    rec.coefficients.push_back(std::move(c));
  }
  return rec;
}

CorrelatorRecord load_record(const std::filesystem::path& path) { return record_from_json(read_json(path)); }

void save_record(const CorrelatorRecord& rec, const std::filesystem::path& path) {
  std::ofstream out(path);
  out << record_to_json(rec).dump(2) << "\n";
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
}

void write_report(const std::vector<ReportRow>& rows, std::ostream& out) {
  out << "p,mu,Q_theory,Q_det_tot_raw,Q_det_tot,sigma_Q,Q1,Q2,Q_lim,clamped,assumptions\n";
  out << std::fixed << std::setprecision(6);
  auto opt = [&out](const std::optional<double>& v) {
    if (v) {
      out << *v;
    }
    out << ',';
  };
  for (const auto& r : rows) {
    opt(r.p);
    opt(r.mu);
    opt(r.q_theory);
    out << r.q_det_raw << ',' << r.q_det << ',';
    opt(r.sigma_q);
    out << r.q1 << ',' << r.q2 << ',' << r.q_lim << ',' << (r.clamped ? "true" : "false") << ',';
    for (std::size_t k = 0; k < r.assumptions.size(); ++k) {
      out << (k ? ";" : "") << r.assumptions[k];
    }
    out << '\n';
  }
}

void write_report(const std::vector<ReportRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) {
    throw DataError("cannot write " + path.string());
  }
  write_report(rows, out);
  if (!out) {
    throw DataError("write failed: " + path.string());
  }
}

}  // namespace capwit
