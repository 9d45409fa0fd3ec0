// Copyright 2026 The satkey Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "satkey/scenario.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "satkey/errors.hpp"
#include "satkey/numeric.hpp"
#include "satkey/rng.hpp"

namespace satkey {

namespace {

constexpr const char* kCsvHeader =
    "loss_db,key_bits,n_sent,n_detected,m_sifted,qber,qber_adjusted,"
    "correction_A_or_Q1L,E1U_or_blank,delta,eps_bar,eps_pa,zero_key_cause";

std::string format_g12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

void SweepSpec::validate() const {
  if (!(start_db <= stop_db))
    throw Error(ErrorCode::kInvalidArgument, "sweep start_db must be <= stop_db");
  if (!(step_db > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "sweep step_db must be > 0");
}

std::vector<double> SweepSpec::points() const {
  validate();
  std::vector<double> pts;
  // Half-step slack keeps the endpoint when start + k*step lands on it.
  for (double x = start_db; x <= stop_db + step_db * 0.5; x += step_db)
    pts.push_back(x);
  return pts;
}

double Scenario::rep_rate_hz() const {
  if (const auto* qd = std::get_if<QdSourceSpec>(&source)) return qd->rep_rate_hz;
  return std::get<WcpSourceSpec>(source).rep_rate_hz;
}

void Scenario::validate() const {
  if (name.empty())
    throw Error(ErrorCode::kInvalidArgument, "scenario name must not be empty");
  channel.validate();
  receiver.validate();
  params.validate();
  sweep.validate();
  if (mc_slots < 1)
    throw Error(ErrorCode::kInvalidArgument, "mc_slots must be >= 1");
  if (const auto* qd = std::get_if<QdSourceSpec>(&source)) {
    // Re-derive to enforce the R / internal-loss coupling and Pm <= R.
    QdSourceSpec::from_brightness(qd->rep_rate_hz, qd->r, qd->pm);
  } else {
    std::get<WcpSourceSpec>(source).validate();
  }
}

// ---------------------------------------------------------------------------
// Built-ins

namespace {

Scenario make_qd(const std::string& name, const std::string& desc,
                 double rep_rate_hz, double internal_loss_db) {
  Scenario s;
  s.name = name;
  s.description = desc;
  s.source = QdSourceSpec::from_internal_loss(rep_rate_hz, internal_loss_db,
                                              kQdPmQuoted);
  return s;
}

Scenario make_wcp(const std::string& name, const std::string& desc,
                  double rep_rate_hz) {
  Scenario s;
  s.name = name;
  s.description = desc;
  WcpSourceSpec w;
  w.rep_rate_hz = rep_rate_hz;
  s.source = w;
  return s;
}

}  // namespace

std::vector<std::string> builtin_scenario_names() {
  return {"wcp76", "qd76-15db", "qd76-4db", "wcp300", "qd300-4db"};
}

Scenario builtin_scenario(const std::string& name) {
  if (name == "wcp76")
    return make_wcp(name, "decoy-state WCP, 76.4 MHz, mu=0.5 nu=0.1 K=0.9", 76.4e6);
  if (name == "qd76-15db")
    return make_qd(name, "quantum dot, 76.4 MHz, 15 dB internal loss", 76.4e6, 15.0);
  if (name == "qd76-4db")
    return make_qd(name, "quantum dot, 76.4 MHz, 4.0 dB internal loss", 76.4e6, 4.0);
  if (name == "wcp300")
    return make_wcp(name, "decoy-state WCP, 300 MHz, mu=0.5 nu=0.1 K=0.9", 300e6);
  if (name == "qd300-4db")
    return make_qd(name, "quantum dot, 300 MHz, 4.0 dB internal loss", 300e6, 4.0);
  throw Error(ErrorCode::kInvalidArgument, "unknown built-in scenario: " + name);
}

// ---------------------------------------------------------------------------
// Config file parsing

namespace {

struct ConfigEntry {
  std::string value;
  int line = 0;
  bool used = false;
};

using Section = std::map<std::string, ConfigEntry>;

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

[[noreturn]] void parse_fail(int line, const std::string& msg) {
  throw Error(ErrorCode::kParse, "line " + std::to_string(line) + ": " + msg);
}

class Config {
 public:
  explicit Config(std::istream& in) {
    std::string raw;
    int line = 0;
    std::string section;
    while (std::getline(in, raw)) {
      ++line;
      std::string s = trim(raw);
      if (s.empty() || s[0] == '#') continue;
      if (s.front() == '[') {
        if (s.back() != ']') parse_fail(line, "unterminated section header");
        section = trim(s.substr(1, s.size() - 2));
        if (section.empty()) parse_fail(line, "empty section name");
        sections_[section];
        continue;
      }
      size_t eq = s.find('=');
      if (eq == std::string::npos) parse_fail(line, "expected key = value");
      if (section.empty()) parse_fail(line, "key outside any [section]");
      std::string key = trim(s.substr(0, eq));
      std::string value = trim(s.substr(eq + 1));
      if (key.empty()) parse_fail(line, "empty key");
      if (value.empty()) parse_fail(line, "empty value for key '" + key + "'");
      auto [it, inserted] = sections_[section].emplace(key, ConfigEntry{value, line});
      if (!inserted) parse_fail(line, "duplicate key '" + key + "'");
    }
    if (sections_.empty())
      throw Error(ErrorCode::kParse, "empty scenario file (no sections)");
  }

  bool has_section(const std::string& name) const {
    return sections_.count(name) != 0;
  }

  std::optional<std::string> get(const std::string& section, const std::string& key) {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return std::nullopt;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return std::nullopt;
    kit->second.used = true;
    return kit->second.value;
  }

  double get_number(const std::string& section, const std::string& key,
                    double fallback) {
    auto v = get(section, key);
    if (!v) return fallback;
    return parse_number(section, key, *v);
  }

  std::optional<double> get_optional_number(const std::string& section,
                                            const std::string& key) {
    auto v = get(section, key);
    if (!v) return std::nullopt;
    return parse_number(section, key, *v);
  }

  std::uint64_t get_u64(const std::string& section, const std::string& key,
                        std::uint64_t fallback) {
    auto v = get(section, key);
    if (!v) return fallback;
    double d = parse_number(section, key, *v);
    if (d < 0.0 || d != std::floor(d))
      parse_fail(line_of(section, key), "field " + section + "." + key +
                                            " must be a non-negative integer");
    return static_cast<std::uint64_t>(d);
  }

  int line_of(const std::string& section, const std::string& key) const {
    auto sit = sections_.find(section);
    if (sit == sections_.end()) return 0;
    auto kit = sit->second.find(key);
    return kit == sit->second.end() ? 0 : kit->second.line;
  }

  // Anything not consumed is a typo the user should hear about.
  void reject_unused() const {
    for (const auto& [sname, section] : sections_) {
      for (const auto& [key, entry] : section) {
        if (!entry.used)
          parse_fail(entry.line, "unknown field '" + sname + "." + key + "'");
      }
    }
  }

 private:
  double parse_number(const std::string& section, const std::string& key,
                      const std::string& text) {
    try {
      size_t pos = 0;
      double d = std::stod(text, &pos);
      if (pos != text.size()) throw std::invalid_argument(text);
      return d;
    } catch (const std::exception&) {
      parse_fail(line_of(section, key),
                 "field " + section + "." + key + ": not a number: '" + text + "'");
    }
  }

  std::map<std::string, Section> sections_;
};

RunMode parse_mode(const std::string& text, int line) {
  if (text == "analytic") return RunMode::kAnalytic;
  if (text == "mc" || text == "monte-carlo") return RunMode::kMonteCarlo;
  if (text == "both") return RunMode::kBoth;
  parse_fail(line, "mode must be analytic, mc or both (got '" + text + "')");
}

}  // namespace

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorCode::kIo, "cannot open scenario file: " + path);
  Config cfg(in);

  Scenario s;
  // Start from a built-in as the base when requested, else defaults.
  if (auto base = cfg.get("scenario", "base")) s = builtin_scenario(*base);

  if (auto name = cfg.get("scenario", "name")) s.name = *name;
  if (s.name.empty())
    throw Error(ErrorCode::kParse, "missing required field scenario.name");
  if (auto mode = cfg.get("scenario", "mode"))
    s.mode = parse_mode(*mode, cfg.line_of("scenario", "mode"));
  s.seed = cfg.get_u64("scenario", "seed", s.seed);
  s.mc_slots = cfg.get_u64("scenario", "mc_slots", s.mc_slots);

  if (auto type = cfg.get("source", "type")) {
    double rep = cfg.get_number("source", "rep_rate_hz", 76.4e6);
    if (*type == "qd") {
      auto loss = cfg.get_optional_number("source", "internal_loss_db");
      auto r = cfg.get_optional_number("source", "r");
      double pm = cfg.get_number("source", "pm", kQdPmQuoted);
      if (loss && r) {
        QdSourceSpec spec = QdSourceSpec::from_internal_loss(rep, *loss, pm);
        if (std::abs(spec.r - *r) > 1e-9)
          throw Error(ErrorCode::kInconsistent,
                      "source.r and source.internal_loss_db disagree beyond 1e-9");
        s.source = spec;
      } else if (loss) {
        s.source = QdSourceSpec::from_internal_loss(rep, *loss, pm);
      } else if (r) {
        s.source = QdSourceSpec::from_brightness(rep, *r, pm);
      } else {
        throw Error(ErrorCode::kParse,
                    "qd source needs internal_loss_db or r");
      }
    } else if (*type == "wcp") {
      WcpSourceSpec w;
      w.rep_rate_hz = rep;
      w.mu = cfg.get_number("source", "mu", w.mu);
      w.nu = cfg.get_number("source", "nu", w.nu);
      w.k_mu = cfg.get_number("source", "k_mu", w.k_mu);
      s.source = w;
    } else {
      parse_fail(cfg.line_of("source", "type"),
                 "source.type must be qd or wcp (got '" + *type + "')");
    }
  } else if (cfg.has_section("source")) {
    throw Error(ErrorCode::kParse, "missing required field source.type");
  }

  s.channel.background_rate_hz =
      cfg.get_number("channel", "background_rate_hz", s.channel.background_rate_hz);
  s.channel.pass_duration_s =
      cfg.get_number("channel", "pass_duration_s", s.channel.pass_duration_s);

  s.receiver.detector_efficiency = cfg.get_number(
      "receiver", "detector_efficiency", s.receiver.detector_efficiency);
  s.receiver.optical_loss_db =
      cfg.get_number("receiver", "optical_loss_db", s.receiver.optical_loss_db);
  s.receiver.num_detectors = static_cast<int>(
      cfg.get_u64("receiver", "num_detectors",
                  static_cast<std::uint64_t>(s.receiver.num_detectors)));
  s.receiver.coincidence_window_s = cfg.get_number(
      "receiver", "coincidence_window_s", s.receiver.coincidence_window_s);
  s.receiver.dark_count_prob =
      cfg.get_number("receiver", "dark_count_prob", s.receiver.dark_count_prob);
  s.receiver.intrinsic_error =
      cfg.get_number("receiver", "intrinsic_error", s.receiver.intrinsic_error);

  s.params.eps_ec = cfg.get_number("finite-key", "eps_ec", s.params.eps_ec);
  s.params.eps_pe = cfg.get_number("finite-key", "eps_pe", s.params.eps_pe);
  s.params.eps_total = cfg.get_number("finite-key", "eps_total", s.params.eps_total);
  if (auto eb = cfg.get_optional_number("finite-key", "eps_bar")) s.params.eps_bar = *eb;
  if (auto ep = cfg.get_optional_number("finite-key", "eps_pa")) s.params.eps_pa = *ep;
  s.params.f = cfg.get_number("finite-key", "f", s.params.f);
  s.params.q = cfg.get_number("finite-key", "q", s.params.q);
  if (auto bm = cfg.get("finite-key", "bound_mode")) {
    if (*bm == "normal")
      s.bound = FluctuationBound::kNormalQuantile;
    else if (*bm == "hoeffding")
      s.bound = FluctuationBound::kHoeffding;
    else
      parse_fail(cfg.line_of("finite-key", "bound_mode"),
                 "bound_mode must be normal or hoeffding (got '" + *bm + "')");
  }

  s.sweep.start_db = cfg.get_number("sweep", "start_db", s.sweep.start_db);
  s.sweep.stop_db = cfg.get_number("sweep", "stop_db", s.sweep.stop_db);
  s.sweep.step_db = cfg.get_number("sweep", "step_db", s.sweep.step_db);

  cfg.reject_unused();
  s.validate();
  return s;
}

Scenario resolve_scenario(const std::string& name_or_path) {
  for (const auto& name : builtin_scenario_names())
    if (name == name_or_path) return builtin_scenario(name);
  return load_scenario(name_or_path);
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

KeyRateResult evaluate_qd_analytic(const Scenario& scenario, const QdSourceSpec& qd,
                                   double loss_db) {
  ChannelSpec channel = scenario.channel;
  channel.loss_db = loss_db;
  PhotonNumberDistribution dist = qd.distribution();
  SlotStatistics stats =
      qd_slot_statistics(dist, channel, scenario.receiver, qd.rep_rate_hz);
  PassCounts counts = pass_counts(qd.rep_rate_hz, channel.pass_duration_s,
                                  scenario.params.q, stats.p_det);
  QdKeyInput in;
  in.n = counts.n_detected;
  in.m = counts.m_sifted;
  in.qber = stats.qber;
  in.p_det = stats.p_det;
  in.pm = qd.pm;
  KeyRateResult res = qd_key_length(in, scenario.params);
  res.n_sent = counts.n_sent;
  return res;
}

KeyRateResult evaluate_wcp_analytic(const Scenario& scenario,
                                    const WcpSourceSpec& wcp, double loss_db) {
  ChannelSpec channel = scenario.channel;
  channel.loss_db = loss_db;
  SlotStatistics mu_stats =
      wcp_slot_statistics(wcp.mu, channel, scenario.receiver, wcp.rep_rate_hz);
  SlotStatistics nu_stats =
      wcp_slot_statistics(wcp.nu, channel, scenario.receiver, wcp.rep_rate_hz);

  DecoyObservables obs;
  obs.n_total = mu_stats.n_sent;
  obs.n_sent_mu = wcp.k_mu * obs.n_total;
  obs.n_sent_nu = (1.0 - wcp.k_mu) * obs.n_total;
  obs.q_mu = mu_stats.p_det;
  obs.q_nu = nu_stats.p_det;
  obs.e_mu = mu_stats.qber;
  obs.e_nu = nu_stats.qber;
  obs.n_mu = obs.n_sent_mu * obs.q_mu;

  DecoyConfig dcfg;
  dcfg.bound = scenario.bound;
  dcfg.y0_upper_base = background_click_prob(channel, scenario.receiver);
  dcfg.sifting_q = scenario.params.q;
  DecoyBounds bounds = decoy_bounds(obs, wcp.mu, wcp.nu, scenario.params.eps_pe, dcfg);
  KeyRateResult res = wcp_key_length(obs, bounds, scenario.params, wcp.k_mu);
  res.n_sent = obs.n_total;
  return res;
}

SweepRow row_from_result(double loss_db, const KeyRateResult& r) {
  SweepRow row;
  row.loss_db = loss_db;
  row.key_bits = r.key_bits;
  row.n_sent = r.n_sent;
  row.n_detected = r.n_detected;
  row.m_sifted = r.m_sifted;
  row.qber = r.qber;
  row.qber_adjusted = r.qber_adjusted;
  row.correction = r.correction;
  row.e1_upper = r.e1_upper;
  row.delta = r.delta;
  row.eps_bar = r.eps_bar;
  row.eps_pa = r.eps_pa;
  row.zero_key_cause = to_string(r.cause);
  return row;
}

SweepRow error_row(double loss_db, const Error& e) {
  SweepRow row;
  row.loss_db = loss_db;
  double nan = std::numeric_limits<double>::quiet_NaN();
  row.qber_adjusted = nan;
  row.e1_upper = nan;
  std::string cause = e.code() == ErrorCode::kBoundsCollapse
                          ? to_string(ZeroKeyCause::kBoundsCollapse)
                          : "error:" + std::string(e.what());
  // The cause string rides in a CSV field.
  for (char& c : cause)
    if (c == ',' || c == '\n') c = ';';
  row.zero_key_cause = cause;
  return row;
}

}  // namespace

KeyRateResult evaluate_analytic(const Scenario& scenario, double loss_db) {
  scenario.validate();
  if (const auto* qd = std::get_if<QdSourceSpec>(&scenario.source))
    return evaluate_qd_analytic(scenario, *qd, loss_db);
  return evaluate_wcp_analytic(scenario, std::get<WcpSourceSpec>(scenario.source),
                               loss_db);
}

KeyRateResult evaluate_monte_carlo(const Scenario& scenario, double loss_db,
                                   std::uint64_t seed) {
  scenario.validate();
  mc::SimConfig cfg;
  cfg.seed = seed;
  cfg.num_slots = scenario.mc_slots;
  cfg.source = scenario.source;
  cfg.channel = scenario.channel;
  cfg.channel.loss_db = loss_db;
  cfg.receiver = scenario.receiver;
  return mc::empirical_key_pipeline(cfg, scenario.params);
}

std::vector<SweepRow> run_sweep(const Scenario& scenario, RunMode mode) {
  scenario.validate();
  if (mode == RunMode::kBoth)
    throw Error(ErrorCode::kInvalidArgument,
                "run_sweep evaluates one mode; call once per mode for 'both'");
  std::vector<double> pts = scenario.sweep.points();
  std::vector<SweepRow> rows(pts.size());

  auto evaluate_point = [&](size_t i) {
    double loss = pts[i];
    try {
      KeyRateResult r =
          mode == RunMode::kAnalytic
              ? evaluate_analytic(scenario, loss)
              : evaluate_monte_carlo(
                    scenario, loss,
                    scenario.seed ^ ((i + 1) * 0x9E3779B97F4A7C15ULL));
      rows[i] = row_from_result(loss, r);
    } catch (const Error& e) {
      rows[i] = error_row(loss, e);
    }
  };

  unsigned hw = std::thread::hardware_concurrency();
  unsigned threads = static_cast<unsigned>(
      std::min<size_t>(hw == 0 ? 1 : hw, pts.size()));
  if (threads <= 1) {
    for (size_t i = 0; i < pts.size(); ++i) evaluate_point(i);
  } else {
    std::atomic<size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (;;) {
          size_t i = next.fetch_add(1);
          if (i >= rows.size()) return;
          evaluate_point(i);
        }
      });
    }
    for (auto& th : pool) th.join();
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << kCsvHeader << '\n';
  auto field = [](double v) { return std::isnan(v) ? std::string() : format_g12(v); };
  for (const auto& r : rows) {
    out << format_g12(r.loss_db) << ',' << format_g12(r.key_bits) << ','
        << format_g12(r.n_sent) << ',' << format_g12(r.n_detected) << ','
        << format_g12(r.m_sifted) << ',' << format_g12(r.qber) << ','
        << field(r.qber_adjusted) << ',' << format_g12(r.correction) << ','
        << field(r.e1_upper) << ',' << format_g12(r.delta) << ','
        << format_g12(r.eps_bar) << ',' << format_g12(r.eps_pa) << ','
        << r.zero_key_cause << '\n';
  }
  return out.str();
}

std::vector<SweepRow> parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader)
    throw Error(ErrorCode::kParse, "CSV header mismatch");
  std::vector<SweepRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    std::vector<std::string> fields;
    std::string cur;
    std::istringstream ls(line);
    while (std::getline(ls, cur, ',')) fields.push_back(cur);
    if (line.back() == ',') fields.push_back("");
    if (fields.size() != 13)
      parse_fail(lineno, "expected 13 CSV fields, got " + std::to_string(fields.size()));
    auto num = [&](size_t i) {
      if (fields[i].empty()) return std::numeric_limits<double>::quiet_NaN();
      return std::stod(fields[i]);
    };
    SweepRow r;
    r.loss_db = num(0);
    r.key_bits = num(1);
    r.n_sent = num(2);
    r.n_detected = num(3);
    r.m_sifted = num(4);
    r.qber = num(5);
    r.qber_adjusted = num(6);
    r.correction = num(7);
    r.e1_upper = num(8);
    r.delta = num(9);
    r.eps_bar = num(10);
    r.eps_pa = num(11);
    r.zero_key_cause = fields[12];
    rows.push_back(std::move(r));
  }
  return rows;
}

void emit_csv(const std::vector<SweepRow>& rows, const std::string& path) {
  if (rows.empty())
    throw Error(ErrorCode::kInvalidArgument, "refusing to write an empty table");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, "cannot open for writing: " + path);
  out << to_csv(rows);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write failed: " + path);
}

}  // namespace satkey
