// Copyright 2026 The qmac Authors
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

#include "cli.hpp"

#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmac/channel_io.hpp"
#include "qmac/checks.hpp"
#include "qmac/coding.hpp"
#include "qmac/errors.hpp"
#include "qmac/format.hpp"
#include "qmac/region.hpp"

namespace qmac::cli {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& m) : std::runtime_error(m) {}
};

struct CommonOptions {
  std::string channel;
  std::string prior = "uniform";
  double tol = 1e-9;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "json";
  std::optional<std::size_t> max_block_dim;
  std::string config;
};

void add_io_options(CLI::App* cmd, CommonOptions& o) {
  cmd->add_option("--out", o.out, "Write output to this file instead of stdout");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--max-block-dim", o.max_block_dim, "Largest dense operator dimension");
  cmd->add_option("--config", o.config, "JSON file with cap and tolerance settings");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Inline JSON when the argument looks like JSON, otherwise a file path.
json json_argument(const std::string& arg, const std::string& what) {
  const auto first = arg.find_first_not_of(" \t\r\n");
  const std::string text =
      (first != std::string::npos && (arg[first] == '[' || arg[first] == '{')) ? arg : read_file(arg);
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw UsageError("malformed " + what + ": " + e.what());
  }
}

Prior prior_from_json(const json& j, const CqMacChannel& ch) {
  if (j.is_string()) {
    if (j.get<std::string>() == "uniform") return Prior::uniform(ch.alphabets());
    throw UsageError("prior must be \"uniform\" or a list of per-sender distributions");
  }
  if (!j.is_array()) throw UsageError("prior must be a list of per-sender distributions");
  std::vector<std::vector<double>> per;
  for (const auto& row : j) {
    if (!row.is_array()) throw UsageError("prior rows must be lists of numbers");
    std::vector<double> r;
    for (const auto& x : row) {
      if (!x.is_number()) throw UsageError("prior entries must be numbers");
      r.push_back(x.get<double>());
    }
    per.push_back(std::move(r));
  }
  Prior p(std::move(per));
  p.check_matches(ch);
  return p;
}

Prior parse_prior(const std::string& spec, const CqMacChannel& ch) {
  if (spec == "uniform") return Prior::uniform(ch.alphabets());
  return prior_from_json(json_argument(spec, "prior"), ch);
}

MixtureSpec parse_mixture(const std::string& spec, const CqMacChannel& ch) {
  const json j = json_argument(spec, "mixture");
  if (!j.is_array() || j.empty()) throw UsageError("mixture must be a nonempty list of components");
  MixtureSpec mix;
  for (const auto& c : j) {
    if (!c.is_object() || !c.contains("weight") || !c.contains("prior") || c.size() != 2 ||
        !c["weight"].is_number()) {
      throw UsageError("mixture components must be {\"weight\": w, \"prior\": ...}");
    }
    mix.components.emplace_back(c["weight"].get<double>(), prior_from_json(c["prior"], ch));
  }
  return mix;
}

Limits resolve_limits(const CommonOptions& o, double* tol_from_config = nullptr) {
  Limits lim;
  if (!o.config.empty()) {
    const json cfg = json_argument(o.config, "config");
    if (!cfg.is_object()) throw UsageError("config must be a JSON object");
    for (const auto& [key, value] : cfg.items()) {
      if (key == "tol") {
        if (!value.is_number()) throw UsageError("config tol must be a number");
        if (tol_from_config) *tol_from_config = value.get<double>();
        continue;
      }
      if (!value.is_number_unsigned() || value.get<std::size_t>() == 0) {
        throw UsageError("config " + key + " must be a positive integer");
      }
      const auto v = value.get<std::size_t>();
      if (key == "max_block_dim") {
        lim.max_block_dim = v;
      } else if (key == "max_corner_senders") {
        lim.max_corner_senders = v;
      } else if (key == "max_exhaustive_tuples") {
        lim.max_exhaustive_tuples = v;
      } else if (key == "max_sweep_points") {
        lim.max_sweep_points = v;
      } else if (key == "max_mixture_components") {
        lim.max_mixture_components = v;
      } else {
        throw UsageError("unknown config key '" + key + "'");
      }
    }
  }
  if (const char* env = std::getenv("QMAC_MAX_DIM"); env != nullptr && *env != '\0') {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
      v = std::stoull(env, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos != std::string(env).size() || v == 0) throw UsageError("QMAC_MAX_DIM must be a positive integer");
    lim.max_block_dim = static_cast<std::size_t>(v);
  }
  if (o.max_block_dim) {
    if (*o.max_block_dim == 0) throw UsageError("--max-block-dim must be positive");
    lim.max_block_dim = *o.max_block_dim;
  }
  return lim;
}

double resolve_tol(const CommonOptions& o, const CLI::App* cmd, double config_tol) {
  const bool flag = cmd->count("--tol") > 0;
  const double tol = flag ? o.tol : config_tol;
  if (!(tol > 0.0) || !std::isfinite(tol)) throw UsageError("tolerance must be positive");
  return tol;
}

CqMacChannel require_channel(const CommonOptions& o) {
  if (o.channel.empty()) throw UsageError("--channel is required");
  return load_channel(o.channel);
}

void emit(const std::string& text, const CommonOptions& o, std::ostream& out) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + o.out + "'");
  f << text;
  if (!f) throw UsageError("failed writing '" + o.out + "'");
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

std::string order_string(const Permutation& perm) {
  std::string s;
  for (std::size_t k = 0; k < perm.size(); ++k) {
    if (k) s += ">";
    s += std::to_string(perm[k] + 1);
  }
  return s;
}

json constraints_json(const RateConstraintSet& cs) {
  json rows = json::array();
  const std::uint32_t full = SenderSubset::full(cs.senders()).mask();
  for (std::uint32_t m = 1; m <= full; ++m) {
    rows.push_back({{"subset", SenderSubset(m).to_string()}, {"mask", m}, {"bound", cs.bound(SenderSubset(m))}});
  }
  return rows;
}

json corners_json(const std::vector<Corner>& corners) {
  json rows = json::array();
  for (const auto& c : corners) {
    std::vector<std::size_t> order;
    for (std::size_t i : c.decode_order) order.push_back(i + 1);
    rows.push_back({{"decode_order", order}, {"rates", c.point.rates}});
  }
  return rows;
}

struct CsvTable {
  std::size_t senders;
  std::vector<std::string> rows;

  void bound(const std::string& kind, const std::string& prior_id, const RateConstraintSet& cs) {
    const std::uint32_t full = SenderSubset::full(senders).mask();
    for (std::uint32_t m = 1; m <= full; ++m) {
      std::string r = kind + "," + prior_id + "," + csv_quote(SenderSubset(m).to_string()) + "," +
                      std::to_string(m) + ",," + format_number(cs.bound(SenderSubset(m)));
      for (std::size_t i = 0; i < senders; ++i) r += ",";
      rows.push_back(r);
    }
  }
  void point(const std::string& kind, const std::string& prior_id, const std::string& order,
             const std::vector<double>& rates) {
    std::string r = kind + "," + prior_id + ",,," + order + ",";
    for (double x : rates) r += "," + format_number(x);
    rows.push_back(r);
  }
  std::string str() const {
    std::string h = "kind,prior_id,subset,mask,decode_order,bound";
    for (std::size_t i = 1; i <= senders; ++i) h += ",R" + std::to_string(i);
    std::string s = h + "\n";
    for (const auto& r : rows) s += r + "\n";
    return s;
  }
};

std::vector<double> parse_point(const std::string& text, std::size_t senders) {
  std::vector<double> v;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != item.size()) throw UsageError("--point must be a comma-separated list of numbers");
    v.push_back(x);
  }
  if (v.size() != senders) {
    throw UsageError("--point needs " + std::to_string(senders) + " rates, got " + std::to_string(v.size()));
  }
  return v;
}

// A positive integer k or {"resolution": k}.
std::size_t parse_resolution(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error&) {
    throw UsageError("--sweep must be a positive integer or {\"resolution\": k}");
  }
  if (j.is_object() && j.size() == 1 && j.contains("resolution")) j = j["resolution"];
  if (!j.is_number_unsigned() || j.get<std::size_t>() == 0) {
    throw UsageError("--sweep resolution must be a positive integer");
  }
  return j.get<std::size_t>();
}

// ---------------------------------------------------------------------------

int cmd_validate(const CommonOptions& o, const std::string& positional, std::ostream& out) {
  const std::string path = positional.empty() ? o.channel : positional;
  if (path.empty()) throw UsageError("validate needs a channel file");
  const RawChannel raw = load_raw_channel(path);
  try {
    const CqMacChannel ch = validate_channel(raw);
    std::string alph;
    for (std::size_t k = 0; k < ch.alphabets().size(); ++k) {
      if (k) alph += "x";
      alph += std::to_string(ch.alphabets()[k]);
    }
    out << "valid: " << ch.num_senders() << " sender(s), alphabets " << alph << ", output dimension "
        << ch.output_dim() << (ch.is_quasi_classical() ? ", quasi-classical" : "") << "\n";
    return kExitOk;
  } catch (const ChannelValidationError& e) {
    for (const auto& v : e.violations()) out << "violation: " << v << "\n";
    return kExitDomain;
  }
}

struct RegionOptions {
  bool corners = false;
  std::string sweep;
  std::string mixture;
  std::string point;
};

int cmd_region(const CommonOptions& o, const RegionOptions& r, const CLI::App* cmd,
               std::ostream& out) {
  double config_tol = o.tol;
  const Limits lim = resolve_limits(o, &config_tol);
  const double tol = resolve_tol(o, cmd, config_tol);
  const CqMacChannel ch = require_channel(o);
  const std::size_t s = ch.num_senders();
  const Prior p = parse_prior(o.prior, ch);
  const ConditionalEntropyTable table(ch, p);
  const RateConstraintSet cs = constraint_set(ch, p);

  json doc = {{"senders", s}, {"names", ch.names()}, {"prior", to_json(p)}, {"constraints", constraints_json(cs)}};
  CsvTable csv{s, {}};
  csv.bound("bound", "", cs);

  if (r.corners) {
    const auto corners = all_corners(table, lim);
    doc["corners"] = corners_json(corners);
    for (const auto& c : corners) csv.point("corner", "", order_string(c.decode_order), c.point.rates);
  }
  if (!r.mixture.empty()) {
    const MixtureSpec mix = parse_mixture(r.mixture, ch);
    const RateConstraintSet mcs = mixture_constraints(ch, mix, lim);
    json comps = json::array();
    for (const auto& [w, pr] : mix.components) comps.push_back({{"weight", w}, {"prior", to_json(pr)}});
    doc["mixture"] = {{"components", comps}, {"constraints", constraints_json(mcs)}};
    csv.bound("mixture_bound", "", mcs);
  }
  if (!r.sweep.empty()) {
    const std::size_t resolution = parse_resolution(r.sweep);
    const auto points = boundary_sweep(ch, resolution, lim);
    json rows = json::array();
    std::vector<RatePoint> all;
    for (const auto& sp : points) {
      rows.push_back({{"prior_id", sp.prior_id},
                      {"prior", to_json(sp.prior)},
                      {"constraints", constraints_json(sp.constraints)},
                      {"corners", corners_json(sp.corners)}});
      const std::string id = std::to_string(sp.prior_id);
      csv.bound("sweep_bound", id, sp.constraints);
      for (const auto& c : sp.corners) {
        csv.point("sweep_corner", id, order_string(c.decode_order), c.point.rates);
        all.push_back(c.point);
      }
    }
    json sweep = {{"resolution", resolution}, {"points", rows}};
    if (s == 2) {
      json hull = json::array();
      for (const auto& v : upper_boundary_2d(all)) {
        hull.push_back(v.rates);
        csv.point("boundary", "", "", v.rates);
      }
      sweep["upper_boundary"] = hull;
    }
    doc["sweep"] = sweep;
  }
  if (!r.point.empty()) {
    const RatePoint pt{parse_point(r.point, s)};
    const bool member = is_member(pt, cs, tol);
    doc["membership"] = {{"point", pt.rates}, {"tol", tol}, {"member", member}};
    csv.point(member ? "member" : "non_member", "", "", pt.rates);
  }

  emit(o.format == "csv" ? csv.str() : doc.dump(2) + "\n", o, out);
  return kExitOk;
}

struct SimulateOptions {
  std::vector<std::size_t> n{1};
  std::vector<std::size_t> sizes;
  std::vector<double> rates;
  double delta = 0.0;
  std::string mode = "exhaustive";
  std::size_t trials = 1000;
  std::size_t draws = 1;
  std::string decoder_states = "ensemble";
  bool timing = false;
};

int cmd_simulate(const CommonOptions& o, const SimulateOptions& so, std::ostream& out) {
  const Limits lim = resolve_limits(o);
  if (!o.seed) throw UsageError("--seed is required");
  const CqMacChannel ch = require_channel(o);
  const std::size_t s = ch.num_senders();
  const Prior p = parse_prior(o.prior, ch);
  if (so.sizes.empty() == so.rates.empty()) throw UsageError("give exactly one of --sizes and --rates");
  if (!so.sizes.empty() && so.sizes.size() != s) throw UsageError("--sizes needs one value per sender");
  if (!so.rates.empty() && so.rates.size() != s) throw UsageError("--rates needs one value per sender");
  for (std::size_t l : so.sizes) {
    if (l == 0) throw UsageError("codebook sizes must be positive");
  }
  for (double r : so.rates) {
    if (!(r >= 0.0) || !std::isfinite(r)) throw UsageError("rates must be nonnegative");
  }
  if (!(so.delta >= 0.0) || !std::isfinite(so.delta)) throw UsageError("--delta must be nonnegative");
  if (so.draws == 0) throw UsageError("--draws must be positive");
  for (std::size_t n : so.n) {
    if (n == 0) throw UsageError("block lengths must be positive");
  }

  SimConfig cfg{lim, word_state_mode_from_string(so.decoder_states)};
  json runs = json::array();
  std::string csv = csv_header(s) + "\n";
  for (std::size_t n : so.n) {
    SimSpec spec;
    spec.n = n;
    spec.draws = so.draws;
    spec.master_seed = *o.seed;
    if (so.mode == "monte_carlo") {
      if (so.trials == 0) throw UsageError("--trials must be positive in monte_carlo mode");
      spec.mode = ErrorMode::monte_carlo(so.trials, 0);
    }
    if (!so.sizes.empty()) {
      spec.codebook_sizes = so.sizes;
    } else {
      for (double r : so.rates) spec.codebook_sizes.push_back(codebook_size_for_rate(r, so.delta, n));
    }
    const SimReport rep = simulate(ch, p, spec, cfg);
    runs.push_back(to_json(rep, so.timing));
    csv += csv_row(rep) + "\n";
  }
  json doc = {{"prior", to_json(p)}, {"runs", runs}};
  if (!so.rates.empty()) {
    doc["target_rates"] = so.rates;
    doc["delta"] = so.delta;
  }
  emit(o.format == "csv" ? csv : doc.dump(2) + "\n", o, out);
  return kExitOk;
}

int cmd_check(const CommonOptions& o, const std::string& suite, std::size_t trials,
              const CLI::App* cmd, std::ostream& out, std::ostream& err) {
  // Summary always goes to stdout; --out receives the full JSON report.
  double config_tol = o.tol;
  CheckOptions opts;
  opts.limits = resolve_limits(o, &config_tol);
  opts.tol = resolve_tol(o, cmd, config_tol);
  if (!o.seed) throw UsageError("--seed is required");
  opts.seed = *o.seed;
  opts.trials = trials;

  CheckReport report = run_suite(suite, opts);
  if (!o.channel.empty()) report.merge(run_channel_suite(load_channel(o.channel), opts));

  std::ostringstream text;
  text << "suite " << suite << ": " << report.trials << " trial(s)\n";
  for (const auto& [name, st] : report.stats) {
    text << "  " << name << ": checked " << st.checked << ", violations " << st.violations
         << ", worst excess " << format_number(st.worst_excess) << "\n";
  }
  text << (report.passed() ? "PASS" : "FAIL") << "\n";
  out << text.str();
  if (!o.out.empty()) emit(to_json(report).dump(2) + "\n", o, out);
  if (!report.passed()) {
    for (const auto& v : report.violations) err << v.dump() << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Capacity regions and coding simulations for classical-quantum multiple-access channels",
               "qmac"};
  app.require_subcommand(1);

  CommonOptions o;

  auto* validate = app.add_subcommand("validate", "Check a channel file");
  std::string validate_path;
  validate->add_option("path", validate_path, "Channel file");
  validate->add_option("--channel", o.channel, "Channel file");

  auto* region = app.add_subcommand("region", "Constraint sets, corners, mixtures and prior sweeps");
  RegionOptions ro;
  region->add_option("--channel", o.channel, "Channel file")->required();
  region->add_option("--prior", o.prior, "\"uniform\", inline JSON or a JSON file");
  region->add_option("--tol", o.tol, "Membership tolerance");
  region->add_flag("--corners", ro.corners, "Enumerate successive-decoding corners");
  region->add_option("--sweep", ro.sweep, "Sweep product priors: resolution k or {\"resolution\": k}");
  region->add_option("--mixture", ro.mixture, "Mixture components (inline JSON or file)");
  region->add_option("--point", ro.point, "Test membership of R1,...,Rs");
  add_io_options(region, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Random-coding simulation with sequential decoding");
  SimulateOptions so;
  simulate_cmd->add_option("--channel", o.channel, "Channel file")->required();
  simulate_cmd->add_option("--prior", o.prior, "\"uniform\", inline JSON or a JSON file");
  simulate_cmd->add_option("--seed", o.seed, "Master seed");
  simulate_cmd->add_option("--n", so.n, "Block lengths, e.g. 2,4,6")->delimiter(',');
  simulate_cmd->add_option("--sizes", so.sizes, "Codebook sizes L1,...,Ls")->delimiter(',');
  simulate_cmd->add_option("--rates", so.rates, "Rates R1,...,Rs (sizes ceil(2^(n(R-delta))))")->delimiter(',');
  simulate_cmd->add_option("--delta", so.delta, "Rate back-off used with --rates");
  simulate_cmd->add_option("--mode", so.mode, "Error averaging")->check(CLI::IsMember({"exhaustive", "monte_carlo"}));
  simulate_cmd->add_option("--trials", so.trials, "Monte Carlo trials per codebook draw");
  simulate_cmd->add_option("--draws", so.draws, "Independent codebook draws");
  simulate_cmd->add_option("--decoder-states", so.decoder_states, "Word states used by the decoders")
      ->check(CLI::IsMember({"ensemble", "empirical"}));
  simulate_cmd->add_flag("--timing", so.timing, "Include wall-clock time in the JSON report");
  add_io_options(simulate_cmd, o);

  auto* check = app.add_subcommand("check", "Randomised property suites");
  std::string suite = "all";
  std::size_t trials = 200;
  check->add_option("--suite", suite, "entropy, lemmas, region or all")
      ->check(CLI::IsMember({"entropy", "lemmas", "region", "all"}));
  check->add_option("--trials", trials, "Random instances per suite");
  check->add_option("--seed", o.seed, "Master seed");
  check->add_option("--tol", o.tol, "Tolerance for every inequality");
  check->add_option("--channel", o.channel, "Also check this channel under random priors");
  check->add_option("--out", o.out, "Write the JSON report to this file");
  check->add_option("--max-block-dim", o.max_block_dim, "Largest dense operator dimension");
  check->add_option("--config", o.config, "JSON file with cap and tolerance settings");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kExitOk;
    }
    err << "error: " << e.what() << "\n";
    err << "run with --help for usage\n";
    return kExitUsage;
  }

  try {
    if (validate->parsed()) return cmd_validate(o, validate_path, out);
    if (region->parsed()) return cmd_region(o, ro, region, out);
    if (simulate_cmd->parsed()) return cmd_simulate(o, so, out);
    if (check->parsed()) return cmd_check(o, suite, trials, check, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ChannelValidationError& e) {
    for (const auto& v : e.violations()) err << "violation: " << v << "\n";
    return kExitDomain;
  } catch (const CapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace qmac::cli
