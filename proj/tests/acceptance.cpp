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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "qmac/channel_io.hpp"
#include "qmac/checks.hpp"
#include "qmac/coding.hpp"
#include "qmac/format.hpp"
#include "qmac/random.hpp"
#include "qmac/region.hpp"

using namespace qmac;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string num(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

// Every listed inequality was checked at least `min_checked` times without
// a violation.
void require_clean(Outcome& o, const CheckReport& r, const std::vector<std::string>& names, std::size_t min_checked) {
  for (const auto& name : names) {
    const auto it = r.stats.find(name);
    if (it == r.stats.end()) {
      o.require(false, name + " never checked");
      continue;
    }
    const InequalityStats& st = it->second;
    o.require(st.checked >= min_checked, name + " checked only " + std::to_string(st.checked) + " times");
    o.require(st.violations == 0, name + ": " + std::to_string(st.violations) + " violation(s), worst excess " +
                                      num(st.worst_excess));
  }
}

CheckOptions options(std::size_t trials, std::uint64_t seed) {
  CheckOptions o;
  o.trials = trials;
  o.seed = seed;
  o.tol = 1e-9;
  return o;
}

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

// Criteria 1 and 2 share one run of the entropy suite.
const CheckReport& entropy_run(double* elapsed = nullptr) {
  static double secs = 0.0;
  static const CheckReport report = [] {
    const auto t0 = Clock::now();
    CheckReport r = run_entropy_suite(options(200, 20260101));
    secs = seconds_since(t0);
    return r;
  }();
  if (elapsed) *elapsed = secs;
  return report;
}

Outcome ac1() {
  Outcome o;
  double secs = 0.0;
  const CheckReport& r = entropy_run(&secs);
  o.require(r.trials == 200, "expected 200 trials");
  require_clean(o, r, {"dual_path_entropy"}, 200);
  o.require(secs < 60.0, "runtime " + num(secs) + " s");
  o.detail = o.detail.empty() ? "200 channels, " + std::to_string(r.stats.at("dual_path_entropy").checked) +
                                    " entropies, " + num(secs) + " s"
                              : o.detail;
  return o;
}

Outcome ac2() {
  Outcome o;
  const CheckReport& r = entropy_run();
  require_clean(o, r, {"cmi_forms_agree", "cmi_reduced_agree", "cmi_nonnegative"}, 200);
  if (o.pass) o.detail = std::to_string(r.stats.at("cmi_forms_agree").checked) + " subset instances";
  return o;
}

const CheckReport& lemma_run(double* elapsed = nullptr) {
  static double secs = 0.0;
  static const CheckReport report = [] {
    const auto t0 = Clock::now();
    CheckReport r = run_lemma_suite(options(1000, 20260202));
    secs = seconds_since(t0);
    return r;
  }();
  if (elapsed) *elapsed = secs;
  return report;
}

Outcome ac3() {
  Outcome o;
  double secs = 0.0;
  const CheckReport& r = lemma_run(&secs);
  require_clean(o, r, {"subadditivity", "fano"}, 500);
  o.require(secs < 60.0, "runtime " + num(secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(r.stats.at("subadditivity").checked) + " subadditivity, " +
               std::to_string(r.stats.at("fano").checked) + " Fano instances";
  }
  return o;
}

Outcome ac4() {
  Outcome o;
  double secs = 0.0;
  const CheckReport& r = lemma_run(&secs);
  require_clean(o, r,
                {"measurement_disturbance", "tender_instrument", "tender_instrument_worst_case",
                 "tender_instrument_average"},
                1000);
  o.require(secs < 120.0, "runtime " + num(secs) + " s");
  if (o.pass) {
    o.detail = std::to_string(r.stats.at("measurement_disturbance").checked) + " (rho, X) pairs, " +
               std::to_string(r.stats.at("tender_instrument").checked) + " ensemble states, " + num(secs) + " s";
  }
  return o;
}

Outcome ac5() {
  Outcome o;
  const CheckReport r = run_region_suite(options(200, 20260303));
  o.require(r.trials == 200, "expected 200 trials");
  require_clean(o, r, {"corner_membership", "corner_telescoping"}, 200);
  if (o.pass) o.detail = std::to_string(r.stats.at("corner_membership").checked) + " corners on 200 channels";
  return o;
}

Outcome ac6() {
  Outcome o;
  const CqMacChannel adder = load_channel(fixtures::channel_path("adder-classical.json"));
  const Prior u = Prior::uniform(adder.alphabets());
  const oracle::ClassicalMac mac = oracle::from_diagonal(adder);
  const std::vector<std::vector<double>> prior{{0.5, 0.5}, {0.5, 0.5}};
  const RateConstraintSet cs = constraint_set(adder, u);
  const double expect[3] = {1.0, 1.0, 1.5};
  for (std::uint32_t mask = 1; mask < 4; ++mask) {
    const double oracle_bound = oracle::bound(mac, prior, mask);
    o.require(near(oracle_bound, expect[mask - 1], 1e-12), "oracle bound mismatch");
    o.require(near(cs.bound(SenderSubset(mask)), oracle_bound, 1e-9), "adder bound " + std::to_string(mask));
  }
  const std::vector<Corner> corners = all_corners(adder, u);
  o.require(corners.size() == 2, "adder corner count");
  const std::vector<std::vector<double>> want{{0.5, 1.0}, {1.0, 0.5}};
  for (std::size_t k = 0; k < corners.size() && k < 2; ++k) {
    const auto oc = oracle::corner(mac, prior, corners[k].decode_order);
    for (std::size_t i = 0; i < 2; ++i) {
      o.require(near(corners[k].point.rates[i], oc[i], 1e-9), "adder corner vs oracle");
      o.require(near(oc[i], want[k][i], 1e-12), "oracle corner value");
    }
  }

  Rng rng(20260404);
  std::size_t bounds_checked = 0;
  for (int t = 0; t < 200; ++t) {
    const std::size_t s = rng.between(1, 3);
    std::vector<std::size_t> alph;
    for (std::size_t i = 0; i < s; ++i) alph.push_back(rng.between(1, 3));
    const CqMacChannel ch = random_diagonal_channel(rng, alph, rng.between(1, 4));
    const Prior p = random_prior(rng, alph);
    const RateConstraintSet c = constraint_set(ch, p);
    const oracle::ClassicalMac m = oracle::from_diagonal(ch);
    for (std::uint32_t mask = 1; mask < (1u << s); ++mask) {
      const double gap = std::abs(c.bound(SenderSubset(mask)) - oracle::bound(m, p.per_sender(), mask));
      o.require(gap <= 1e-9, "diagonal channel " + std::to_string(t) + " mask " + std::to_string(mask) +
                                 " off by " + num(gap));
      ++bounds_checked;
    }
  }
  if (o.pass) o.detail = "adder exact; " + std::to_string(bounds_checked) + " diagonal-channel bounds";
  return o;
}

Outcome ac7() {
  Outcome o;
  const CqMacChannel ch = load_channel(fixtures::channel_path("holevo-two-state.json"));
  const double bound = constraint_set(ch, Prior::uniform(ch.alphabets())).bounds()[0];
  const double r = 1.0 / std::sqrt(2.0);
  const double closed = oracle::shannon({(1.0 + r) / 2.0, (1.0 - r) / 2.0});
  o.require(near(bound, closed, 1e-5), "bound " + num(bound) + " vs " + num(closed));
  o.require(near(bound, 0.60088, 1e-5), "bound " + num(bound));
  if (o.pass) o.detail = "chi = " + format_number(bound);
  return o;
}

Outcome ac8() {
  Outcome o;
  const std::vector<std::size_t> pair{2, 2};
  const Prior u = Prior::uniform(pair);

  const CqMacChannel orth = fixtures::orthogonal_noiseless();
  std::vector<Codebook> full;
  for (std::size_t i = 0; i < 2; ++i) full.push_back(Codebook{i, 1, {{0}, {1}}, 0});
  const double orth_error = average_error(orth, full, u, ErrorMode::exhaustive()).avg_error;
  o.require(orth_error <= 1e-12, "orthogonal error " + num(orth_error));

  const CqMacChannel flat = fixtures::constant_channel();
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t n = 1 + seed % 3;
    const std::vector<Codebook> books{sample_codebook(0, {0.5, 0.5}, n, 2, split_seed(seed, 0)),
                                      sample_codebook(1, {0.5, 0.5}, n, 2, split_seed(seed, 1))};
    const SequentialDecoder dec(flat, u, books);
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t b = 0; b < 2; ++b) {
        const std::vector<std::size_t> msg{a, b};
        worst = std::max(worst, sequential_decode_exact(dec, msg).success);
      }
    }
  }
  o.require(worst <= 0.25 + 1e-9, "constant-channel success " + num(worst));
  if (o.pass) o.detail = "orthogonal error " + num(orth_error) + ", constant-channel max success " + num(worst);
  return o;
}

Outcome ac9() {
  Outcome o;
  const auto t0 = Clock::now();
  const CqMacChannel ch = load_channel(fixtures::channel_path("qubit-pure-mac.json"));
  const Prior u = Prior::uniform(ch.alphabets());
  const RatePoint c = corner(ch, u, {0, 1});
  const std::vector<double> rates{0.5 * c.rates[0], 0.5 * c.rates[1]};

  SimConfig cfg;
  cfg.limits.max_block_dim = 64;
  std::vector<SimReport> reports;
  for (std::size_t n : {2u, 4u, 6u}) {
    SimSpec spec;
    spec.n = n;
    for (double r : rates) spec.codebook_sizes.push_back(codebook_size_for_rate(r, 0.0, n));
    spec.draws = 40;
    spec.master_seed = 20260505;
    reports.push_back(simulate(ch, u, spec, cfg));
  }
  const double e2 = reports[0].avg_error, e4 = reports[1].avg_error, e6 = reports[2].avg_error;
  o.require(e6 < e4 && e4 < e2, "errors not strictly decreasing: " + num(e2) + ", " + num(e4) + ", " + num(e6));

  // Brute-force expansion of every outcome chain at n = 2.
  double enumerated = 0.0, worst_gap = 0.0;
  const SimReport& r2 = reports[0];
  for (std::size_t d = 0; d < r2.codebook_draws; ++d) {
    std::vector<Codebook> books;
    for (std::size_t i = 0; i < 2; ++i) {
      books.push_back(sample_codebook(i, u.sender(i), 2, r2.codebook_sizes[i], r2.codebook_seeds[d][i]));
    }
    const SequentialDecoder dec(ch, u, books, cfg);
    double gap = 0.0;
    enumerated += oracle::enumerated_average_error(dec, &gap);
    worst_gap = std::max(worst_gap, gap);
  }
  enumerated /= static_cast<double>(r2.codebook_draws);
  o.require(near(enumerated, e2, 1e-9), "n=2 enumeration " + num(enumerated) + " vs chain " + num(e2));
  o.require(worst_gap <= 1e-9, "outcome tree mass off by " + num(worst_gap));

  const double secs = seconds_since(t0);
  o.require(secs < 300.0, "runtime " + num(secs) + " s");
  if (o.pass) {
    o.detail = "errors n=2,4,6: " + format_number(e2) + ", " + format_number(e4) + ", " + format_number(e6) +
               "; enumeration gap " + num(std::abs(enumerated - e2)) + "; " + num(secs) + " s";
  }
  return o;
}

std::string capture(const std::vector<std::string>& args, int* code) {
  std::ostringstream out, err;
  *code = cli::run(args, out, err);
  return out.str();
}

Outcome ac10() {
  Outcome o;
  const std::string pure = fixtures::channel_path("qubit-pure-mac.json");
  const std::vector<std::vector<std::string>> commands{
      {"simulate", "--channel", pure, "--seed", "424242", "--n", "1,2,3", "--rates", "0.3,0.2", "--draws", "3"},
      {"simulate", "--channel", pure, "--seed", "424242", "--n", "2", "--sizes", "3,2", "--mode", "monte_carlo",
       "--trials", "50", "--draws", "2"},
      {"check", "--suite", "all", "--trials", "50", "--seed", "424242", "--channel", pure},
  };
  std::size_t compared = 0;
  for (const auto& args : commands) {
    int c1 = -1, c2 = -1;
    const std::string a = capture(args, &c1), b = capture(args, &c2);
    o.require(c1 == 0 && c2 == 0, args[0] + " exited " + std::to_string(c1));
    o.require(!a.empty() && a == b, args[0] + " output differs between runs");
    ++compared;
  }
  if (o.pass) o.detail = std::to_string(compared) + " commands rerun byte-identically";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"AC1", ac1}, {"AC2", ac2}, {"AC3", ac3}, {"AC4", ac4}, {"AC5", ac5},
      {"AC6", ac6}, {"AC7", ac7}, {"AC8", ac8}, {"AC9", ac9}, {"AC10", ac10},
  };
  int failures = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
