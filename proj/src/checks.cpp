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

#include "qmac/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qmac/channel_io.hpp"
#include "qmac/coding.hpp"
#include "qmac/entropy.hpp"
#include "qmac/errors.hpp"
#include "qmac/random.hpp"
#include "qmac/region.hpp"

namespace qmac {

bool CheckReport::passed() const {
  return std::all_of(stats.begin(), stats.end(),
                     [](const auto& kv) { return kv.second.violations == 0; });
}

void CheckReport::merge(const CheckReport& other) {
  for (const auto& [name, st] : other.stats) {
    InequalityStats& mine = stats[name];
    mine.checked += st.checked;
    mine.violations += st.violations;
    mine.worst_excess = std::max(mine.worst_excess, st.worst_excess);
  }
  for (const auto& v : other.violations) {
    if (violations.size() < kMaxRecorded) violations.push_back(v);
  }
  trials += other.trials;
}

namespace {

class Recorder {
 public:
  Recorder(CheckReport& report, std::string suite, const CheckOptions& opts)
      : report_(report), suite_(std::move(suite)), opts_(opts) {}

  void begin(std::size_t trial) {
    trial_ = trial;
    ++report_.trials;
  }
  std::uint64_t trial_seed() const { return split_seed(opts_.seed, trial_); }

  template <class Instance>
  void add(const std::string& name, double excess, Instance&& instance) {
    add_with_tol(name, excess, opts_.tol, instance);
  }

  template <class Instance>
  void add_with_tol(const std::string& name, double excess, double tol, Instance&& instance) {
    InequalityStats& st = report_.stats[name];
    ++st.checked;
    st.worst_excess = std::max(st.worst_excess, excess);
    if (excess > tol || std::isnan(excess)) {
      ++st.violations;
      if (report_.violations.size() < CheckReport::kMaxRecorded) {
        report_.violations.push_back({{"suite", suite_},
                                      {"check", name},
                                      {"excess", excess},
                                      {"seed", opts_.seed},
                                      {"trial", trial_},
                                      {"trial_seed", trial_seed()},
                                      {"instance", instance()}});
      }
    }
  }

 private:
  CheckReport& report_;
  std::string suite_;
  const CheckOptions& opts_;
  std::size_t trial_ = 0;
};

std::vector<std::size_t> random_alphabets(Rng& rng, std::size_t s, std::size_t max_letters) {
  std::vector<std::size_t> a(s);
  for (auto& x : a) x = rng.between(1, max_letters);
  return a;
}

CqMacChannel random_test_channel(Rng& rng, const std::vector<std::size_t>& alphabets, std::size_t d) {
  if (rng.uniform() < 0.25) return random_diagonal_channel(rng, alphabets, d);
  return random_channel(rng, alphabets, d);
}

nlohmann::json channel_instance(const CqMacChannel& ch, const Prior& p) {
  return {{"channel", channel_to_json(ch)}, {"prior", to_json(p)}};
}

nlohmann::json states_json(const std::vector<DensityMatrix>& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : v) out.push_back(matrix_to_json(r.matrix()));
  return out;
}

nlohmann::json povm_json(const Povm& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& el : m.elements()) out.push_back(matrix_to_json(el.op.matrix()));
  return out;
}

}  // namespace

namespace {

void check_entropy_instance(Recorder& rec, const CqMacChannel& ch, const Prior& p,
                            const Limits& limits) {
  const std::size_t s = ch.num_senders();
  const CqEnsemble e = channel_state(ch, p);
  auto instance = [&] { return channel_instance(ch, p); };

  const std::uint32_t full = SenderSubset::full(s).mask();
  if (e.dense_dim() <= limits.max_block_dim) {
    for (std::uint32_t m = 0; m <= full; ++m) {
      for (bool q : {false, true}) {
        const SubsystemSelector sel{SenderSubset(m), q};
        if (sel.empty()) continue;
        const double block = subsystem_entropy(e, sel);
        const double dense = dense_subsystem_entropy(e, sel, limits.max_block_dim);
        rec.add("dual_path_entropy", std::abs(block - dense), instance);
      }
    }
  }
  for (std::uint32_t m = 1; m <= full; ++m) {
    const SenderSubset j(m);
    const auto mi = mutual_information_detail(e, j);
    rec.add("cmi_forms_agree", std::abs(mi.raw - mi.via_joint_entropies), instance);
    rec.add("cmi_reduced_agree", std::abs(mi.raw - mutual_information_via_reduced(ch, p, j)), instance);
    rec.add("cmi_nonnegative", -mi.raw, instance);
  }
}

void check_region_instance(Recorder& rec, const CqMacChannel& ch, const Prior& p,
                           const Limits& limits) {
  constexpr double kVertexTol = 1e-7;
  const std::size_t s = ch.num_senders();
  auto instance = [&] { return channel_instance(ch, p); };

  const ConditionalEntropyTable table(ch, p);
  const RateConstraintSet cs = constraint_set(ch, p);
  const std::uint32_t full = SenderSubset::full(s).mask();

  if (s <= limits.max_corner_senders) {
    Permutation perm(s);
    std::iota(perm.begin(), perm.end(), 0);
    do {
      const RatePoint r = corner(table, perm);
      double excess = 0.0;
      for (double x : r.rates) excess = std::max(excess, -x);
      for (std::uint32_t m = 1; m <= full; ++m) {
        double sum = 0.0;
        for (std::size_t i : SenderSubset(m).members()) sum += r.rates[i];
        excess = std::max(excess, sum - cs.bound(SenderSubset(m)));
      }
      rec.add("corner_membership", excess, instance);
      const double total = std::accumulate(r.rates.begin(), r.rates.end(), 0.0);
      rec.add("corner_telescoping", std::abs(total - cs.bound(SenderSubset(full))), instance);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  if (s <= 3) {
    const auto corners = all_corners(table, limits);
    const auto vertices = dominant_vertices(polytope_vertices(cs), kVertexTol);
    auto dist = [](const RatePoint& a, const RatePoint& b) {
      double m = 0.0;
      for (std::size_t i = 0; i < a.rates.size(); ++i) m = std::max(m, std::abs(a.rates[i] - b.rates[i]));
      return m;
    };
    double hausdorff = 0.0;
    for (const auto& c : corners) {
      double best = 1e300;
      for (const auto& v : vertices) best = std::min(best, dist(c.point, v));
      hausdorff = std::max(hausdorff, best);
    }
    for (const auto& v : vertices) {
      double best = 1e300;
      for (const auto& c : corners) best = std::min(best, dist(c.point, v));
      hausdorff = std::max(hausdorff, best);
    }
    rec.add_with_tol("corners_are_dominant_vertices", hausdorff, kVertexTol, instance);
  }

  auto f = [&](std::uint32_t m) { return m == 0 ? 0.0 : cs.bound(SenderSubset(m)); };
  double sub = -1e300;
  for (std::uint32_t a = 0; a <= full; ++a) {
    for (std::uint32_t b = 0; b <= full; ++b) sub = std::max(sub, f(a | b) + f(a & b) - f(a) - f(b));
  }
  rec.add("bounds_submodular", sub, instance);

  const RateConstraintSet mixed = mixture_constraints(ch, MixtureSpec{{{1.0, p}}}, limits);
  double diff = 0.0;
  for (std::size_t k = 0; k < cs.bounds().size(); ++k) {
    diff = std::max(diff, std::abs(mixed.bounds()[k] - cs.bounds()[k]));
  }
  rec.add("single_component_mixture", diff, instance);
}

}  // namespace

CheckReport run_entropy_suite(const CheckOptions& opts) {
  CheckReport report;
  Recorder rec(report, "entropy", opts);
  for (std::size_t t = 0; t < opts.trials; ++t) {
    rec.begin(t);
    Rng rng(rec.trial_seed());
    const std::size_t s = rng.between(1, 3);
    const auto alphabets = random_alphabets(rng, s, 3);
    const std::size_t d = rng.between(2, 4);
    const CqMacChannel ch = random_test_channel(rng, alphabets, d);
    const Prior p = random_prior(rng, alphabets);
    check_entropy_instance(rec, ch, p, opts.limits);
  }
  return report;
}

CheckReport run_lemma_suite(const CheckOptions& opts) {
  CheckReport report;
  Recorder rec(report, "lemmas", opts);
  for (std::size_t t = 0; t < opts.trials; ++t) {
    rec.begin(t);
    Rng rng(rec.trial_seed());

    {
      const std::size_t n1 = rng.between(1, 3), d1 = rng.between(1, 3);
      const std::size_t n2 = rng.between(1, 3), d2 = rng.between(1, 3);
      std::vector<DensityMatrix> v1, v2;
      for (std::size_t a = 0; a < n1; ++a) v1.push_back(random_density(rng, d1, rng.between(1, d1)));
      for (std::size_t a = 0; a < n2; ++a) v2.push_back(random_density(rng, d2, rng.between(1, d2)));
      const std::vector<double> flat = random_distribution(rng, n1 * n2);
      std::vector<std::vector<double>> q(n1, std::vector<double>(n2));
      for (std::size_t a = 0; a < n1; ++a) {
        for (std::size_t b = 0; b < n2; ++b) q[a][b] = flat[a * n2 + b];
      }
      rec.add("subadditivity", check_subadditivity(v1, v2, q), [&] {
        return nlohmann::json{{"v1", states_json(v1)}, {"v2", states_json(v2)}, {"q", q}};
      });
    }

    {
      const std::size_t nx = rng.between(2, 4), d = rng.between(2, 4);
      const std::vector<double> px = random_distribution(rng, nx);
      std::vector<Atom> atoms;
      std::vector<DensityMatrix> states;
      for (std::size_t x = 0; x < nx; ++x) {
        states.push_back(random_density(rng, d, rng.between(1, d)));
        atoms.push_back({{x}, px[x], states.back()});
      }
      const CqEnsemble e({nx}, d, atoms);
      const Povm y = random_povm(rng, d, nx);
      std::vector<std::vector<double>> xp(nx, std::vector<double>(nx, 0.0));
      if (rng.uniform() < 0.5) {
        for (std::size_t j = 0; j < nx; ++j) xp[j][j] = 1.0;
      } else {
        for (std::size_t x = 0; x < nx; ++x) {
          const auto col = random_distribution(rng, nx);
          for (std::size_t j = 0; j < nx; ++j) xp[j][x] = col[j];
        }
      }
      const FanoCheck f = fano_bound_check(e, xp, y);
      rec.add("fano", f.lhs - f.rhs, [&] {
        return nlohmann::json{{"px", px}, {"states", states_json(states)}, {"y_povm", povm_json(y)}, {"x_povm", xp}};
      });
    }

    {
      const std::size_t d = rng.between(2, 8);
      const DensityMatrix rho = random_density(rng, d, rng.between(1, d));
      const HermitianOperator x = random_effect(rng, d);
      const DisturbanceCheck c = disturbance_check(rho, x);
      rec.add("measurement_disturbance", c.lhs - c.bound, [&] {
        return nlohmann::json{{"rho", matrix_to_json(rho.matrix())}, {"x", matrix_to_json(x.matrix())}};
      });
    }

    {
      const std::size_t d = rng.between(2, 8), k = rng.between(2, 4);
      std::vector<DensityMatrix> states;
      std::vector<LabeledState> labelled;
      for (std::size_t a = 0; a < k; ++a) {
        states.push_back(rng.uniform() < 0.5 ? random_pure(rng, d) : random_density(rng, d));
        labelled.push_back({a, states.back()});
      }
      const Povm povm = rng.uniform() < 0.5 ? pgm_decoder(labelled) : random_povm(rng, d, k);
      const TenderInstrument inst(povm);
      std::vector<std::size_t> targets(k);
      std::iota(targets.begin(), targets.end(), 0);
      const std::vector<double> w = random_distribution(rng, k);
      const TenderCheck c = tender_measurement_check(states, inst, targets, w);
      auto instance = [&] {
        return nlohmann::json{{"states", states_json(states)}, {"povm", povm_json(povm)}, {"weights", w}};
      };
      for (std::size_t a = 0; a < k; ++a) {
        const double eps = c.epsilons[a];
        rec.add("tender_instrument", c.instrument_distances[a] - (std::sqrt(8.0 * eps) + eps), instance);
        rec.add("tender_instrument_worst_case", c.instrument_distances[a] - c.worst_case_bound, instance);
      }
      rec.add("tender_instrument_average", c.avg_instrument_distance - c.average_bound, instance);
    }
  }
  return report;
}

CheckReport run_region_suite(const CheckOptions& opts) {
  CheckReport report;
  Recorder rec(report, "region", opts);
  for (std::size_t t = 0; t < opts.trials; ++t) {
    rec.begin(t);
    Rng rng(rec.trial_seed());
    const std::size_t s = rng.between(1, 3);
    const auto alphabets = random_alphabets(rng, s, 3);
    const std::size_t d = rng.between(2, 4);
    const CqMacChannel ch = random_test_channel(rng, alphabets, d);
    const Prior p = random_prior(rng, alphabets);
    check_region_instance(rec, ch, p, opts.limits);
  }
  return report;
}

CheckReport run_channel_suite(const CqMacChannel& ch, const CheckOptions& opts) {
  CheckReport report;
  Recorder rec(report, "channel", opts);
  for (std::size_t t = 0; t <= opts.trials; ++t) {
    rec.begin(t);
    Rng rng(rec.trial_seed());
    const Prior p = t == 0 ? Prior::uniform(ch.alphabets()) : random_prior(rng, ch.alphabets());
    check_entropy_instance(rec, ch, p, opts.limits);
    check_region_instance(rec, ch, p, opts.limits);
  }
  return report;
}

CheckReport run_suite(const std::string& name, const CheckOptions& opts) {
  if (name == "entropy") return run_entropy_suite(opts);
  if (name == "lemmas") return run_lemma_suite(opts);
  if (name == "region") return run_region_suite(opts);
  if (name == "all") {
    CheckReport r = run_entropy_suite(opts);
    r.merge(run_lemma_suite(opts));
    r.merge(run_region_suite(opts));
    return r;
  }
  throw ValidationError("unknown suite '" + name + "' (expected entropy, lemmas, region or all)");
}

nlohmann::json to_json(const CheckReport& r) {
  nlohmann::json stats = nlohmann::json::object();
  for (const auto& [name, st] : r.stats) {
    stats[name] = {{"checked", st.checked}, {"violations", st.violations}, {"worst_excess", st.worst_excess}};
  }
  return {{"passed", r.passed()}, {"trials", r.trials}, {"inequalities", stats}, {"violations", r.violations}};
}

}  // namespace qmac
