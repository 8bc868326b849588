#include "dopt/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numeric>
#include <sstream>

#include "dopt/bounds.hpp"
#include "dopt/derand.hpp"
#include "dopt/oracle.hpp"
#include "dopt/relaxation.hpp"
#include "dopt/run.hpp"
#include "dopt/sampling.hpp"
#include "json.hpp"

namespace dopt {

namespace {

constexpr double kAgreementTol = 1e-8;
constexpr double kLawTol = 1e-12;
constexpr double kCorrelationTol = 1e-9;
constexpr double kMartingaleTol = 1e-9;
constexpr double kFloorTol = 1e-6;

const char* const kCheckNames[] = {
    "cauchy_binet_set",       "cauchy_binet_weighted",  "relaxation_feasible",
    "relaxation_dominance",   "sequential_law",         "positive_correlation",
    "cond_exp_proportional",  "cond_exp_asymptotic",    "cond_exp_repetitions",
    "martingale_proportional", "martingale_asymptotic", "martingale_repetitions",
    "floor_proportional",     "floor_asymptotic",       "floor_repetitions",
};

std::string format_set(std::span<const std::size_t> s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(s[i]);
  }
  return out + "}";
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// Collects the outcome of one check on one instance: the first violation is
// kept as the failure message, the largest one as `worst`.
class Outcome {
 public:
  void violate(double amount, const std::string& what) {
    if (message_.empty()) message_ = what;
    worst_ = std::max(worst_, amount);
  }
  bool failed() const { return !message_.empty(); }
  const std::string& message() const { return message_; }
  double worst() const { return worst_; }

 private:
  std::string message_;
  double worst_ = 0.0;
};

double det_scale(const Instance& inst) {
  double widest = 0.0;
  for (std::size_t i = 0; i < inst.n(); ++i) {
    double s = 0.0;
    for (double v : inst.vector(i)) s += v * v;
    widest = std::max(widest, s);
  }
  const double md = static_cast<double>(inst.m());
  return std::pow(static_cast<double>(inst.k()) * widest / md, md);
}

void compare_h(Outcome& out, const std::string& label, std::span<const std::size_t> base,
               const std::function<double()>& mine, const std::function<double()>& oracle,
               double floor) {
  bool mine_unreachable = false;
  bool oracle_unreachable = false;
  double h = 0.0;
  double o = 0.0;
  try {
    h = mine();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnreachableCondition) throw;
    mine_unreachable = true;
  }
  try {
    o = oracle();
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kUnreachableCondition) throw;
    oracle_unreachable = true;
  }
  // Zero-probability conditions have no reference value; the closed forms
  // still extend to them, so only a refusal on a reachable condition counts.
  if (oracle_unreachable) return;
  if (mine_unreachable) {
    out.violate(1.0, label + " S=" + format_set(base) + " rejected but reachable");
    return;
  }
  const double err = std::abs(h - o) / std::max(std::abs(o), floor);
  if (err > kAgreementTol) {
    out.violate(err, label + " S=" + format_set(base) + " H=" + num(h) + " oracle=" + num(o));
  }
}

void check_martingale(Outcome& out, const GreedyTrace& trace, const Design& design,
                      std::size_t m) {
  double first = std::numeric_limits<double>::quiet_NaN();
  for (const GreedyStep& step : trace.steps) {
    if (step.base.empty()) first = step.base_value;
    if (std::isnan(step.base_value)) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (double v : step.candidate_values) {
      if (!std::isnan(v)) best = std::max(best, v);
    }
    const double drop = step.base_value - best;
    if (drop > kMartingaleTol) {
      out.violate(drop, "greedy step at S=" + format_set(step.base) + " lowers H from " +
                            num(step.base_value) + " to " + num(best));
    }
  }
  const double final_det = std::pow(design.value, static_cast<double>(m));
  if (!std::isnan(first) && first - final_det > kMartingaleTol) {
    out.violate(first - final_det,
                "final det " + num(final_det) + " below H(empty) " + num(first));
  }
}

struct InstanceRun {
  std::size_t index;
  std::uint64_t seed;
  std::vector<Outcome> outcomes;
};

InstanceRun verify_one(const VerifyOptions& opts, std::size_t index) {
  InstanceRun run{index, opts.seed ^ index, std::vector<Outcome>(std::size(kCheckNames))};
  CounterRng rng({run.seed});
  const std::size_t m = 1 + rng.next_below(opts.max_m);
  const std::size_t n_lo = std::min(opts.max_n, m + 1);
  const std::size_t n = n_lo + rng.next_below(opts.max_n - n_lo + 1);
  const std::size_t k_hi = std::min(n, opts.max_k);
  const std::size_t k = m + rng.next_below(k_hi - m + 1);
  const std::uint64_t data_seed = rng.next_u64();

  const Instance plain = generate_instance(m, n, k, Mode::kWithoutRepetitions, Family::kGaussian,
                                           data_seed);
  const Instance reps(
      [&] {
        std::vector<std::vector<double>> v(n);
        for (std::size_t i = 0; i < n; ++i) {
          const auto a = plain.vector(i);
          v[i].assign(a.begin(), a.end());
        }
        return v;
      }(),
      k, Mode::kWithRepetitions);
  // Relative errors are taken against max(|value|, floor), so values that vanish
  // exactly are held to an absolute 1e-13 of the determinant scale.
  const double floor = 1e-5 * det_scale(plain);
  auto& o = run.outcomes;

  // Cauchy-Binet over the whole vector set, then with random positive weights.
  {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), std::size_t{0});
    const double lhs = oracle::gram_determinant(plain, all);
    double rhs = 0.0;
    for (const auto& s : oracle::all_subsets_of_size(n, m)) rhs += oracle::gram_determinant(plain, s);
    const double err = std::abs(lhs - rhs) / std::max(std::abs(lhs), floor);
    if (err > kAgreementTol) o[0].violate(err, "set identity " + num(lhs) + " vs " + num(rhs));

    std::vector<double> w(n);
    for (double& v : w) v = 0.1 + 2.0 * rng.next_double();
    const double lhs_w = std::pow(objective_of_weights(plain, w), static_cast<double>(m));
    double rhs_w = 0.0;
    for (const auto& s : oracle::all_subsets_of_size(n, m)) {
      double p = 1.0;
      for (std::size_t i : s) p *= w[i];
      rhs_w += p * oracle::gram_determinant(plain, s);
    }
    const double err_w = std::abs(lhs_w - rhs_w) / std::max(std::abs(rhs_w), floor);
    if (err_w > kAgreementTol) o[1].violate(err_w, "weighted identity " + num(lhs_w) + " vs " + num(rhs_w));
  }

  const SolverConfig cfg;
  const FractionalDesign frac = solve_relaxation(plain, cfg);
  const FractionalDesign frac_r = solve_relaxation(reps, cfg);

  for (const auto* f : {&frac, &frac_r}) {
    const double sum = std::accumulate(f->weights.begin(), f->weights.end(), 0.0);
    const double kd = static_cast<double>(k);
    if (std::abs(sum - kd) > 1e-9 * kd) o[2].violate(std::abs(sum - kd), "weights sum to " + num(sum));
    for (double v : f->weights) {
      const bool capped = f->mode == Mode::kWithoutRepetitions;
      if (v < -1e-12 || (capped && v > 1.0 + 1e-12)) o[2].violate(std::abs(v), "weight " + num(v) + " out of range");
    }
    if (!f->converged || f->gap > cfg.rel_tol * static_cast<double>(m)) {
      o[2].violate(f->gap, "solver gap " + num(f->gap) + " not certified");
    }
  }
  {
    const double best = oracle::brute_force_optimum(plain).value;
    const double best_r = oracle::brute_force_optimum(reps).value;
    if (best > frac.value + 1e-6) o[3].violate(best - frac.value, "optimum " + num(best) + " above relaxation " + num(frac.value));
    if (best_r > frac_r.value + 1e-6) o[3].violate(best_r - frac_r.value, "optimum " + num(best_r) + " above relaxation " + num(frac_r.value));
  }

  const oracle::ExactLaw law = oracle::exact_law_proportional(frac.weights);
  for (const auto& s : oracle::all_subsets_of_size(n, k)) {
    const double diff = std::abs(proportional_path_probability(frac.weights, k, s) - law.probability_of(s));
    if (diff > kLawTol) o[4].violate(diff, "law differs at S=" + format_set(s));
  }
  const double g = g_without_reps(m, n, k);
  for (const auto& t : oracle::all_subsets_of_size(n, m)) {
    double prod = 1.0;
    for (std::size_t i : t) prod *= frac.weights[i];
    const double shortfall = prod / g - oracle::inclusion_probability(law, t);
    if (shortfall > kCorrelationTol) o[5].violate(shortfall, "Pr[T in S] below floor at T=" + format_set(t));
  }

  // Conditional expectations on every conditioning set.
  const double scale = opts.corrupt_h ? 1.0 + 1e-6 : 1.0;
  for (std::size_t s = 0; s <= k; ++s) {
    for (const auto& base : oracle::all_subsets_of_size(n, s)) {
      compare_h(o[6], "proportional", base,
                [&] { return scale * cond_exp_proportional(plain, frac, base); },
                [&] { return oracle::exact_conditional_expectation(law, plain, base); }, floor);
    }
  }
  for (double eps : {0.25, 0.5}) {
    const oracle::ExactLaw bern = oracle::exact_law_bernoulli_conditioned(frac.weights, eps, k);
    for (std::size_t s = 0; s <= k; ++s) {
      for (const auto& base : oracle::all_subsets_of_size(n, s)) {
        compare_h(o[7], "asymptotic eps=" + num(eps), base,
                  [&] { return cond_exp_asymptotic(plain, frac, eps, base); },
                  [&] { return oracle::exact_conditional_expectation(bern, plain, base); }, floor);
      }
    }
  }
  const oracle::ExactLaw multi = oracle::exact_law_multinomial(frac_r.weights, k);
  for (std::size_t s = 0; s <= k; ++s) {
    for (const auto& base : oracle::all_multisets_of_size(n, s)) {
      compare_h(o[8], "repetitions", base,
                [&] { return cond_exp_repetitions(reps, frac_r, base); },
                [&] { return oracle::exact_conditional_expectation(multi, reps, base); }, floor);
    }
  }

  GreedyTrace tp, ta, tr;
  const Design dp = derandomize_proportional(plain, frac, &tp);
  const Design da = derandomize_asymptotic(plain, frac, 0.5, &ta);
  const Design dr = derandomize_repetitions(reps, frac_r, &tr);
  check_martingale(o[9], tp, dp, m);
  check_martingale(o[10], ta, da, m);
  check_martingale(o[11], tr, dr, m);

  {
    const double alpha = ratio_without_reps(m, n, k).alpha;
    const double need = std::max(alpha, std::exp(-1.0)) * frac.value - kFloorTol;
    if (dp.value < need) o[12].violate(need - dp.value, "f=" + num(dp.value) + " below " + num(need));
    if (const auto cert = ratio_asymptotic(m, n, k, 0.5)) {
      const double need_a = cert->alpha * frac.value - kFloorTol;
      if (da.value < need_a) o[13].violate(need_a - da.value, "f=" + num(da.value) + " below " + num(need_a));
    }
    const double md = static_cast<double>(m);
    const double target = repetition_factor(m, k) * std::pow(frac_r.value, md);
    const double got = std::pow(dr.value, md);
    if (got < target * (1.0 - kFloorTol)) o[14].violate(target - got, "f^m=" + num(got) + " below " + num(target));
  }
  return run;
}

}  // namespace

bool VerifySummary::ok() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckTally& c) { return c.failed == 0; });
}

std::string VerifySummary::to_json() const {
  nlohmann::ordered_json j;
  j["instances"] = instances;
  j["ok"] = ok();
  auto arr = nlohmann::ordered_json::array();
  for (const CheckTally& c : checks) {
    nlohmann::ordered_json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["failed"] = c.failed;
    e["worst"] = c.worst;
    arr.push_back(e);
  }
  j["checks"] = arr;
  j["failures"] = failures;
  return j.dump(2) + "\n";
}

std::string VerifySummary::table() const {
  std::ostringstream out;
  char line[128];
  std::snprintf(line, sizeof line, "%-26s %8s %8s  %s\n", "check", "passed", "failed", "worst");
  out << line;
  for (const CheckTally& c : checks) {
    std::snprintf(line, sizeof line, "%-26s %8zu %8zu  %.3g\n", c.name.c_str(), c.passed, c.failed,
                  c.worst);
    out << line;
  }
  out << (ok() ? "PASS" : "FAIL") << " (" << instances << " instances)\n";
  return out.str();
}

VerifySummary run_verify(const VerifyOptions& opts) {
  if (!(opts.max_m >= 1 && opts.max_m <= opts.max_k && opts.max_k <= opts.max_n)) {
    throw Error(ErrorCode::kInvalidParams, "need 1 <= max_m <= max_k <= max_n");
  }
  if (opts.max_n > 12 || opts.max_k > 8) {
    throw Error(ErrorCode::kTooLarge, "verification caps are max_n <= 12 and max_k <= 8");
  }
  VerifySummary summary;
  summary.instances = opts.num_instances;
  for (const char* name : kCheckNames) summary.checks.push_back({name});
  for (std::size_t i = 0; i < opts.num_instances; ++i) {
    const InstanceRun run = verify_one(opts, i);
    for (std::size_t c = 0; c < run.outcomes.size(); ++c) {
      CheckTally& tally = summary.checks[c];
      const Outcome& out = run.outcomes[c];
      if (out.failed()) {
        ++tally.failed;
        tally.worst = std::max(tally.worst, out.worst());
        char head[96];
        std::snprintf(head, sizeof head, "instance %zu (seed %llu) %s: ", run.index,
                      static_cast<unsigned long long>(run.seed), kCheckNames[c]);
        summary.failures.push_back(head + out.message());
      } else {
        ++tally.passed;
      }
    }
  }
  return summary;
}

}  // namespace dopt
