// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "barely/barely.hpp"
#include "oracles.hpp"

using namespace barely;
namespace fs = std::filesystem;

namespace {

struct Result {
  bool pass;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Flip characterisation from the trace string alone.
bool trace_shape_ok(const std::string& t) {
  std::size_t flips = 0;
  for (std::size_t i = 1; i < t.size(); ++i) flips += t[i] != t[i - 1];
  return flips <= 3 && (flips < 3 || t.front() == '0');
}

bool shapes_ok(const ChainFamily& f) {
  for (std::size_t n = 0; n < f.ground_size(); ++n) {
    std::string t;
    for (std::size_t i = 0; i < f.size(); ++i) t += oracle::member(f, i, n) ? '1' : '0';
    if (!trace_shape_ok(t)) return false;
  }
  return true;
}

std::vector<ChainFamily> checker_corpus() {
  DeterministicRng rng(0xC0FFEE);
  std::vector<ChainFamily> corpus;
  for (int i = 0; i < 1200; ++i) {
    const std::size_t k = rng.below(13), n = 1 + rng.below(16);
    // density sweeps sparse to dense so both verdicts are well represented
    corpus.push_back(oracle::random_family(rng, k, n, rng.below(257)));
  }
  return corpus;
}

struct Instance {
  ChainFamily input;
  std::vector<IndexValue> order;
};

std::vector<Instance> adjustment_corpus() {
  DeterministicRng rng(0xAD15);
  std::vector<Instance> out;
  for (int i = 0; i < 100; ++i) {
    const unsigned depth = 1 + static_cast<unsigned>(rng.below(10));
    const std::size_t cap = std::min<std::size_t>(100, std::size_t{1} << (depth + 3));
    auto f = marciszewski_family(random_bit_indices(rng, depth, 1 + rng.below(cap)), DyadicGround(depth));
    auto order = i % 2 ? shuffled_order(f, rng.next()) : f.indices();
    out.push_back({std::move(f), std::move(order)});
  }
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 1 + rng.below(64);
    const std::size_t flips = rng.below(std::min<std::size_t>(3, n) + 1);
    auto xs = random_indices(rng, 1 + rng.below(100), uniform_points(n));
    auto f = perturbed_chain(rng.next(), n, xs, flips);
    auto order = i % 2 ? shuffled_order(f, rng.next()) : f.indices();
    out.push_back({std::move(f), std::move(order)});
  }
  return out;
}

// Barely alternating families that are not adjusted: raw dyadic families and
// random families that happen to pass, each with a top point so strict triples occur.
std::vector<ChainFamily> validated_corpus() {
  DeterministicRng rng(0xBA11);
  std::vector<ChainFamily> out;
  for (int i = 0; i < 60; ++i) {
    const unsigned depth = 2 + static_cast<unsigned>(rng.below(7));
    out.push_back(marciszewski_family(random_bit_indices(rng, depth, 2 + rng.below(40)), DyadicGround(depth)));
  }
  while (out.size() < 200) {
    auto f = oracle::random_family(rng, 1 + rng.below(10), 1 + rng.below(12), rng.below(257));
    if (is_barely_alternating(f)) out.push_back(std::move(f));
  }
  return out;
}

FunctionOnLine random_function(DeterministicRng& rng, const LineModel& model) {
  std::map<IndexValue, Rational> v;
  for (const auto& x : model.carrier()) {
    v.emplace(x, Rational(static_cast<std::int64_t>(rng.below(201)) - 100, 1 + static_cast<std::int64_t>(rng.below(12))));
  }
  return FunctionOnLine(model, v);
}

Rational random_scalar(DeterministicRng& rng) {
  return Rational(static_cast<std::int64_t>(rng.below(41)) - 20, 1 + static_cast<std::int64_t>(rng.below(9)));
}

const IndexValue kTop(2, 1);  // above every generated index

// ---------------------------------------------------------------------------

Result criterion1() {
  const auto t0 = Clock::now();
  const auto corpus = checker_corpus();
  std::size_t mismatches = 0, failing = 0;
  for (const auto& f : corpus) {
    auto fast = is_barely_alternating(f);
    auto slow = oracle::alternation_quadruple(f);
    failing += slow.has_value();
    if (fast.is_ok() != !slow.has_value()) {
      ++mismatches;
      continue;
    }
    if (slow) {
      auto [n, a, b, c, d] = *slow;
      const std::array<IndexValue, 4> pts{f.index(a), f.index(b), f.index(c), f.index(d)};
      if (fast.witness().n != n || fast.witness().points != pts) ++mismatches;
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << corpus.size() << " families (" << failing << " with a 1010 pattern), " << mismatches << " mismatches, "
    << secs << " s";
  return {mismatches == 0 && corpus.size() >= 1000 && secs < 10.0, d.str()};
}

Result criterion2() {
  const auto corpus = checker_corpus();
  std::size_t mismatches = 0;
  for (const auto& f : corpus) {
    bool shape = true;
    for (std::size_t n = 0; n < f.ground_size(); ++n) {
      const std::size_t flips = flip_count(f, n);
      shape = shape && flips <= 3 && (flips != 3 || membership_trace(f, n).front() == '0');
    }
    mismatches += shape != is_barely_alternating(f).is_ok();
  }
  std::ostringstream d;
  d << corpus.size() << " families, " << mismatches << " mismatches";
  return {mismatches == 0, d.str()};
}

Result criterion3() {
  const auto t0 = Clock::now();
  const auto corpus = adjustment_corpus();
  std::size_t failures = 0, receipts = 0, cost = 0, chains = 0;
  for (const auto& inst : corpus) {
    auto [out, report] = adjust_family(inst.input, inst.order);
    if (!is_barely_alternating(out) || !shapes_ok(out) || out.indices() != inst.input.indices()) ++failures;
    chains += is_chain(out).is_ok();
    // neighbours at insertion time, rebuilt from the receipts in order
    std::map<IndexValue, SetBits> seen;
    for (const auto& r : report.receipts) {
      ++receipts;
      cost += r.cost();
      SetBits below(out.ground_size());
      SetBits above = SetBits::full(out.ground_size());
      auto it = seen.lower_bound(r.inserted_index);
      if (it != seen.end()) above = it->second;
      if (it != seen.begin()) below = std::prev(it)->second;
      const SetBits& a_x = inst.input.set_at(r.inserted_index);
      const SetBits bound = (below - a_x) | (a_x - above);
      if (!(r.produced_set ^ a_x).is_subset_of(bound)) ++failures;
      if (r.produced_set != out.set_at(r.inserted_index)) ++failures;
      seen.emplace(r.inserted_index, r.produced_set);
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream d;
  d << corpus.size() << " instances, " << receipts << " receipts, total cost " << cost << ", " << failures
    << " violations, " << chains << " outputs are chains, " << secs << " s";
  return {failures == 0 && secs < 30.0, d.str()};
}

Result criterion4() {
  DeterministicRng rng(0x1A5E);
  std::size_t calls = 0, violations = 0;
  while (calls < 12000) {
    const std::size_t k = rng.below(9), n = 1 + rng.below(14);
    // random barely alternating condition: random families that pass, or adjusted ones
    ChainFamily base = oracle::random_family(rng, k, n, rng.below(257));
    if (!is_barely_alternating(base)) base = adjust_family(base).first;
    Condition cond(base);
    const IndexValue x(static_cast<std::int64_t>(2 * rng.below(k + 1) + 1), static_cast<std::int64_t>(2 * k + 2));
    SetBits a_x(n);
    for (std::size_t m = 0; m < n; ++m)
      if (rng.coin()) a_x.insert(m);
    auto [next, receipt] = insert_point(cond, x, a_x);
    ++calls;
    const auto& idx = base.indices();
    const auto pos = static_cast<std::size_t>(std::lower_bound(idx.begin(), idx.end(), x) - idx.begin());
    SetBits a = pos > 0 ? base.set(pos - 1) : SetBits(n);
    SetBits c = pos < base.size() ? base.set(pos) : SetBits::full(n);
    for (std::size_t m = 0; m < n; ++m) {
      const bool agrees_a = receipt.produced_set.contains(m) == a.contains(m);
      const bool agrees_c = receipt.produced_set.contains(m) == c.contains(m);
      if (!(a_x.contains(m) ? agrees_c : agrees_a)) ++violations;
    }
    if (oracle::alternation_quadruple(next.family()).has_value()) ++violations;
  }
  std::ostringstream d;
  d << calls << " insertions, " << violations << " violations";
  return {violations == 0 && calls >= 10000, d.str()};
}

Result criterion5() {
  DeterministicRng rng(0xCCC);
  std::size_t misclassified = 0, split_pairs = 0, merges = 0, merge_failures = 0;
  while (split_pairs < 100) {
    auto adjusted = adjust_family(oracle::random_family(rng, 2 + rng.below(12), 1 + rng.below(16), rng.below(257))).first;
    const std::size_t cut = rng.below(adjusted.size());
    auto all = adjusted.entries();
    Condition left(ChainFamily(adjusted.ground(), {all.begin(), all.begin() + static_cast<std::ptrdiff_t>(cut) + 1}));
    Condition right(ChainFamily(adjusted.ground(), {all.begin() + static_cast<std::ptrdiff_t>(cut), all.end()}));
    misclassified += !conditions_compatible(left, right).is_ok();
    ++split_pairs;
  }
  // Hand-built merges: two conditions of at most three indices each (always
  // barely alternating), interleaved so the union may contain 1010.
  while (merges < 200) {
    const std::size_t n = 1 + rng.below(4);
    auto f = oracle::random_family(rng, 6, n, 128);
    std::vector<FamilyEntry> e = f.entries(), first, second;
    for (std::size_t i = 0; i < e.size(); ++i) (i % 2 ? second : first).push_back(e[i]);
    Condition c1(ChainFamily(f.ground(), first)), c2(ChainFamily(f.ground(), second));
    auto v = conditions_compatible(c1, c2);
    auto brute = oracle::alternation_quadruple(f);
    ++merges;
    if (v.is_ok() != !brute.has_value()) {
      ++misclassified;
      continue;
    }
    if (brute) {
      ++merge_failures;
      auto [m, a, b, c, d] = *brute;
      if (v.witness().n != m || v.witness().points != std::array{f.index(a), f.index(b), f.index(c), f.index(d)})
        ++misclassified;
    }
  }
  std::ostringstream d;
  d << split_pairs << " split pairs, " << merges << " interleaved merges (" << merge_failures
    << " with a 1010 witness), " << misclassified << " misclassified";
  return {misclassified == 0 && merge_failures > 0, d.str()};
}

Result criterion6() {
  DeterministicRng rng(0x6A9);
  std::size_t violations = 0;
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 8 + rng.below(57), len = 1 + rng.below(8);
    // nested initial/final segments, then up to 3 injected defects per lower set
    std::vector<SetBits> lower, upper;
    const std::size_t step = n / (2 * len + 1);
    for (std::size_t k = 0; k < len; ++k) {
      SetBits u(n), v(n);
      for (std::size_t e = 0; e < step * (k + 1); ++e) u.insert(e);
      for (std::size_t e = 0; e < n - step * k; ++e) v.insert(e);
      lower.push_back(u);
      upper.push_back(v);
    }
    for (auto& u : lower) {
      for (std::size_t e : rng.sample(n, rng.below(4))) u.insert(e);
    }
    std::size_t budget = 0;
    for (const auto& u : lower)
      for (const auto& v : upper) budget = std::max(budget, (u - v).count());
    auto g = interpolate_gap(lower, upper, budget);
    for (std::size_t i = 0; i < len; ++i) {
      SetBits lower_allow(n), upper_allow(n);
      for (std::size_t m = 0; m <= i; ++m) lower_allow |= lower[i] - upper[m];
      for (std::size_t k = 0; k < i; ++k) upper_allow |= lower[k] - upper[i];
      violations += !(lower[i] - g.interpolant).is_subset_of(lower_allow);
      violations += !(g.interpolant - upper[i]).is_subset_of(upper_allow);
    }
  }
  std::ostringstream d;
  d << "100 towers, " << violations << " violated inclusions";
  return {violations == 0, d.str()};
}

Result criterion7() {
  DeterministicRng rng(0x777);
  std::size_t adjusted = 0, chains = 0, strict_families = 0, failures = 0;
  for (const auto& inst : adjustment_corpus()) {
    auto out = adjust_family(inst.input, inst.order).first;
    auto triples = compute_triples(out, LineModel::with_top(out, kTop));
    ++adjusted;
    failures += !(operator_norm(triples) <= 3);
  }
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t n = 1 + rng.below(40);
    auto chain = initial_segment_chain(uniform_points(n), random_indices(rng, 1 + rng.below(40), uniform_points(n)));
    for (const auto& model : {LineModel::over(chain), LineModel::with_top(chain, kTop)}) {
      ++chains;
      failures += operator_norm(compute_triples(chain, model)) != 1;
    }
  }
  for (const auto& f : validated_corpus()) {
    const LineModel model = LineModel::with_top(f, kTop);
    auto triples = compute_triples(f, model);
    const Rational norm = operator_norm(triples);
    failures += !(norm <= 3);
    auto w = norm_witness(triples, model);
    bool strict = false;
    for (const auto& t : triples.rows) strict = strict || t.pattern() == TriplePattern::strict;
    if (strict) {
      ++strict_families;
      if (!w || w->f.sup_norm() != 1 || abs(apply_operator(w->f, triples).on_ground.at(w->n)) != 3 || norm != 3)
        ++failures;
    } else {
      failures += w.has_value() || norm != 1;
    }
  }
  std::ostringstream d;
  d << adjusted << " adjusted families, " << chains << " chain models, " << strict_families
    << " validated families with strict triples, " << failures << " failures";
  return {failures == 0 && strict_families > 0, d.str()};
}

Result criterion8() {
  DeterministicRng rng(0x888);
  std::size_t extension_checks = 0, linear_checks = 0, failures = 0;
  auto families = validated_corpus();
  for (const auto& inst : adjustment_corpus()) families.push_back(adjust_family(inst.input, inst.order).first);
  for (const auto& fam : families) {
    if (fam.empty()) continue;
    const LineModel model = rng.coin() ? LineModel::with_top(fam, kTop) : LineModel::over(fam);
    auto triples = compute_triples(fam, model);
    auto f = random_function(rng, model);
    auto g = random_function(rng, model);
    const Rational alpha = random_scalar(rng), beta = random_scalar(rng);
    auto ef = apply_operator(f, triples);
    auto eg = apply_operator(g, triples);
    auto ecomb = apply_operator(FunctionOnLine::combine(alpha, f, beta, g), triples);
    ++extension_checks;
    for (const auto& x : model.carrier()) failures += ef.on_carrier(x) != f(x);
    ++linear_checks;
    for (std::size_t n = 0; n < triples.rows.size(); ++n) {
      failures += ecomb.on_ground[n] != alpha * ef.on_ground[n] + beta * eg.on_ground[n];
    }
  }
  std::ostringstream d;
  d << extension_checks << " extension checks, " << linear_checks << " linearity checks, " << failures
    << " failures";
  return {failures == 0 && linear_checks >= 100, d.str()};
}

Result criterion9() {
  DeterministicRng rng(0x999);
  std::size_t tables = 0, rows = 0, disorder = 0, late_exits = 0, harness_runs = 0, inconsistencies = 0,
              identity_failures = 0;

  std::vector<ChainFamily> validated = validated_corpus();
  for (const auto& f : checker_corpus())
    if (is_barely_alternating(f)) validated.push_back(f);
  for (const auto& f : validated) {
    auto triples = compute_triples(f, LineModel::with_top(f, kTop));
    ++tables;
    for (const auto& t : triples.rows) {
      ++rows;
      disorder += !(t.entry <= t.exit && t.exit <= t.reentry);
    }
    late_exits += !no_fourth_flip_check(f, triples).is_ok();
  }

  // Harness runs: schedules over adjusted families, every target.
  for (const auto& inst : adjustment_corpus()) {
    auto out = adjust_family(inst.input, inst.order).first;
    const LineModel model = LineModel::with_top(out, kTop);
    auto triples = compute_triples(out, model);
    ++tables;
    late_exits += !no_fourth_flip_check(out, triples).is_ok();
    for (const auto& t : triples.rows) {
      ++rows;
      disorder += !(t.entry <= t.exit && t.exit <= t.reentry);
    }
    auto f = random_function(rng, model);
    for (std::size_t n = 0; n < triples.rows.size(); ++n) {
      ++harness_runs;
      try {
        auto report = continuity_harness(out, model, schedule_towards(triples, n), f);
        const Triple& z = report.limit;
        identity_failures += !report.identity_holds;
        identity_failures += f(z.entry) - f(z.exit) + f(z.reentry) != f(limit_eval_point(z));
      } catch (const InconsistencyError&) {
        ++inconsistencies;
      }
    }
  }
  std::ostringstream d;
  d << tables << " tables / " << rows << " rows: " << disorder << " unordered, " << late_exits
    << " late exits; " << harness_runs << " harness runs: " << inconsistencies << " inconsistency errors, "
    << identity_failures << " identity failures";
  return {disorder == 0 && late_exits == 0 && inconsistencies == 0 && identity_failures == 0, d.str()};
}

Result criterion10() {
  const fs::path dir = fs::temp_directory_path() / ("barely_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string cli = BARELY_CLI_PATH;
  const std::string samples = std::string(BARELY_SOURCE_DIR) + "/samples/";
  auto quote = [](const std::string& s) { return "\"" + s + "\""; };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  // (name, command with {out} placeholder); later steps read earlier artifacts of the same repetition
  const std::vector<std::pair<std::string, std::string>> steps = {
      {"gen.json", "generate --config " + quote(samples + "marciszewski.json")},
      {"pert.json", "generate --kind perturbed --ground-size 24 --count 12 --flips 2 --seed 11"},
      {"adj.json", "adjust --input {dir}/gen.json --order random --seed 5 --report {dir}/adj_report.tsv"},
      {"check.txt", "check --input {dir}/pert.json --budget 4"},
      {"triples.tsv", "triples --input {dir}/gen.json --top 1"},
      {"operator.txt", "operator --input {dir}/gen.json --top 1"},
      {"gap.txt", "gap --input " + quote(samples + "gap.json") + " --budget 2"},
      {"sweep.tsv", "sweep --kind perturbed --ground-size 8,16 --count 4,8 --flips 0,2 --repeats 2 --jobs 4 --seed 3"},
  };
  const std::vector<std::string> artifacts = {"gen.json",    "pert.json",    "adj.json", "adj_report.tsv",
                                              "check.txt",   "triples.tsv",  "operator.txt", "gap.txt",
                                              "sweep.tsv"};
  constexpr int kRepeats = 5;
  std::vector<std::map<std::string, std::string>> runs;
  std::size_t command_failures = 0;
  for (int r = 0; r < kRepeats; ++r) {
    const fs::path rd = dir / std::to_string(r);
    fs::create_directories(rd);
    for (const auto& [name, args] : steps) {
      std::string a = args;
      for (std::size_t p; (p = a.find("{dir}")) != std::string::npos;) a.replace(p, 5, rd.string());
      const std::string cmd = quote(cli) + " " + a + " --output " + quote((rd / name).string());
      command_failures += std::system(cmd.c_str()) != 0;
    }
    std::map<std::string, std::string> got;
    for (const auto& a : artifacts) got[a] = slurp(rd / a);
    runs.push_back(std::move(got));
  }
  std::size_t differing = 0, empty = 0;
  for (const auto& a : artifacts) {
    empty += runs[0][a].empty();
    for (int r = 1; r < kRepeats; ++r) differing += runs[r][a] != runs[0][a];
  }
  fs::remove_all(dir);
  std::ostringstream d;
  d << kRepeats << " repetitions x " << artifacts.size() << " artifacts, " << differing << " differing, "
    << command_failures << " failed commands, " << empty << " empty artifacts";
  return {differing == 0 && command_failures == 0 && empty == 0, d.str()};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Result()>>> criteria = {
      {"checker agrees with brute force", criterion1},
      {"flip pattern characterisation", criterion2},
      {"adjustment yields barely alternating output within cost bound", criterion3},
      {"insertion pointwise agreement and preservation", criterion4},
      {"compatibility of split and merged conditions", criterion5},
      {"gap interpolation exception inclusions", criterion6},
      {"operator norm bounds and witness", criterion7},
      {"extension law and linearity", criterion8},
      {"triple soundness and limit consistency", criterion9},
      {"CLI determinism", criterion10},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Result r{false, ""};
    try {
      r = criteria[i].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    failed += !r.pass;
    std::cout << (r.pass ? "[PASS]" : "[FAIL]") << " criterion " << i + 1 << ": " << criteria[i].first << " -- "
              << r.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
