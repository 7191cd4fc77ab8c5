#pragma once

// Command dispatch for the `barely` tool. Kept in a header so tests can run
// commands in-process against string streams.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <future>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "barely/adjuster.hpp"
#include "barely/chain_core.hpp"
#include "barely/errors.hpp"
#include "barely/generators.hpp"
#include "barely/io.hpp"
#include "barely/line_operator.hpp"

namespace barely::cli {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> kCommands = {"generate", "check",   "adjust",  "compat",
                                                     "gap",      "triples", "operator", "sweep"};
  return kCommands;
}

struct RunConfig {
  std::string command;
  std::vector<std::string> inputs;
  std::optional<std::string> output;
  std::uint64_t seed = 0;
  /// Command-specific options keyed by flag name without dashes ("budget", "order", ...).
  std::map<std::string, std::string> parameters;
};

/// Failure to open or write a file.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum ExitCode : int {
  kOk = 0,
  kInternal = 1,
  kInputError = 2,
  kInconsistency = 3,
  kNotFound = 4,
  kIoError = 5,
};

namespace detail {

inline const std::map<std::string, std::set<std::string>>& allowed_parameters() {
  static const std::map<std::string, std::set<std::string>> kAllowed = {
      {"generate", {"config", "kind", "depth", "ground-size", "count", "flips"}},
      {"check", {"budget"}},
      {"adjust", {"order", "report"}},
      {"compat", {}},
      {"gap", {"budget"}},
      {"triples", {"model", "top"}},
      {"operator", {"model", "top", "function", "schedule"}},
      {"sweep", {"kind", "depth", "ground-size", "count", "flips", "repeats", "budget", "order", "jobs"}},
  };
  return kAllowed;
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << content;
  if (!out) throw IoError("write to '" + path + "' failed");
}

inline std::size_t to_size(const std::string& text, const std::string& name) {
  std::size_t pos = 0;
  unsigned long long v = 0;
  try {
    if (!text.empty() && text[0] == '-') throw std::invalid_argument("negative");
    v = std::stoull(text, &pos);
  } catch (const std::exception&) {
    throw InputError("--" + name + " expects a non-negative integer, got '" + text + "'");
  }
  if (pos != text.size()) throw InputError("--" + name + " expects a non-negative integer, got '" + text + "'");
  return static_cast<std::size_t>(v);
}

inline std::vector<std::size_t> to_size_list(const std::string& text, const std::string& name) {
  std::vector<std::size_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_size(item, name));
  if (out.empty()) throw InputError("--" + name + " expects a comma-separated list");
  return out;
}

class Context {
 public:
  Context(const RunConfig& config, std::ostream& out) : config_(config), out_(out) {}

  const RunConfig& config() const { return config_; }

  bool has(const std::string& key) const { return config_.parameters.count(key) != 0; }
  std::string get(const std::string& key, const std::string& fallback) const {
    auto it = config_.parameters.find(key);
    return it == config_.parameters.end() ? fallback : it->second;
  }
  std::size_t size(const std::string& key, std::size_t fallback) const {
    return has(key) ? to_size(get(key, ""), key) : fallback;
  }

  const std::string& input(std::size_t i = 0) const {
    if (config_.inputs.size() <= i) {
      throw InputError(config_.command + " needs " + std::to_string(i + 1) + " --input file(s)");
    }
    return config_.inputs[i];
  }

  io::ParsedFamily family_input(std::size_t i = 0) const { return io::parse_family(read_file(input(i))); }

  void emit(const std::string& artifact) const {
    if (config_.output) {
      write_file(*config_.output, artifact);
    } else {
      out_ << artifact;
    }
  }

  std::ostream& out() const { return out_; }

 private:
  const RunConfig& config_;
  std::ostream& out_;
};

inline std::string points_text(const std::array<IndexValue, 4>& p) {
  return p[0].to_string() + "," + p[1].to_string() + "," + p[2].to_string() + "," + p[3].to_string();
}

inline std::string alternation_text(const AlternationVerdict& v) {
  if (v) return "ok";
  return "witness n=" + std::to_string(v.witness().n) + " x=" + points_text(v.witness().points);
}

inline LineModel model_for(const Context& ctx, const ChainFamily& family) {
  if (ctx.has("model")) return io::parse_model(read_file(ctx.get("model", "")));
  if (ctx.has("top")) return LineModel::with_top(family, IndexValue::parse(ctx.get("top", "")));
  if (family.empty()) throw InputError("cannot build a line model over an empty family; pass --model");
  return LineModel::over(family);
}

// ---------------------------------------------------------------------------

inline void run_generate(const Context& ctx) {
  io::GeneratorConfig gen;
  if (ctx.has("config")) {
    gen = io::parse_generator_config(read_file(ctx.get("config", "")));
  } else {
    gen.kind = ctx.get("kind", "marciszewski");
    gen.seed = ctx.config().seed;
    if (ctx.has("depth")) gen.depth = static_cast<unsigned>(ctx.size("depth", 0));
    if (ctx.has("ground-size")) gen.ground_size = ctx.size("ground-size", 0);
    gen.parameters["count"] = ctx.size("count", 8);
    if (gen.kind == "perturbed") gen.parameters["flips_per_set"] = ctx.size("flips", 0);
  }
  ctx.emit(io::write_family(io::generate(gen)));
}

inline void run_check(const Context& ctx) {
  const ChainFamily family = ctx.family_input().family;
  const std::size_t budget = ctx.size("budget", 0);
  std::ostringstream os;
  auto chain = is_chain(family);
  os << "chain: ";
  if (chain) {
    os << "ok\n";
  } else {
    os << "witness n=" << chain.witness().n << " x=" << chain.witness().lower << " y=" << chain.witness().upper
       << '\n';
  }
  os << "barely_alternating: " << alternation_text(is_barely_alternating(family)) << '\n';
  const DefectReport report = validate_almost_chain(family, budget);
  os << "max_defect: " << report.max_defect_size << '\n';
  os << "budget: " << budget << ' ' << (report.within_budget() ? "ok" : "exceeded") << '\n';
  os << "flagged_pairs: " << report.flagged_count() << '\n';
  for (const auto& p : report.flagged()) {
    os << "flagged: " << p.lower << ' ' << p.upper << ' ' << p.defect.to_string() << '\n';
  }
  os << "defect_set: " << chain_defect_set(family).to_string() << '\n';
  ctx.emit(os.str());
}

inline void run_adjust(const Context& ctx) {
  const io::ParsedFamily parsed = ctx.family_input();
  const std::string order_kind = ctx.get("order", "sorted");
  std::vector<IndexValue> order;
  if (order_kind == "sorted") {
    order = parsed.family.indices();
  } else if (order_kind == "given") {
    order = parsed.listed_order;
  } else if (order_kind == "random") {
    order = shuffled_order(parsed.family, ctx.config().seed);
  } else {
    throw InputError("--order must be sorted, given or random");
  }
  auto [adjusted, report] = adjust_family(parsed.family, order);
  ctx.emit(io::write_family(adjusted));
  if (ctx.has("report")) write_file(ctx.get("report", ""), io::write_adjustment_report(report));
}

inline void run_compat(const Context& ctx) {
  if (ctx.config().inputs.size() != 2) throw InputError("compat needs exactly two --input files");
  Condition first(ctx.family_input(0).family);
  Condition second(ctx.family_input(1).family);
  auto verdict = conditions_compatible(first, second);
  ctx.emit(verdict ? std::string("compatible\n") : "incompatible: " + alternation_text(verdict) + "\n");
}

inline void run_gap(const Context& ctx) {
  const io::GapInput g = io::parse_gap(read_file(ctx.input()));
  ctx.emit(io::write_gap_report(interpolate_gap(g.lower, g.upper, ctx.size("budget", 0))));
}

inline void run_triples(const Context& ctx) {
  const ChainFamily family = ctx.family_input().family;
  ctx.emit(io::write_triple_table(compute_triples(family, model_for(ctx, family))));
}

inline void run_operator(const Context& ctx) {
  const ChainFamily family = ctx.family_input().family;
  const LineModel model = model_for(ctx, family);
  const TripleTable triples = compute_triples(family, model);
  std::ostringstream os;
  os << "norm: " << boost::multiprecision::numerator(operator_norm(triples)) << '\n';
  auto late = no_fourth_flip_check(family, triples);
  os << "no_fourth_flip: "
     << (late ? std::string("ok")
              : "witness n=" + std::to_string(late.witness().n) + " y=" + late.witness().y.to_string())
     << '\n';
  std::size_t strict_rows = 0;
  for (const auto& t : triples.rows) strict_rows += t.pattern() == TriplePattern::strict;
  os << "strict_rows: " << strict_rows << '\n';

  std::optional<FunctionOnLine> f;
  if (ctx.has("function")) {
    f = io::parse_function(read_file(ctx.get("function", "")), model);
  } else if (auto w = norm_witness(triples, model)) {
    os << "witness_n: " << w->n << '\n';
    f = w->f;
  } else {
    f = FunctionOnLine::constant(model, 1);
  }
  const ExtendedFunction ef = apply_operator(*f, triples);
  os << "sup_f: " << format_rational(f->sup_norm()) << '\n';
  os << "sup_Ef: " << format_rational(ef.sup_norm()) << '\n';
  os << "n\tvalue\n";
  for (std::size_t n = 0; n < ef.on_ground.size(); ++n) os << n << '\t' << format_rational(ef.on_ground[n]) << '\n';
  if (ctx.has("schedule")) {
    const auto schedule = io::parse_schedule(read_file(ctx.get("schedule", "")));
    os << io::write_harness_report(continuity_harness(family, model, schedule, *f));
  }
  ctx.emit(os.str());
}

// ---------------------------------------------------------------------------
// sweep

struct SweepCell {
  std::string kind;
  std::size_t size_param;  // depth or ground size
  std::size_t count;
  std::size_t flips;
  std::size_t repeat;
  std::uint64_t seed;
};

inline std::string sweep_row(const SweepCell& cell, std::size_t budget, const std::string& order_kind) {
  io::GeneratorConfig gen;
  gen.kind = cell.kind;
  gen.seed = cell.seed;
  gen.parameters["count"] = cell.count;
  if (cell.kind == "marciszewski") {
    gen.depth = static_cast<unsigned>(cell.size_param);
  } else {
    gen.ground_size = cell.size_param;
    gen.parameters["flips_per_set"] = cell.flips;
  }
  const ChainFamily input = io::generate(gen);
  const DefectReport defects = validate_almost_chain(input, budget);
  std::vector<IndexValue> order =
      order_kind == "random" ? shuffled_order(input, cell.seed) : input.indices();
  auto [adjusted, report] = adjust_family(input, order);
  const TripleTable triples = compute_triples(adjusted, LineModel::over(adjusted));
  std::size_t strict_rows = 0;
  for (const auto& t : triples.rows) strict_rows += t.pattern() == TriplePattern::strict;

  std::ostringstream os;
  os << cell.kind << '\t' << cell.size_param << '\t' << cell.count << '\t' << cell.flips << '\t' << cell.repeat
     << '\t' << cell.seed << '\t' << input.ground_size() << '\t' << defects.max_defect_size << '\t'
     << (defects.within_budget() ? "ok" : "exceeded") << '\t' << chain_defect_set(input).count() << '\t'
     << (is_barely_alternating(input) ? "ok" : "no") << '\t' << report.total_cost << '\t' << report.max_cost
     << '\t' << (is_barely_alternating(adjusted) ? "ok" : "no") << '\t'
     << (no_fourth_flip_check(adjusted, triples) ? "ok" : "no") << '\t' << strict_rows << '\t'
     << (operator_norm(triples) == 3 ? 3 : 1) << '\n';
  return os.str();
}

inline void run_sweep(const Context& ctx) {
  const std::string kind = ctx.get("kind", "marciszewski");
  if (kind != "marciszewski" && kind != "perturbed") throw InputError("--kind must be marciszewski or perturbed");
  const bool dyadic = kind == "marciszewski";
  const auto sizes = to_size_list(ctx.get(dyadic ? "depth" : "ground-size", dyadic ? "4" : "16"),
                                  dyadic ? "depth" : "ground-size");
  const auto counts = to_size_list(ctx.get("count", "8"), "count");
  const auto flips = dyadic ? std::vector<std::size_t>{0} : to_size_list(ctx.get("flips", "1"), "flips");
  const std::size_t repeats = ctx.size("repeats", 3);
  const std::size_t budget = ctx.size("budget", dyadic ? sizes.front() : 0);
  const std::size_t jobs = std::max<std::size_t>(1, ctx.size("jobs", 1));
  const std::string order_kind = ctx.get("order", "sorted");
  if (order_kind != "sorted" && order_kind != "random") throw InputError("sweep --order must be sorted or random");

  std::vector<SweepCell> cells;
  for (std::size_t s : sizes) {
    for (std::size_t c : counts) {
      for (std::size_t f : flips) {
        for (std::size_t r = 0; r < repeats; ++r) {
          cells.push_back({kind, s, c, f, r, ctx.config().seed * 1000003u + cells.size()});
        }
      }
    }
  }

  // Instances are independent; results are merged in cell order.
  std::vector<std::string> rows(cells.size());
  for (std::size_t start = 0; start < cells.size(); start += jobs) {
    std::vector<std::future<std::string>> batch;
    for (std::size_t i = start; i < std::min(cells.size(), start + jobs); ++i) {
      batch.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred,
                                 [&, i] { return sweep_row(cells[i], budget, order_kind); }));
    }
    for (std::size_t i = 0; i < batch.size(); ++i) rows[start + i] = batch[i].get();
  }

  std::ostringstream os;
  os << "kind\tsize\tcount\tflips\trepeat\tseed\tground\tmax_defect\tbudget\tdefect_set\tba_input\ttotal_cost"
        "\tmax_cost\tba_output\tno_fourth_flip\tstrict_rows\tnorm\n";
  for (const auto& r : rows) os << r;
  ctx.emit(os.str());
}

}  // namespace detail

/// Runs one command. Artifacts go to config.output when set, else to `out`;
/// diagnostics go to `err` as "error[<class>]: <message>".
inline int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  try {
    const auto& allowed = detail::allowed_parameters();
    auto it = allowed.find(config.command);
    if (it == allowed.end()) throw InputError("unknown command '" + config.command + "'");
    for (const auto& [key, value] : config.parameters) {
      if (!it->second.count(key)) throw InputError("unknown option --" + key + " for " + config.command);
    }
    detail::Context ctx(config, out);
    const std::string& c = config.command;
    if (c == "generate") detail::run_generate(ctx);
    else if (c == "check") detail::run_check(ctx);
    else if (c == "adjust") detail::run_adjust(ctx);
    else if (c == "compat") detail::run_compat(ctx);
    else if (c == "gap") detail::run_gap(ctx);
    else if (c == "triples") detail::run_triples(ctx);
    else if (c == "operator") detail::run_operator(ctx);
    else detail::run_sweep(ctx);
    return kOk;
  } catch (const IoError& e) {
    err << "error[io]: " << e.what() << '\n';
    return kIoError;
  } catch (const InputError& e) {
    err << "error[input]: " << e.what() << '\n';
    return kInputError;
  } catch (const InconsistencyError& e) {
    err << "error[inconsistency]: " << e.what() << '\n';
    return kInconsistency;
  } catch (const NotFoundError& e) {
    err << "error[not-found]: " << e.what() << '\n';
    return kNotFound;
  } catch (const std::exception& e) {
    err << "error[internal]: " << e.what() << '\n';
    return kInternal;
  }
}

}  // namespace barely::cli
