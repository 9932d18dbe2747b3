#include "dlambda/cli.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "dlambda/checks.hpp"
#include "dlambda/errors.hpp"
#include "dlambda/fock.hpp"
#include "dlambda/gates.hpp"
#include "dlambda/medium.hpp"
#include "dlambda/table.hpp"

namespace dlambda::cli {

namespace {

using std::numbers::pi;
using Row = std::vector<Cell>;

/// Bad flag values detected after parsing; reported with exit code 1.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  int points = 400;
  std::string output = "-";
  std::string format = "csv";
  std::string config;

  double od = 0.0;
  double od_min = 0.0;
  double od_max = 1000.0;
  double delta = 0.0;
  std::string delta_rule;
  double delta_min = 0.0;
  double delta_max = 0.0;
  double u = 1.0;
  double u_beta = 1.0;
  double u_min = 0.5;
  double u_max = 2.0;
  double phi_r = pi / 2.0;
  double phi_c = 0.0;
  double phi_d = 0.0;
  double gamma = 1.0;
  double length = 1.0;
  int quad_points = 16;

  CLI::Option* delta_flag = nullptr;
  CLI::Option* delta_max_flag = nullptr;
};

struct Command {
  std::string name;
  std::string help;
  std::function<void(CLI::App&, Options&)> configure;
  std::function<int(const Options&, std::ostream&, std::ostream&)> execute;
};

void require(bool condition, const std::string& flag, const std::string& message) {
  if (!condition) throw DomainError(flag + ": " + message);
}

int worker_count() {
  if (const char* env = std::getenv(kWorkersEnv)) {
    int n = 0;
    const std::string_view text(env);
    const auto res = std::from_chars(text.data(), text.data() + text.size(), n);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size() || n < 1) {
      throw UsageError(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return n;
  }
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

/// Evaluates rows [0, n) on a worker pool; the row order is preserved.
std::vector<Row> parallel_rows(int n, const std::function<Row(int)>& make_row) {
  std::vector<Row> rows(n);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int i = next++; i < n; i = next++) {
      try {
        rows[i] = make_row(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    const int workers = std::min(worker_count(), std::max(n, 1));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return rows;
}

double grid_point(double lo, double hi, int points, int i) {
  if (i == points - 1) return hi;
  return lo + (hi - lo) * i / (points - 1);
}

MediumParams medium(const Options& o, double od, double delta) {
  return MediumParams{.od = od, .delta = delta, .gamma = o.gamma, .phi_c = o.phi_c, .phi_d = o.phi_d,
                      .length = o.length};
}

double detuning_for(const Options& o, double od) {
  if (o.delta_rule == "od/pi") return hom_detuning(od, o.gamma);
  if (o.delta_rule == "od/2pi") return swap_detuning(od, o.gamma);
  return o.delta;
}

void validate_common(const Options& o) {
  require(std::isfinite(o.gamma) && o.gamma > 0.0, "--gamma", "must be positive");
  require(std::isfinite(o.length) && o.length > 0.0, "--length", "must be positive");
  require(std::isfinite(o.phi_c), "--phi-c", "must be finite");
  require(std::isfinite(o.phi_d), "--phi-d", "must be finite");
  require(std::isfinite(o.delta), "--delta", "must be finite");
}

void validate_od(double od, const char* flag) { require(std::isfinite(od) && od >= 0.0, flag, "must be non-negative"); }

void validate_od_range(const Options& o) {
  validate_od(o.od_min, "--od-min");
  validate_od(o.od_max, "--od-max");
  require(o.od_min <= o.od_max, "--od-max", "must not be below --od-min");
}

void emit(const Options& o, const Table& table, std::ostream& out) {
  auto write = [&](std::ostream& stream) {
    if (o.format == "json") {
      write_json(table, stream);
    } else {
      write_csv(table, stream);
    }
  };
  if (o.output == "-") {
    write(out);
    return;
  }
  std::ofstream file(o.output, std::ios::binary);
  if (!file) throw UsageError("--output: cannot open '" + o.output + "' for writing");
  write(file);
  if (!file) throw UsageError("--output: failed writing '" + o.output + "'");
}

// ---------------------------------------------------------------------------
// Flag registration

void add_common(CLI::App& sub, Options& o) {
  sub.add_option("--points", o.points, "Number of sweep points")->check(CLI::Range(2, 1000000))->capture_default_str();
  sub.add_option("--output", o.output, "Output file, '-' for stdout")->capture_default_str();
  sub.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  sub.add_option("--phi-c", o.phi_c, "Coupling-field phase (rad)")->capture_default_str();
  sub.add_option("--phi-d", o.phi_d, "Driving-field phase (rad)")->capture_default_str();
  sub.add_option("--gamma", o.gamma, "Excited-state decay rate (rate unit)")->capture_default_str();
  sub.add_option("--length", o.length, "Medium length (length unit)")->capture_default_str();
}

void add_od_range(CLI::App& sub, Options& o, double lo, double hi) {
  o.od_min = lo;
  o.od_max = hi;
  sub.add_option("--od-min", o.od_min, "Smallest optical depth")->capture_default_str();
  sub.add_option("--od-max", o.od_max, "Largest optical depth")->capture_default_str();
}

void add_detuning_rule(CLI::App& sub, Options& o, const std::string& default_rule, double default_delta) {
  o.delta_rule = default_rule;
  o.delta = default_delta;
  auto* rule = sub.add_option("--delta-rule", o.delta_rule, "Detuning as a function of od")
                   ->check(CLI::IsMember({"od/pi", "od/2pi"}));
  if (!default_rule.empty()) rule->capture_default_str();
  o.delta_flag = sub.add_option("--delta", o.delta, "Explicit detuning (units of gamma)");
  if (default_rule.empty()) o.delta_flag->capture_default_str();
  o.delta_flag->excludes(rule);
}

// ---------------------------------------------------------------------------
// Commands

int run_fig2(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od(o.od, "--od");
  require(std::isfinite(o.u_beta) && o.u_beta > 0.0, "--u-beta", "must be positive");
  const MediumParams p = medium(o, o.od, o.delta);
  Table t{"fig2", {"phi_r", "T_p", "T_s", "dphi_p", "dphi_s"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double phi_r = grid_point(0.0, 2.0 * pi, o.points, i);
    const CoherentResponse r = coherent_response(p, o.u_beta, phi_r);
    return {phi_r, r.t_p, r.t_s, r.dphi_p, r.dphi_s};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig3a(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od_range(o);
  require(std::isfinite(o.u) && o.u >= 0.0, "--u", "must be non-negative");
  require(std::isfinite(o.phi_r), "--phi-r", "must be finite");
  Table t{"fig3a", {"od", "p_1p0s", "p_0p1s"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double od = grid_point(o.od_min, o.od_max, o.points, i);
    const MediumParams p = medium(o, od, detuning_for(o, od));
    const QubitReport r = qubit_probabilities(p, o.u, o.phi_r + p.loop_phase());
    return {od, r.p_1p0s, r.p_0p1s};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig3b(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  require(std::isfinite(o.od) && o.od > 0.0, "--od", "must be positive");
  require(std::isfinite(o.u_min) && o.u_min > 0.0, "--u-min", "must be positive");
  require(std::isfinite(o.u_max) && o.u_max >= o.u_min, "--u-max", "must not be below --u-min");
  const double nan = std::numeric_limits<double>::quiet_NaN();
  Table t{"fig3b", {"u", "delta_probe", "delta_signal"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double u = grid_point(o.u_min, o.u_max, o.points, i);
    return {u, hadamard_detuning(o.od, u, Branch::probe, o.gamma).value_or(nan),
            hadamard_detuning(o.od, u, Branch::signal, o.gamma).value_or(nan)};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig4a(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od(o.od, "--od");
  const double hi = o.delta_max_flag->count() > 0 ? o.delta_max : 2.0 * hom_detuning(o.od, o.gamma);
  require(std::isfinite(o.delta_min), "--delta-min", "must be finite");
  require(std::isfinite(hi) && hi >= o.delta_min, "--delta-max", "must not be below --delta-min");
  Table t{"fig4a", {"delta", "p_2p0s", "p_0p2s", "p_1p1s"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double delta = grid_point(o.delta_min, hi, o.points, i);
    const HomReport r = hom_probabilities(medium(o, o.od, delta));
    return {delta, r.p_2p0s, r.p_0p2s, r.p_1p1s};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig4b(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od_range(o);
  Table t{"fig4b", {"od", "p_2p0s", "p_0p2s", "sum"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double od = grid_point(o.od_min, o.od_max, o.points, i);
    const HomReport r = hom_probabilities(medium(o, od, detuning_for(o, od)));
    return {od, r.p_2p0s, r.p_0p2s, r.p_2p0s + r.p_0p2s};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig4c(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od_range(o);
  Table t{"fig4c", {"od", "noon_fidelity_sqrt", "noon_fidelity_linear"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double od = grid_point(o.od_min, o.od_max, o.points, i);
    const HomReport r = noon_report(medium(o, od, detuning_for(o, od)));
    return {od, r.noon_fidelity, r.noon_fidelity_linear};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig5a(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od_range(o);
  Table t{"fig5a", {"od", "mean_fidelity", "std_fidelity"}, {}};
  t.rows = parallel_rows(o.points, [&](int i) -> Row {
    const double od = grid_point(o.od_min, o.od_max, o.points, i);
    const SwapReport r = swap_report(medium(o, od, detuning_for(o, od)));
    return {od, r.mean_fidelity, r.std_fidelity};
  });
  emit(o, t, out);
  return kSuccess;
}

int run_fig5b(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od(o.od, "--od");
  const SwapReport r = swap_report(medium(o, o.od, detuning_for(o, o.od)));
  Table t{"fig5b", {"input", "output", "probability"}, {}};
  for (std::size_t i = 0; i < kSwapInputs.size(); ++i) {
    for (std::size_t j = 0; j < kSwapOutputs.size(); ++j) {
      t.rows.push_back({fock_label(kSwapInputs[i]), fock_label(kSwapOutputs[j]), r.truth_table[i][j]});
    }
  }
  emit(o, t, out);
  return kSuccess;
}

int run_check(const Options& o, std::ostream& out, std::ostream&) {
  require(o.quad_points >= 16, "--quad-points", "must be at least 16");
  std::ostringstream report;
  bool all = true;
  for (const CheckResult& r : run_integrity_checks(o.quad_points)) {
    all = all && r.passed;
    report << (r.passed ? "PASS " : "FAIL ") << r.name << " residual=" << format_number(r.residual)
           << " tolerance=" << format_number(r.tolerance);
    if (!r.detail.empty()) report << " (" << r.detail << ")";
    report << '\n';
  }
  report << (all ? "all checks passed" : "some checks FAILED") << '\n';
  if (o.output == "-") {
    out << report.str();
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw UsageError("--output: cannot open '" + o.output + "' for writing");
    file << report.str();
  }
  return all ? kSuccess : kCheckFailure;
}

int run_transfer(const Options& o, std::ostream& out, std::ostream&) {
  validate_common(o);
  validate_od(o.od, "--od");
  const MediumParams p = medium(o, o.od, o.delta);
  const TransferMatrix tm = transfer_matrix(p);
  auto complex_json = [](cplx z) { return nlohmann::ordered_json{{"re", z.real() + 0.0}, {"im", z.imag() + 0.0}}; };
  nlohmann::ordered_json doc;
  doc["params"] = {{"od", p.od},       {"delta", p.delta}, {"gamma", p.gamma},
                   {"phi_c", p.phi_c}, {"phi_d", p.phi_d}, {"length", p.length}};
  doc["A"] = complex_json(tm.a);
  doc["B"] = complex_json(tm.b);
  doc["C"] = complex_json(tm.c);
  doc["D"] = complex_json(tm.d);
  doc["abs2"] = {{"A", std::norm(tm.a)}, {"B", std::norm(tm.b)}, {"C", std::norm(tm.c)}, {"D", std::norm(tm.d)}};
  doc["loss_probe"] = 1.0 - std::norm(tm.a) - std::norm(tm.b);
  doc["loss_signal"] = 1.0 - std::norm(tm.c) - std::norm(tm.d);
  doc["absorption_exponent"] = absorption_exponent(p);
  doc["closed_form_loss"] = closed_form_loss(p);
  const std::string text = doc.dump(2) + "\n";
  if (o.output == "-") {
    out << text;
  } else {
    std::ofstream file(o.output, std::ios::binary);
    if (!file) throw UsageError("--output: cannot open '" + o.output + "' for writing");
    file << text;
  }
  return kSuccess;
}

std::vector<Command> commands() {
  std::vector<Command> list;
  list.push_back({"fig2", "Coherent-field transmittance and phase shift versus closed-loop phase",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    o.od = 50.0;
                    o.delta = 13.0;
                    s.add_option("--od", o.od, "Optical depth")->capture_default_str();
                    s.add_option("--delta", o.delta, "Detuning (units of gamma)")->capture_default_str();
                    s.add_option("--u-beta", o.u_beta, "|beta_s| / |beta_p|")->capture_default_str();
                  },
                  run_fig2});
  list.push_back({"fig3a", "Two-color qubit output probabilities versus optical depth",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    add_od_range(s, o, 0.0, 400.0);
                    add_detuning_rule(s, o, "", 200.0 / pi);
                    s.add_option("--u", o.u, "Qubit amplitude ratio")->capture_default_str();
                    s.add_option("--phi-r", o.phi_r, "Closed-loop relative phase (rad)")->capture_default_str();
                  },
                  run_fig3a});
  list.push_back({"fig3b", "Detunings that route a two-color qubit into one color, versus u",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    o.od = 200.0;
                    s.add_option("--od", o.od, "Optical depth")->capture_default_str();
                    s.add_option("--u-min", o.u_min, "Smallest u")->capture_default_str();
                    s.add_option("--u-max", o.u_max, "Largest u")->capture_default_str();
                  },
                  run_fig3b});
  list.push_back({"fig4a", "Two-photon output probabilities versus detuning",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    o.od = 200.0;
                    s.add_option("--od", o.od, "Optical depth")->capture_default_str();
                    s.add_option("--delta-min", o.delta_min, "Smallest detuning")->capture_default_str();
                    o.delta_max_flag =
                        s.add_option("--delta-max", o.delta_max, "Largest detuning (default 2 od / pi)");
                  },
                  run_fig4a});
  list.push_back({"fig4b", "Bunching probabilities versus optical depth",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    add_od_range(s, o, 0.0, 1000.0);
                    add_detuning_rule(s, o, "od/pi", 0.0);
                  },
                  run_fig4b});
  list.push_back({"fig4c", "NOON-state fidelity versus optical depth",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    add_od_range(s, o, 0.0, 1000.0);
                    add_detuning_rule(s, o, "od/pi", 0.0);
                  },
                  run_fig4c});
  list.push_back({"fig5a", "SWAP gate fidelity versus optical depth",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    add_od_range(s, o, 0.0, 1500.0);
                    add_detuning_rule(s, o, "od/2pi", 0.0);
                  },
                  run_fig5a});
  list.push_back({"fig5b", "SWAP gate truth table",
                  [](CLI::App& s, Options& o) {
                    add_common(s, o);
                    o.od = 1000.0;
                    s.add_option("--od", o.od, "Optical depth")->capture_default_str();
                    add_detuning_rule(s, o, "od/2pi", 0.0);
                  },
                  run_fig5b});
  list.push_back({"check", "Run the integrity checks",
                  [](CLI::App& s, Options& o) {
                    s.add_option("--output", o.output, "Report file, '-' for stdout")->capture_default_str();
                    s.add_option("--quad-points", o.quad_points, "Gauss-Legendre nodes per panel")
                        ->capture_default_str();
                  },
                  run_check});
  list.push_back({"transfer", "Print the transfer matrix and derived quantities as JSON",
                  [](CLI::App& s, Options& o) {
                    s.add_option("--od", o.od, "Optical depth")->capture_default_str();
                    s.add_option("--delta", o.delta, "Detuning (units of gamma)")->capture_default_str();
                    s.add_option("--phi-c", o.phi_c, "Coupling-field phase (rad)")->capture_default_str();
                    s.add_option("--phi-d", o.phi_d, "Driving-field phase (rad)")->capture_default_str();
                    s.add_option("--gamma", o.gamma, "Excited-state decay rate")->capture_default_str();
                    s.add_option("--length", o.length, "Medium length")->capture_default_str();
                    s.add_option("--output", o.output, "Output file, '-' for stdout")->capture_default_str();
                  },
                  run_transfer});
  return list;
}

/// One fully configured parser with per-subcommand option storage.
struct Parser {
  CLI::App app{"Double-Lambda EIT four-wave-mixing photonic gate simulator", "dlambda"};
  std::vector<Command> list = commands();
  std::map<std::string, Options> options;
  std::map<std::string, CLI::App*> subs;

  Parser() {
    app.require_subcommand(1);
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    for (const Command& c : list) {
      CLI::App* sub = app.add_subcommand(c.name, c.help);
      Options& o = options[c.name];
      c.configure(*sub, o);
      sub->add_option("--config", o.config, "JSON file mirroring the flags; flags override it");
      subs[c.name] = sub;
    }
  }

  void parse(const std::vector<std::string>& args) {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  }

  const Command* selected() const {
    for (const Command& c : list) {
      if (subs.at(c.name)->parsed()) return &c;
    }
    return nullptr;
  }
};

std::string config_value(const nlohmann::json& value, const std::string& key) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_boolean()) return value.get<bool>() ? "true" : "false";
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  if (value.is_number()) {
    std::array<char, 64> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), value.get<double>());
    return std::string(buf.data(), res.ptr);
  }
  throw UsageError("--config: key '" + key + "' must hold a string or a number");
}

/// Flags from the config file that the command line did not set.
std::vector<std::string> config_arguments(const Parser& first, const Command& cmd, const std::string& path) {
  std::ifstream file(path);
  if (!file) throw UsageError("--config: cannot open '" + path + "'");
  nlohmann::json doc;
  try {
    file >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw UsageError("--config: invalid JSON in '" + path + "': " + e.what());
  }
  if (!doc.is_object()) throw UsageError("--config: top level must be an object");

  const CLI::App* sub = first.subs.at(cmd.name);
  std::vector<std::string> extra;
  for (const auto& [raw_key, value] : doc.items()) {
    std::string key = raw_key;
    std::replace(key.begin(), key.end(), '_', '-');
    const std::string flag = "--" + key;
    const CLI::Option* opt = sub->get_option_no_throw(flag);
    if (opt == nullptr || flag == "--config") {
      throw UsageError("--config: unknown key '" + raw_key + "' for " + cmd.name);
    }
    if (opt->count() > 0) continue;
    const auto& excl = opt->get_excludes();
    if (std::any_of(excl.begin(), excl.end(), [](const CLI::Option* x) { return x->count() > 0; })) continue;
    extra.push_back(flag);
    extra.push_back(config_value(value, raw_key));
  }
  return extra;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  auto parser = std::make_unique<Parser>();
  try {
    parser->parse(args);
    const Command* cmd = parser->selected();
    if (cmd == nullptr) throw UsageError("no subcommand given");

    const std::string config = parser->options.at(cmd->name).config;
    if (!config.empty()) {
      std::vector<std::string> merged = args;
      const std::vector<std::string> extra = config_arguments(*parser, *cmd, config);
      merged.insert(merged.end(), extra.begin(), extra.end());
      parser = std::make_unique<Parser>();
      parser->parse(merged);
      cmd = parser->selected();
    }

    Options& opts = parser->options.at(cmd->name);
    if (opts.delta_flag != nullptr && opts.delta_flag->count() > 0) opts.delta_rule.clear();
    return cmd->execute(opts, out, err);
  } catch (const CLI::ParseError& e) {
    const int code = parser->app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DomainError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  } catch (const CapacityError& e) {
    err << "domain error: " << e.what() << '\n';
    return kDomainError;
  }
}

}  // namespace dlambda::cli
