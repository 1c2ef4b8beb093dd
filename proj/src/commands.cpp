#include <algorithm>
#include <atomic>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <thread>
#include <tuple>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "sdc/cli.hpp"
#include "sdc/postprocess.hpp"
#include "sdc/rng.hpp"
#include "sdc/verify.hpp"

namespace sdc {

namespace {

struct Options {
  std::string model = "identity";
  double lambda = 0.0, delta = 0.0;
  double lambda_f = 0.0, lambda_b = 0.0;
  double gamma1 = 0.0, gamma2 = 0.0;
  int grid = 11;
  double min = 0.0, max = 1.0;
  std::string out;
  std::size_t n = 10000;
  double p_test = 0.5;
  std::uint64_t seed = 1;
  std::size_t margin = 10;
  std::size_t block_bits = 12;
  unsigned threads = 0;
  bool perturb_kraus = false;
};

class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

std::vector<double> model_params(const Options& o, NoiseModel m) {
  switch (m) {
    case NoiseModel::Identity: return {};
    case NoiseModel::DepolIndep:
    case NoiseModel::DepolForwardOnly:
    case NoiseModel::DepolBackwardOnly: return {o.lambda, o.delta};
    case NoiseModel::DepolCorr: return {o.lambda_f, o.lambda_b};
    case NoiseModel::AmpDampIndep: return {o.gamma1, o.gamma2};
  }
  throw std::logic_error("unhandled noise model");
}

ScenarioDescriptor descriptor_from(const Options& o) {
  const NoiseModel m = parse_model(o.model);
  return {m, model_params(o, m)};
}

void print_descriptor(const ScenarioDescriptor& d, std::ostream& out) {
  out << "model=" << model_name(d.model) << '\n';
  const auto names = parameter_names(d.model);
  for (std::size_t i = 0; i < names.size(); ++i) out << names[i] << '=' << format_number(d.params[i]) << '\n';
}

std::string bool_str(bool b) { return b ? "true" : "false"; }

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const auto checks = run_verification({o.perturb_kraus});
  const VerifyCheck* first_failure = nullptr;
  std::size_t passed = 0;
  for (const auto& c : checks) {
    out << (c.passed ? "PASS " : "FAIL ") << c.name << " value=" << format_number(c.value)
        << " tol=" << format_number(c.tolerance);
    if (!c.detail.empty()) out << " error=" << c.detail;
    out << '\n';
    if (c.passed) ++passed;
    else if (!first_failure) first_failure = &c;
  }
  out << "checks=" << checks.size() << " passed=" << passed << '\n';
  if (first_failure) {
    err << "verification failed: " << first_failure->name << '\n';
    return kExitVerifyFailed;
  }
  return kExitOk;
}

int cmd_rate(const Options& o, std::ostream& out) {
  out << format_rate_point(evaluate_rates(make_scenario(descriptor_from(o))));
  return kExitOk;
}

int cmd_sweep(const Options& o, std::ostream& out) {
  const NoiseModel m = parse_model(o.model);
  if (parameter_names(m).size() != 2) throw UsageError("sweep needs a model with two parameters");
  if (o.grid < 2) throw UsageError("--grid must be at least 2");
  if (!(o.min <= o.max) || o.min < 0.0 || o.max > 1.0) throw UsageError("--min/--max must satisfy 0 <= min <= max <= 1");
  if (o.out.empty()) throw UsageError("sweep needs --out");

  const auto steps = static_cast<std::size_t>(o.grid);
  std::vector<double> axis(steps);
  for (std::size_t t = 0; t < steps; ++t)
    axis[t] = t + 1 == steps ? o.max : o.min + (o.max - o.min) * static_cast<double>(t) / static_cast<double>(steps - 1);

  std::ofstream file(o.out);
  if (!file) throw UsageError("cannot open '" + o.out + "' for writing");

  std::vector<RatePoint> points(steps * steps);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t idx; (idx = next.fetch_add(1)) < points.size();)
      points[idx] = evaluate_rates(make_scenario({m, {axis[idx / steps], axis[idx % steps]}}));
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(o.threads ? o.threads : std::thread::hardware_concurrency(),
                                                           static_cast<unsigned>(points.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  file << "param1,param2,r1_lower,r2_lower,h_test_b1,h_test_b2,h_key_b1,h_key_b2\n";
  for (const auto& p : points) {
    const auto& t = p.terms;
    file << fmt::format("{},{},{},{},{},{},{},{}\n", format_number(p.scenario.params[0]),
                        format_number(p.scenario.params[1]), format_number(p.r1_lower), format_number(p.r2_lower),
                        format_number(t.h_test_b1), format_number(t.h_test_b2), format_number(t.h_key_b1),
                        format_number(t.h_key_b2));
  }
  file.close();
  if (!file) throw UsageError("failed writing '" + o.out + "'");
  out << "rows=" << points.size() << " out=" << o.out << '\n';
  return kExitOk;
}

std::string hex(const BitString& bits) {
  std::string s;
  for (std::size_t t = 0; t < bits.size(); t += 4) {
    unsigned nibble = 0;
    for (std::size_t b = 0; b < 4; ++b) nibble = (nibble << 1) | (t + b < bits.size() ? bits[t + b] : 0u);
    s.push_back("0123456789abcdef"[nibble]);
  }
  return s;
}

int cmd_finite_key(const Options& o, std::ostream& out) {
  if (o.n == 0) throw UsageError("--n must be positive");
  if (!(o.p_test > 0.0 && o.p_test < 1.0)) throw UsageError("--p-test must lie in (0,1)");
  const NoiseScenario sc = make_scenario(descriptor_from(o));

  FiniteKeyOptions fk;
  fk.n = o.n;
  fk.p_test = o.p_test;
  fk.seed = o.seed;
  fk.reconcile.seed = mix64(o.seed);
  fk.reconcile.margin_bits = o.margin;
  fk.reconcile.block_bits = o.block_bits;
  if (o.block_bits == 0 || o.block_bits > 20) throw UsageError("--block-bits must lie in [1, 20]");

  if (!o.out.empty()) {
    std::ofstream file(o.out);
    if (!file) throw UsageError("cannot open '" + o.out + "' for writing");
    export_session(sample_runs(sc, fk.n, fk.p_test, fk.seed), file);
  }

  const FiniteKeyReport r = run_finite_key(sc, fk);
  const auto& e = r.estimate;
  print_descriptor(sc.descriptor, out);
  out << "n=" << o.n << "\np_test=" << format_number(o.p_test) << "\nseed=" << o.seed << '\n';
  out << "runs_key=" << e.counts.key << "\nruns_test_b1=" << e.counts.test_b1 << "\nruns_test_b2=" << e.counts.test_b2
      << "\nruns_test_both=" << e.counts.test_both << '\n';
  out << "r1_est=" << format_number(e.r1_est) << "\nr2_est=" << format_number(e.r2_est) << '\n';
  out << "h_test_b1_est=" << format_number(e.terms.h_test_b1) << "\nh_test_b2_est=" << format_number(e.terms.h_test_b2)
      << "\nh_key_b1_est=" << format_number(e.terms.h_key_b1) << "\nh_key_b2_est=" << format_number(e.terms.h_key_b2)
      << '\n';
  out << "abort=" << bool_str(e.abort) << '\n';
  if (!r.reconciled) return kExitOk;

  const auto& rec = r.reconciliation;
  for (const auto& [tag, pair, fa, fb] :
       {std::tuple{"b1", &rec.b1, &r.final_alice_b1, &r.final_bob1}, std::tuple{"b2", &rec.b2, &r.final_alice_b2, &r.final_bob2}}) {
    out << "raw_key_len_" << tag << '=' << pair->alice.size() << '\n';
    out << "blocks_" << tag << '=' << pair->blocks << '\n';
    out << "leak_bits_" << tag << '=' << pair->leak_bits << '\n';
    out << "failed_blocks_" << tag << '=' << pair->failed_blocks << '\n';
    out << "final_key_len_" << tag << '=' << fa->size() << '\n';
    out << "keys_match_" << tag << '=' << bool_str(*fa == *fb) << '\n';
    out << "final_key_" << tag << '=' << hex(*fa) << '\n';
  }
  return kExitOk;
}

}  // namespace

std::string format_number(double v) { return fmt::format("{:.12g}", v); }

std::string format_rate_point(const RatePoint& p) {
  std::string s;
  s += "model=" + std::string(model_name(p.scenario.model)) + '\n';
  const auto names = parameter_names(p.scenario.model);
  for (std::size_t i = 0; i < names.size(); ++i)
    s += std::string(names[i]) + '=' + format_number(p.scenario.params[i]) + '\n';
  s += "r1_lower=" + format_number(p.r1_lower) + '\n';
  s += "r2_lower=" + format_number(p.r2_lower) + '\n';
  s += "h_test_b1=" + format_number(p.terms.h_test_b1) + '\n';
  s += "h_test_b2=" + format_number(p.terms.h_test_b2) + '\n';
  s += "h_key_b1=" + format_number(p.terms.h_key_b1) + '\n';
  s += "h_key_b2=" + format_number(p.terms.h_key_b2) + '\n';
  s += "abort_p1=" + bool_str(p.abort_p1) + '\n';
  s += "abort_p2=" + bool_str(p.abort_p2) + '\n';
  return s;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulator and key-rate calculator for 2-1 secure dense coding over noisy channels", "sdc"};
  app.fallthrough();
  app.require_subcommand(1);
  app.config_formatter(std::make_shared<CLI::ConfigINI>());
  app.set_config("--config", "", "INI file of key=value lines mirroring the flags; flags override it");

  Options o;
  std::string models;
  for (NoiseModel m : kAllNoiseModels) models += (models.empty() ? "" : ", ") + std::string(model_name(m));
  app.add_option("--model", o.model, "Noise model: " + models)->capture_default_str();
  app.add_option("--lambda", o.lambda, "Depolarizing parameter on Bob1's wire")->check(CLI::Range(0.0, 1.0));
  app.add_option("--delta", o.delta, "Depolarizing parameter on Bob2's wire")->check(CLI::Range(0.0, 1.0));
  app.add_option("--lambda-f", o.lambda_f, "Correlated depolarizing, forward")->check(CLI::Range(0.0, 1.0));
  app.add_option("--lambda-b", o.lambda_b, "Correlated depolarizing, backward")->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma1", o.gamma1, "Amplitude damping on Bob1's wire")->check(CLI::Range(0.0, 1.0));
  app.add_option("--gamma2", o.gamma2, "Amplitude damping on Bob2's wire")->check(CLI::Range(0.0, 1.0));
  app.add_option("--grid", o.grid, "Sweep points per axis")->capture_default_str();
  app.add_option("--min", o.min, "Sweep axis minimum")->capture_default_str();
  app.add_option("--max", o.max, "Sweep axis maximum")->capture_default_str();
  app.add_option("--out", o.out, "Sweep CSV path, or session export path for finite-key");
  app.add_option("--n", o.n, "Number of runs")->capture_default_str();
  app.add_option("--p-test", o.p_test, "Per-Bob test-run probability")->capture_default_str();
  app.add_option("--seed", o.seed, "RNG seed")->capture_default_str();
  app.add_option("--margin", o.margin, "Extra hash bits per reconciliation block")->capture_default_str();
  app.add_option("--block-bits", o.block_bits, "Reconciliation block length in bits (at most 20)")->capture_default_str();
  app.add_option("--threads", o.threads, "Sweep worker threads (0 = hardware concurrency)");
  app.add_flag("--perturb-kraus", o.perturb_kraus)->group("");

  auto* verify = app.add_subcommand("verify", "Run the invariant suite");
  auto* rate = app.add_subcommand("rate", "Key-rate lower bounds at one point");
  auto* sweep = app.add_subcommand("sweep", "Key-rate grid over the model's two parameters, as CSV");
  auto* finite = app.add_subcommand("finite-key", "Sampled session with reconciliation and privacy amplification");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(o, out, err);
    if (rate->parsed()) return cmd_rate(o, out);
    if (sweep->parsed()) return cmd_sweep(o, out);
    if (finite->parsed()) return cmd_finite_key(o, out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace sdc
