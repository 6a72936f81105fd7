// cohercause: partial-coherence causality tests, coherence maps and the
// Barnett-system experiments from the command line.
//
// Exit status: 0 success, 2 usage error, 1 runtime error.

#include <cstdio>
#include <iostream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cohercause/error.hpp"
#include "cohercause/experiments.hpp"
#include "cohercause/io.hpp"
#include "cohercause/parallel.hpp"

namespace cc = cohercause;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

struct Common {
  std::uint64_t seed = 42;
  std::size_t jobs = 1;
  std::string output;
  std::string summary;
};

struct Barnett {
  double alpha = 0.05;
  std::size_t T = 10;
  std::size_t M = 1000;
  double F = 0.02;
  double a = 0.9;
  double b = 0.8;
  std::size_t order = 0;
  std::size_t replications = 10'000;
  bool fast = false;
  std::string window_mode = "consecutive";
  std::size_t n_mc = cc::kDefaultNullSamples;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--seed", c.seed, "Master seed; every random draw derives from it")
      ->capture_default_str();
  cmd->add_option("--jobs", c.jobs, "Worker threads (env COHERCAUSE_JOBS)")
      ->envname("COHERCAUSE_JOBS")
      ->capture_default_str();
  cmd->add_option("-o,--output", c.output, "Output file (default: stdout)");
}

void add_barnett(CLI::App* cmd, Barnett& b, bool with_alpha = true) {
  if (with_alpha) {
    cmd->add_option("--alpha", b.alpha, "Significance level")->capture_default_str()
        ->check(CLI::Range(0.0, 1.0));
  }
  cmd->add_option("-T,--lags", b.T, "Lag depth: x and z hold T past samples")
      ->capture_default_str()->check(CLI::PositiveNumber);
  cmd->add_option("-M,--M", b.M, "Window length (consecutive) or realizations (independent)")
      ->capture_default_str();
  cmd->add_option("-F,--F", b.F, "Transfer entropy from x to y, nats")->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  cmd->add_option("--a", b.a, "AR coefficient of the y state")->capture_default_str();
  cmd->add_option("--b", b.b, "AR coefficient of the x state")->capture_default_str();
  cmd->add_option("--replications", b.replications, "Monte Carlo replications")
      ->capture_default_str();
  cmd->add_flag("--fast", b.fast, "Use 2000 replications unless --replications is given");
  cmd->add_option("--window-mode", b.window_mode, "consecutive or independent")
      ->capture_default_str()->check(CLI::IsMember({"consecutive", "independent"}));
  cmd->add_option("--n-mc", b.n_mc, "Null-distribution Monte Carlo samples")
      ->capture_default_str();
}

cc::ReplicationConfig make_config(const CLI::App* cmd, const Barnett& b, const Common& c) {
  cc::ReplicationConfig cfg;
  cfg.model.a = b.a;
  cfg.model.b = b.b;
  cfg.model.F = b.F;
  cfg.model.ma_order = b.order;
  cfg.replications = b.replications;
  if (b.fast && cmd->count("--replications") == 0) cfg.replications = cc::kFastReplications;
  cfg.M = b.M;
  cfg.T = b.T;
  cfg.window_mode = cc::parse_window_mode(b.window_mode);
  cfg.seed = c.seed;
  cfg.jobs = c.jobs;
  return cfg;
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    cc::write_file_atomic(path, text);
  }
}

void emit_summary(const Common& c, const cc::Json& j) {
  if (!c.summary.empty()) cc::write_file_atomic(c.summary, j.dump(2) + "\n");
}

// "0..10" or "0,2,5".
std::vector<std::size_t> parse_orders(const std::string& text) {
  std::vector<std::size_t> out;
  auto number = [&](const std::string& s) {
    std::size_t pos = 0;
    unsigned long v = 0;
    try {
      v = std::stoul(s, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0 || pos != s.size()) throw cc::InvalidArgument("bad MA order '" + s + "'");
    return static_cast<std::size_t>(v);
  };
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const auto lo = number(text.substr(0, dots));
    const auto hi = number(text.substr(dots + 2));
    if (hi < lo) throw cc::InvalidArgument("empty order range '" + text + "'");
    for (auto r = lo; r <= hi; ++r) out.push_back(r);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    out.push_back(number(text.substr(start, comma == std::string::npos ? comma : comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

cc::IndexRange parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::exception&) {
    throw cc::InvalidArgument("bad index range '" + text + "' (expected a..b)");
  }
}

cc::MACase parse_case(const std::string& name) {
  if (name == "I") return cc::MACase::I;
  if (name == "II") return cc::MACase::II;
  if (name == "III") return cc::MACase::III;
  throw cc::InvalidArgument("unknown MA case '" + name + "' (expected I, II or III)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial-coherence tests of causal influence between time series"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "cohercause 0.1.0");

  Common common;
  common.jobs = cc::default_jobs();
  Barnett barnett;

  // test
  auto* test = app.add_subcommand("test", "Test y_t against the past of x given the past of y");
  std::string input;
  std::string method = "wilks-mc";
  bool no_center = false;
  test->add_option("-i,--input", input, "CSV with header t,x,y")->required()->check(CLI::ExistingFile);
  test->add_option("--alpha", barnett.alpha, "Significance level")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  test->add_option("-T,--lags", barnett.T, "Lag depth T")->capture_default_str()
      ->check(CLI::PositiveNumber);
  test->add_option("--method", method, "wilks-mc or bartlett")->capture_default_str()
      ->check(CLI::IsMember({"wilks-mc", "bartlett"}));
  test->add_option("--n-mc", barnett.n_mc, "Null Monte Carlo samples")->capture_default_str();
  test->add_flag("--no-center", no_center, "Assume zero-mean data; keep all M degrees of freedom");
  add_common(test, common);

  // map
  auto* map = app.add_subcommand("map", "Pairwise partial coherence rho2(s, t) as CSV s,t,rho2");
  std::string map_case = "I";
  std::string s_range = "-10..10";
  std::string t_range = "0";
  std::string conditioning = "past-of-x";
  std::size_t depth = cc::kDefaultConditioningDepth;
  map->add_option("--case", map_case, "Analytic MA model: I, II or III")->capture_default_str()
      ->check(CLI::IsMember({"I", "II", "III"}));
  map->add_option("-i,--input", input, "Estimate from CSV data instead of a model")
      ->check(CLI::ExistingFile);
  map->add_option("--s", s_range, "Source indices a..b")->capture_default_str();
  map->add_option("--t", t_range, "Target indices a..b")->capture_default_str();
  map->add_option("--conditioning", conditioning, "past-of-x or past-of-y")->capture_default_str()
      ->check(CLI::IsMember({"past-of-x", "past-of-y"}));
  map->add_option("--depth", depth, "Conditioning depth")->capture_default_str();
  add_common(map, common);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Generate a pair of sequences as CSV t,x,y");
  std::string model = "barnett";
  std::size_t length = 1000;
  std::string init = "burn-in";
  sim->add_option("--model", model, "barnett or ma")->capture_default_str()
      ->check(CLI::IsMember({"barnett", "ma"}));
  sim->add_option("--case", map_case, "MA case: I, II or III")->capture_default_str()
      ->check(CLI::IsMember({"I", "II", "III"}));
  sim->add_option("-n,--length", length, "Samples to emit")->capture_default_str();
  sim->add_option("-F,--F", barnett.F, "Transfer entropy, nats (barnett)")->capture_default_str();
  sim->add_option("--order", barnett.order, "MA order r (barnett)")->capture_default_str();
  sim->add_option("--init", init, "burn-in or stationary (barnett)")->capture_default_str()
      ->check(CLI::IsMember({"burn-in", "stationary"}));
  add_common(sim, common);

  // nulldist
  auto* null = app.add_subcommand("nulldist", "Wilks Lambda null law of rho2_hat");
  std::size_t p = 10, q = 1, r = 10, M = 1000;
  std::optional<double> stat;
  std::string samples_out;
  null->add_option("--p", p, "Rows of x")->capture_default_str();
  null->add_option("--q", q, "Rows of y")->capture_default_str();
  null->add_option("--r", r, "Rows of z")->capture_default_str();
  null->add_option("-M,--M", M, "Effective sample count")->capture_default_str();
  null->add_option("--alpha", barnett.alpha, "Significance level")->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  null->add_option("--n-mc", barnett.n_mc, "Monte Carlo samples")->capture_default_str();
  null->add_option("--stat", stat, "Also report the p-value of this rho2_hat");
  null->add_option("--samples", samples_out, "Write the sorted null samples to this CSV");
  add_common(null, common);

  // power
  auto* power = app.add_subcommand("power", "Power against MA order (CSV)");
  std::string orders = "0..10";
  power->add_option("--orders", orders, "MA orders, a..b or a,b,c")->capture_default_str();
  add_barnett(power, barnett);
  add_common(power, common);
  power->add_option("--summary", common.summary, "JSON summary of the run");

  // roc
  auto* roc = app.add_subcommand("roc", "Power against size from empirical null thresholds (CSV)");
  std::vector<double> grid = cc::kDefaultSizeGrid;
  roc->add_option("--grid", grid, "Nominal sizes")->capture_default_str()->delimiter(',');
  roc->add_option("--order", barnett.order, "MA order r")->capture_default_str();
  add_barnett(roc, barnett, false);
  add_common(roc, common);
  roc->add_option("--summary", common.summary, "JSON summary of the run");

  // calibrate
  auto* cal = app.add_subcommand("calibrate", "Achieved size under H0 (F = 0), JSON");
  add_barnett(cal, barnett);
  cal->get_option("--F")->description("Transfer entropy, nats; the null model needs 0")->default_str("0");
  cal->add_option("--order", barnett.order, "MA order r")->capture_default_str();
  add_common(cal, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (common.jobs == 0) throw cc::InvalidArgument("--jobs must be positive");

    if (test->parsed()) {
      const auto data = cc::read_sequence_csv(std::filesystem::path(input));
      const auto panel = cc::lag_embed(data.x, data.y, cc::LagSpec::barnett(barnett.T));
      cc::TestOptions opt;
      opt.alpha = barnett.alpha;
      opt.method = cc::parse_test_method(method);
      opt.n_mc = barnett.n_mc;
      opt.seed = common.seed;
      opt.centering = no_center ? cc::Centering::none : cc::Centering::subtract_mean;
      opt.jobs = common.jobs;
      const auto outcome = cc::test_causal_influence(panel, opt);
      emit(common.output, cc::to_json(outcome).dump(2) + "\n");
      std::cerr << outcome.verdict() << "\n";
    } else if (map->parsed()) {
      const auto cond = cc::parse_conditioning(conditioning);
      const auto sr = parse_range(s_range);
      const auto tr = parse_range(t_range);
      cc::CoherenceMap result;
      if (!input.empty()) {
        const auto data = cc::read_sequence_csv(std::filesystem::path(input));
        result = cc::coherence_map(data, sr, tr, cond, depth, cc::Centering::subtract_mean, common.jobs);
      } else {
        const auto spec = cc::MAFilterSpec::demonstration(parse_case(map_case));
        int span = 0;
        for (int s : {sr.first, sr.last})
          for (int t : {tr.first, tr.last}) span = std::max(span, std::abs(t - s));
        const auto seqs = cc::analytic_covariances(spec, static_cast<std::size_t>(span) + depth + 1);
        result = cc::coherence_map(seqs, sr, tr, cond, depth, map_case, common.jobs);
      }
      emit(common.output, cc::coherence_map_csv(result));
    } else if (sim->parsed()) {
      cc::SequencePair data;
      if (model == "ma") {
        data = cc::gen_ma_case(parse_case(map_case), length, common.seed);
      } else {
        cc::BarnettModelSpec spec;
        spec.F = barnett.F;
        spec.ma_order = barnett.order;
        data = cc::gen_barnett(spec, length, common.seed, 0,
                               init == "stationary" ? cc::BarnettInit::stationary
                                                    : cc::BarnettInit::burn_in);
      }
      emit(common.output, cc::sequence_csv(data));
    } else if (null->parsed()) {
      const auto spec = cc::make_spec(p, q, r, M);
      const cc::NullQuantiles quantiles(cc::sample_null(spec, barnett.n_mc, common.seed, common.jobs));
      cc::Json j;
      j["p"] = p;
      j["q"] = q;
      j["r"] = r;
      j["M"] = M;
      j["alpha"] = barnett.alpha;
      j["n_mc"] = barnett.n_mc;
      j["seed"] = common.seed;
      j["null_mean"] = spec.null_mean();
      j["critical_value"] = quantiles.critical_value(barnett.alpha);
      j["bartlett_critical_value"] = cc::bartlett_critical_value(spec, barnett.alpha);
      if (stat) {
        j["statistic"] = *stat;
        j["p_value"] = quantiles.p_value(*stat);
      }
      emit(common.output, j.dump(2) + "\n");
      if (!samples_out.empty()) {
        std::string csv = "rho2\n";
        for (double v : quantiles.sorted()) csv += cc::format_real(v) + "\n";
        cc::write_file_atomic(samples_out, csv);
      }
    } else if (power->parsed()) {
      const auto cfg = make_config(power, barnett, common);
      const auto order_list = parse_orders(orders);
      cc::NullSettings ns{barnett.n_mc, common.seed};
      const auto curve = cc::power_curve(cfg, order_list, barnett.alpha, ns);
      emit(common.output, cc::power_curve_csv(curve));
      cc::Json j;
      j["command"] = "power";
      j["config"] = cc::to_json(cfg);
      j["config"].erase("ma_order");
      j["orders"] = order_list;
      j["alpha"] = barnett.alpha;
      j["n_mc"] = barnett.n_mc;
      j["power"] = cc::Json::array();
      for (const auto& pt : curve) j["power"].push_back(pt.rate);
      emit_summary(common, j);
    } else if (roc->parsed()) {
      const auto cfg = make_config(roc, barnett, common);
      const auto curve = cc::roc_curve(cfg, grid);
      emit(common.output, cc::roc_curve_csv(curve));
      cc::Json j;
      j["command"] = "roc";
      j["config"] = cc::to_json(cfg);
      j["size_grid"] = grid;
      emit_summary(common, j);
    } else if (cal->parsed()) {
      auto cfg = make_config(cal, barnett, common);
      if (cal->count("--F") == 0) cfg.model.F = 0.0;
      cc::NullSettings ns{barnett.n_mc, common.seed};
      const auto size = cc::calibrate_size(cfg, barnett.alpha, ns);
      cc::Json j;
      j["command"] = "calibrate";
      j["config"] = cc::to_json(cfg);
      j["n_mc"] = barnett.n_mc;
      j["result"] = cc::to_json(size);
      emit(common.output, j.dump(2) + "\n");
    }
  } catch (const cc::InvalidArgument& e) {
    std::cerr << "cohercause: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "cohercause: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
