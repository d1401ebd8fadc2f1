#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lineact/report.hpp"

using namespace lineact;
using nlohmann::json;

namespace {

struct Alpha {
  Rational exact;
  double value = 0.0;
  bool rational = false;
  std::string label;
};

Alpha parse_alpha(const std::string& text) {
  Alpha a;
  a.label = text;
  if (text == "golden") {
    a.value = (std::sqrt(5.0) - 1) / 2;
  } else if (text == "silver" || text == "sqrt2-1") {
    a.value = std::sqrt(2.0) - 1;
  } else {
    try {
      a.exact = parse_rational(text);
    } catch (const Error& e) {
      throw InputError("--alpha: " + std::string(e.what()) + " (expected p/q, a decimal, golden or silver)");
    }
    a.value = a.exact.get_d();
    a.rational = true;
    return a;
  }
  a.exact = from_double(a.value);
  return a;
}

Interval parse_interval(const std::string& text, const std::string& flag) {
  auto comma = text.find(',');
  if (comma == std::string::npos) throw InputError(flag + " expects lo,hi");
  try {
    return Interval::closed(parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1)));
  } catch (const InputError&) {
    throw;
  } catch (const Error& e) {
    throw InputError(flag + ": " + e.what());
  }
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out);
  if (!f) throw InputError("cannot write " + out);
  f << text;
}

void add_config_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--words-max-len", cfg.words_max_len, "Maximal reduced word length")->capture_default_str();
  cmd->add_option("--power-bound", cfg.power_bound, "Bound on commensurability powers")->capture_default_str();
  cmd->add_option("--grid", cfg.grid, "Grid points for numerical scans")->capture_default_str();
  cmd->add_option("--tol", cfg.tol, "Numerical tolerance")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  cmd->add_option("--format", cfg.format, "json or csv")->capture_default_str();
  cmd->add_option("--out", cfg.out, "Output file (default stdout)");
}

int cmd_verify(const std::string& path, const std::string& suite, const RunConfig& cfg) {
  std::string text = read_file(path);
  ActionSpec spec = parse_action_spec(text);
  Report rep = run_verify(spec, text, parse_suite(suite), cfg);
  emit(rep.to_json().dump(2) + "\n", cfg.out);
  return rep.exit_code();
}

int cmd_analyze(const std::string& path, const RunConfig& cfg) {
  std::string text = read_file(path);
  ActionSpec spec = parse_action_spec(text);
  if (cfg.format == "csv") {
    cfg.validate();
    Interval window = Interval::closed(-4, 4);
    if (!spec.gaps.empty()) window = Interval::closed(floor(*spec.gaps.front().lo) - 1, floor(*spec.gaps.back().hi) + 2);
    std::ostringstream os;
    write_theta_csv(os, spec.measure(), window, cfg.grid);
    emit(os.str(), cfg.out);
    return 0;
  }
  Report rep = run_analyze(spec, text, cfg);
  emit(rep.to_json().dump(2) + "\n", cfg.out);
  return rep.exit_code();
}

int cmd_rotation(const std::string& alpha_text, long N, double x0, bool denjoy, int K, const RunConfig& cfg) {
  cfg.validate();
  if (N < 1) throw InputError("--N must be positive");
  Alpha alpha = parse_alpha(alpha_text);
  CircleLift F = CircleLift::translation(alpha.exact);
  json lift = {{"kind", "rigid"}};
  if (denjoy) {
    DenjoyApproximant d = denjoy_approximant({.alpha = alpha.exact, .K = K});
    F = d.lift;
    lift = {{"kind", "denjoy"}, {"K", K}, {"gaps", d.gaps.size()}, {"periodic_orbit", d.periodic_orbit}};
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_orbit_csv(os, orbit_gap_stats(F, x0, std::min<long>(N, 100000)));
    emit(os.str(), cfg.out);
    return 0;
  }
  RotationEstimate est = rotation_number(F, x0, N);
  double err = std::abs(est.estimate - alpha.value);
  CheckResult r{"rotation_number"};
  r.params = {{"alpha", alpha.label}, {"N", N}, {"x0", x0}, {"lift", lift}};
  r.data = {{"estimate", est.estimate},
            {"error_bound", est.error_bound},
            {"deviation", err},
            {"alpha_value", alpha.value}};
  if (est.exact) r.data["exact"] = to_string(*est.exact);
  if (err > est.error_bound + cfg.tol) {
    r.verdict = Verdict::Falsified;
    r.witnesses.push_back({{"deviation", err}, {"bound", est.error_bound}});
  }
  Report rep;
  rep.command = "rotation";
  rep.subject = alpha.label;
  rep.config = cfg;
  rep.spec_hash = fnv1a_hash(r.params.dump());
  rep.checks.push_back(r);
  emit(rep.to_json().dump(2) + "\n", cfg.out);
  return rep.exit_code();
}

int cmd_distortion(const std::string& spec_path, const std::string& generator, double c, double eps,
                   const std::string& J_text, long n_max, const RunConfig& cfg) {
  cfg.validate();
  if (n_max < 1) throw InputError("--n-max must be positive");
  Interval J = parse_interval(J_text, "--J");
  LineMap f;
  std::string label;
  std::string hashed;
  if (!spec_path.empty()) {
    hashed = read_file(spec_path);
    ActionSpec spec = parse_action_spec(hashed);
    const Generator* g = &spec.action.generators.front();
    if (!generator.empty()) {
      g = nullptr;
      for (const auto& cand : spec.action.generators) {
        if (cand.name == generator) g = &cand;
      }
      if (!g) throw InputError("no generator named " + generator);
    }
    f = g->map;
    label = g->name;
  } else {
    try {
      f = LineMap::sine_perturbed_translation(c, eps);
    } catch (const Error& e) {
      throw InputError(e.what());
    }
    label = "sine_perturbed_translation(" + std::to_string(c) + ", " + std::to_string(eps) + ")";
    hashed = label;
  }
  std::vector<DistortionReport> rows;
  try {
    rows = distortion_sum_check(f, J, n_max, cfg.grid);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (cfg.format == "csv") {
    std::ostringstream os;
    write_distortion_csv(os, rows);
    emit(os.str(), cfg.out);
    return 0;
  }
  CheckResult r{"distortion_sum"};
  r.params = {{"map", label}, {"J", J.describe()}, {"n_max", n_max}, {"grid", cfg.grid}};
  double min_margin = rows.front().margin;
  long worst = rows.front().n;
  bool chain_ok = true;
  json table = json::array();
  for (const auto& row : rows) {
    if (row.margin < min_margin) {
      min_margin = row.margin;
      worst = row.n;
    }
    chain_ok = chain_ok && row.chain_ok;
    table.push_back({{"n", row.n}, {"dist", row.dist}, {"bound", row.bound}, {"margin", row.margin}});
  }
  r.data = {{"C", rows.front().C}, {"min_margin", min_margin}, {"worst_n", worst}, {"chain_ok", chain_ok}, {"rows", table}};
  if (min_margin < -cfg.tol) {
    r.verdict = Verdict::Falsified;
    r.witnesses.push_back({{"n", worst}, {"margin", min_margin}});
  }
  Report rep;
  rep.command = "distortion";
  rep.subject = label;
  rep.config = cfg;
  rep.spec_hash = fnv1a_hash(hashed + "|" + J.describe() + "|" + std::to_string(n_max));
  rep.checks.push_back(r);
  emit(rep.to_json().dump(2) + "\n", cfg.out);
  return rep.exit_code();
}

int cmd_blowup(const std::string& base, const std::string& x, const std::string& beta, const std::string& l0, int depth,
               const RunConfig& cfg) {
  BlowupSpec bs;
  std::string base_text = base;
  if (base == "bs12") {
    bs.base = bs12();
  } else {
    base_text = read_file(base);
    bs.base = parse_action_spec(base_text).action;
  }
  try {
    bs.base_point = parse_rational(x);
    bs.beta = parse_rational(beta);
    bs.l0 = parse_rational(l0);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  if (depth < 1) throw InputError("--depth must be positive");
  bs.depth = depth;
  Blowup b = blowup(bs);

  ActionSpec spec;
  spec.action = b.action;
  spec.action.name = "blowup";
  spec.collapse = b.collapse;
  for (const auto& g : b.gaps) spec.gaps.push_back(Interval::closed(g.lo, g.hi));
  spec.base = bs.base;
  spec.depth = depth;
  std::string text = to_json(spec).dump(2) + "\n";
  std::string out = cfg.out.empty() ? "blowup.json" : cfg.out;
  emit(text, out);

  json inventory = json::array();
  for (const auto& g : b.gaps) {
    inventory.push_back({{"word", bs.base.format(g.word)},
                         {"point", to_string(g.point)},
                         {"lo", to_string(g.lo)},
                         {"hi", to_string(g.hi)}});
  }
  json prov = {{"tool", "line_actions"},
               {"command", "blowup"},
               {"label", kBlowupLabel},
               {"params",
                {{"base", base == "bs12" ? "bs12" : fnv1a_hash(base_text)},
                 {"x", to_string(bs.base_point)},
                 {"beta", to_string(bs.beta)},
                 {"l0", to_string(bs.l0)},
                 {"depth", depth}}},
               {"spec_file", out},
               {"spec_hash", fnv1a_hash(text)},
               {"gaps", b.gaps.size()},
               {"eta", to_string(b.eta)},
               {"gap_inventory", inventory}};
  emit(prov.dump(2) + "\n", out + ".provenance.json");
  std::cout << "wrote " << out << " (" << b.gaps.size() << " gaps) and " << out << ".provenance.json\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Checks and experiments for groups acting on the line"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string path, suite = "all";
  auto* verify = app.add_subcommand("verify", "Run a theorem suite on an action file");
  verify->add_option("action", path, "Action JSON file")->required();
  verify->add_option("--suite", suite, "holder, affine, circle, c2 or all")->capture_default_str();
  add_config_flags(verify, cfg);

  auto* analyze = app.add_subcommand("analyze", "Order table, infinitesimal sample, A, tau, phi, theta");
  analyze->add_option("action", path, "Action JSON file")->required();
  add_config_flags(analyze, cfg);

  std::string alpha;
  long N = 10000;
  double x0 = 0.0;
  bool denjoy = false;
  int K = 8;
  auto* rotation = app.add_subcommand("rotation", "Rotation number of a rigid or blown-up rotation");
  rotation->add_option("--alpha", alpha, "p/q, decimal, golden or silver")->required();
  rotation->add_option("--N", N, "Iterations")->capture_default_str();
  rotation->add_option("--x0", x0, "Base point")->capture_default_str();
  rotation->add_flag("--denjoy", denjoy, "Use the blown-up rotation approximant");
  rotation->add_option("--K", K, "Orbit points blown up on each side")->capture_default_str();
  add_config_flags(rotation, cfg);

  std::string map_spec, generator, J = "0,1/10";
  double c = 0.3, eps = 0.1;
  long n_max = 50;
  auto* distortion = app.add_subcommand("distortion", "Distortion against orbit-length sums");
  distortion->add_option("--spec", map_spec, "Action JSON file supplying the map");
  distortion->add_option("--generator", generator, "Generator name in --spec");
  distortion->add_option("--c", c, "Translation part of the sine-perturbed map")->capture_default_str();
  distortion->add_option("--eps", eps, "Amplitude of the sine-perturbed map")->capture_default_str();
  distortion->add_option("--J", J, "Interval lo,hi")->capture_default_str();
  distortion->add_option("--n-max", n_max, "Largest iterate")->capture_default_str();
  add_config_flags(distortion, cfg);

  std::string base = "bs12", x = "1/3", beta = "1/2", l0 = "1/10";
  int depth = 5;
  auto* blow = app.add_subcommand("blowup", "Blow up an orbit of an affine action");
  blow->add_option("--base", base, "bs12 or an action JSON file")->capture_default_str();
  blow->add_option("--x", x, "Base point")->capture_default_str();
  blow->add_option("--beta", beta, "Gap length ratio")->capture_default_str();
  blow->add_option("--l0", l0, "Length of the gap at the base point")->capture_default_str();
  blow->add_option("--depth", depth, "Blow up words of length <= depth")->capture_default_str();
  blow->add_option("--out", cfg.out, "Spec file (default blowup.json)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*verify) return cmd_verify(path, suite, cfg);
    if (*analyze) return cmd_analyze(path, cfg);
    if (*rotation) return cmd_rotation(alpha, N, x0, denjoy, K, cfg);
    if (*distortion) return cmd_distortion(map_spec, generator, c, eps, J, n_max, cfg);
    if (*blow) return cmd_blowup(base, x, beta, l0, depth, cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
