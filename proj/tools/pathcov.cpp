#include <algorithm>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "pathcov/conditioning.hpp"
#include "pathcov/dsl.hpp"
#include "pathcov/error.hpp"
#include "pathcov/factorization.hpp"
#include "pathcov/selfcheck.hpp"
#include "pathcov/separation.hpp"
#include "pathcov/simlab.hpp"
#include "pathcov/simpson.hpp"
#include "pathcov/wright.hpp"

using namespace pathcov;
using Json = nlohmann::ordered_json;

namespace {

struct Args {
  bool use_float = false;
  std::uint64_t seed = 1;
  std::string file;
  std::string x;
  std::string y;
  std::vector<std::string> given;
  bool emit_dsl = false;
  int max_given = 2;
  std::string scenario;
  int episodes = 5000;
  double epsilon = 0.2;
  bool correct = false;
  std::optional<double> offset;
  double proxy_sd = 1.0;
  int diagrams = 500;
};

NodeSet lookup(const Graph& g, const std::vector<std::string>& names) {
  NodeSet s;
  for (const auto& n : names) s.insert(g.index(n));
  return s;
}

std::vector<std::string> sorted_names(const Graph& g, NodeSet s) {
  std::vector<std::string> out;
  for (NodeIndex n : s) out.push_back(g.name(n));
  std::ranges::sort(out);
  return out;
}

std::vector<std::string> names_of(const Graph& g, const std::vector<NodeIndex>& v) {
  std::vector<std::string> out;
  for (NodeIndex n : v) out.push_back(g.name(n));
  return out;
}

template <typename S>
Json to_json(const Graph& g, const Certificate<S>& c) {
  Json j;
  j["kind"] = to_string(c.kind);
  j["x"] = g.name(c.x);
  j["y"] = g.name(c.y);
  j["given"] = sorted_names(g, c.given);
  if (c.path) j["path"] = format_path(g, *c.path);
  if (c.kind == CertificateKind::collider_free) {
    j["form"] = to_string(c.form);
    j["order"] = names_of(g, c.order);
  }
  j["base_source"] = c.base_source == BaseSource::marginal ? "marginal" : "path_tracing";
  j["base"] = format_scalar(c.base);
  Json factors = Json::array();
  for (const auto& f : c.factors) {
    factors.push_back({{"node", g.name(f.node)}, {"num", sorted_names(g, f.num)}, {"den", sorted_names(g, f.den)}});
  }
  j["factors"] = factors;
  Json terms = Json::array();
  for (const auto& t : c.terms) {
    Json jt;
    jt["sign"] = t.sign;
    jt["openers"] = names_of(g, t.openers);
    Json covs = Json::array();
    for (const auto& sub : t.covariances) covs.push_back(to_json(g, sub));
    jt["covariances"] = covs;
    Json vars = Json::array();
    for (const auto& v : t.variances) vars.push_back({{"node", g.name(v.node)}, {"given", sorted_names(g, v.given)}});
    jt["variances"] = vars;
    terms.push_back(jt);
  }
  j["terms"] = terms;
  j["notes"] = c.notes;
  return j;
}

template <typename S>
int run_cov(const PathDiagram<S>& d) {
  const auto sigma = implied_covariance(d);
  for (const auto& n : sigma.order) std::cout << ',' << n;
  std::cout << '\n';
  for (int i = 0; i < sigma.size(); ++i) {
    std::cout << sigma.order[i];
    for (int j = 0; j < sigma.size(); ++j) std::cout << ',' << format_scalar(sigma(i, j));
    std::cout << '\n';
  }
  return 0;
}

template <typename S>
int run_pcov(const PathDiagram<S>& d, const Args& a) {
  const auto sigma = implied_covariance(d);
  const Graph& g = d.graph();
  std::cout << format_scalar(partial_cov_schur(sigma, g.index(a.x), g.index(a.y), lookup(g, a.given))) << '\n';
  return 0;
}

int run_dsep(const Graph& g, const Args& a) {
  const NodeIndex x = g.index(a.x);
  const NodeIndex y = g.index(a.y);
  const NodeSet z = lookup(g, a.given);
  if (z.contains(x) || z.contains(y)) throw InputError("endpoints must not be in the conditioning set");
  if (auto p = open_path(g, x, y, z)) {
    std::cout << "connected\n" << format_path(g, *p) << '\n';
  } else {
    std::cout << "separated\n";
  }
  return 0;
}

template <typename S>
int run_wright(const PathDiagram<S>& d, const Args& a) {
  const auto sigma = implied_covariance(d);
  const Graph& g = d.graph();
  const auto dec = trace_decomposition(d, sigma, g.index(a.x), g.index(a.y));
  std::cout << "path,product,root,root_variance,contribution\n";
  for (const auto& t : dec.paths) {
    std::cout << format_path(g, t.path) << ',' << format_scalar(t.product) << ','
              << (t.root ? g.name(*t.root) : std::string()) << ',' << format_scalar(t.root_variance) << ','
              << format_scalar(t.contribution) << '\n';
  }
  std::cout << "total,,,," << format_scalar(dec.total) << '\n';
  return 0;
}

template <typename S>
int run_factorize(const PathDiagram<S>& d, const Args& a) {
  const auto sigma = implied_covariance(d);
  const Graph& g = d.graph();
  const NodeIndex x = g.index(a.x);
  const NodeIndex y = g.index(a.y);
  const NodeSet z = lookup(g, a.given);
  const auto cert = factorize(d, sigma, x, y, z);
  PartialCovOracle<S> oracle(sigma);
  const S value = evaluate_certificate(cert, oracle);
  const S want = partial_cov_schur(sigma, x, y, z);
  Json j = to_json(g, cert);
  j["value"] = format_scalar(value);
  j["oracle"] = format_scalar(want);
  j["match"] = ScalarTraits<S>::exact ? value == want : is_zero<S>(value - want);
  std::cout << j.dump(2) << '\n';
  return 0;
}

Json plan_json(const Graph& g, const ConditionedPlan& p) {
  Json j;
  j["kind"] = p.kind == SubpathKind::root ? "root" : "nonroot";
  j["form"] = to_string(p.form);
  j["x"] = g.name(p.x);
  j["y"] = g.name(p.y);
  j["swapped"] = p.swapped;
  Json paths = Json::array();
  for (const auto& path : p.open_paths) paths.push_back(format_path(g, path));
  j["open_paths"] = paths;
  Json order = Json::array();
  for (std::size_t i = 0; i < p.order.size(); ++i) {
    order.push_back({{"node", g.name(p.order[i])}, {"upper", sorted_names(g, p.upper[i])}, {"lower", sorted_names(g, p.lower[i])}});
  }
  j["order"] = order;
  j["residual"] = names_of(g, p.residual);
  return j;
}

template <typename S>
int run_factorize_cond(const PathDiagram<S>& d, const Args& a) {
  const Graph& g = d.graph();
  const NodeIndex x = g.index(a.x);
  const NodeIndex y = g.index(a.y);
  const NodeSet s = lookup(g, a.given);
  if (s.contains(x) || s.contains(y)) throw InputError("endpoints must not be in the conditioning set");
  const auto dc = condition_on(d, s);
  const Graph& gc = dc.diagram.graph();
  const auto sigma = implied_covariance(dc.diagram);
  Json j;
  j["s_prime"] = sorted_names(gc, dc.s_prime);
  auto root = check_root_form(dc, x, y);
  auto nonroot = root.plan ? PlanCheck{} : check_nonroot_form(dc, x, y);
  const auto& plan = root.plan ? root.plan : nonroot.plan;
  const S original = partial_cov_schur(implied_covariance(d), x, y, s);
  const S conditioned = partial_cov_schur(sigma, x, y, dc.z());
  if (!plan) {
    j["applicable"] = false;
    j["root_failure"] = root.failure;
    j["nonroot_failure"] = nonroot.failure;
  } else {
    j["applicable"] = true;
    j["plan"] = plan_json(gc, *plan);
    const auto cert = factorize_conditioned(dc, sigma, *plan);
    j["certificate"] = to_json(gc, cert);
    const S value = evaluate_certificate(cert, sigma);
    j["value"] = format_scalar(value);
    j["match"] = ScalarTraits<S>::exact ? value == conditioned : is_zero<S>(value - conditioned);
  }
  j["oracle_conditioned"] = format_scalar(conditioned);
  j["oracle_original"] = format_scalar(original);
  std::cout << j.dump(2) << '\n';
  return 0;
}

int run_condition(const PathDiagram<Rational>& d, const Args& a) {
  const auto dc = condition_on(d, lookup(d.graph(), a.given));
  const Graph& gc = dc.diagram.graph();
  if (a.emit_dsl) {
    std::cout << serialize(dc.diagram);
    return 0;
  }
  Json j;
  j["s"] = sorted_names(gc, dc.s);
  j["s_prime"] = sorted_names(gc, dc.s_prime);
  Json split = Json::object();
  for (const auto& [from, to] : dc.split) split[gc.name(from)] = sorted_names(gc, to);
  j["split"] = split;
  std::cout << j.dump(2) << '\n';
  return 0;
}

template <typename S>
int run_simpson(const PathDiagram<S>& d, const Args& a) {
  const Graph& g = d.graph();
  PartialCovOracle<S> oracle(implied_covariance(d));
  const auto rep = sign_invariance_check(g, oracle, g.index(a.x), g.index(a.y), a.max_given);
  std::cout << "given,sign,value\n";
  for (const auto& e : rep.entries) {
    std::string names;
    for (const auto& n : sorted_names(g, e.given)) names += (names.empty() ? "" : ";") + n;
    std::cout << names << ',' << e.sign << ',' << format_scalar(e.value) << '\n';
  }
  return 0;
}

int run_simulate(const Args& a) {
  const auto scenario = parse_scenario(a.scenario);
  if (!scenario) throw InputError("unknown scenario '" + a.scenario + "'");
  SimConfig cfg;
  cfg.seed = a.seed;
  cfg.episodes = a.episodes;
  cfg.epsilon = a.epsilon;
  cfg.correct = a.correct;
  cfg.offset = a.offset;
  cfg.proxy_sd = a.proxy_sd;
  write_trajectory_csv(std::cout, run_doctor_experiment(cfg, *scenario));
  return 0;
}

int run_selfcheck_cmd(const Args& a) {
  SelfcheckOptions opt;
  opt.seed = a.seed;
  opt.diagrams = a.diagrams;
  const auto rep = run_selfcheck(opt);
  std::cout << "diagrams: " << rep.diagrams << "\nqueries: " << rep.queries << "\npassed: " << rep.passed
            << "\nfailed: " << rep.failed << '\n';
  for (const auto& f : rep.failures) std::cerr << f << '\n';
  return rep.failed == 0 ? 0 : 1;
}

template <typename F>
int with_diagram(const Args& a, F&& f) {
  const auto d = load_diagram(a.file);
  if (a.use_float) return f(d.cast<double>());
  return f(d);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Partial covariance factorization on path diagrams"};
  app.require_subcommand(1);
  app.fallthrough();
  Args a;
  app.add_flag("--float", a.use_float, "Floating-point arithmetic instead of exact rationals");
  app.add_option("--seed", a.seed, "Random seed");

  const auto add_file = [&](CLI::App* c) { c->add_option("file", a.file, "Diagram file")->required(); };
  const auto add_xy = [&](CLI::App* c) {
    add_file(c);
    c->add_option("x", a.x, "First variable")->required();
    c->add_option("y", a.y, "Second variable")->required();
  };
  const auto add_given = [&](CLI::App* c, const char* name) {
    c->add_option(name, a.given, "Conditioning nodes")->delimiter(',');
  };

  auto* cov = app.add_subcommand("cov", "Implied covariance matrix as CSV");
  add_file(cov);
  auto* pcov = app.add_subcommand("pcov", "Partial covariance");
  add_xy(pcov);
  add_given(pcov, "--given");
  auto* dsep = app.add_subcommand("dsep", "Separation test with a witnessing open path");
  add_xy(dsep);
  add_given(dsep, "--given");
  auto* wright = app.add_subcommand("wright", "Path-tracing decomposition of a covariance");
  add_xy(wright);
  auto* fact = app.add_subcommand("factorize", "Factorization certificate as JSON");
  add_xy(fact);
  add_given(fact, "--given");
  auto* fcond = app.add_subcommand("factorize-cond", "Factorization on the conditioned diagram");
  add_xy(fcond);
  add_given(fcond, "--on");
  auto* cond = app.add_subcommand("condition", "Node-splitting conditioning");
  add_file(cond);
  add_given(cond, "--on");
  cond->add_flag("--emit-dsl", a.emit_dsl, "Print the conditioned diagram in the DSL");
  auto* simpson = app.add_subcommand("simpson", "Signs of the partial covariance over conditioning sets");
  add_xy(simpson);
  simpson->add_option("--max-given", a.max_given, "Largest conditioning set")->check(CLI::NonNegativeNumber);
  auto* sim = app.add_subcommand("simulate", "Epsilon-greedy doctor experiment");
  sim->add_option("--scenario", a.scenario, "childOfCause, childOfEffect, proxyConfounder, proxyDriver or longConfounder")
      ->required();
  sim->add_option("--episodes", a.episodes, "Episodes")->check(CLI::NonNegativeNumber);
  sim->add_option("--epsilon", a.epsilon, "Exploration probability")->check(CLI::Range(0.0, 1.0));
  sim->add_flag("--correct", a.correct, "Correct selection on a child of the effect");
  sim->add_option("--offset", a.offset, "Gap between the two effects");
  sim->add_option("--proxy-sd", a.proxy_sd, "Error standard deviation of the proxy or confounder")
      ->check(CLI::PositiveNumber);
  auto* self = app.add_subcommand("selfcheck", "Random-diagram certificate check against the oracle");
  self->add_option("--diagrams", a.diagrams, "Number of diagrams")->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*cov) return with_diagram(a, [](const auto& d) { return run_cov(d); });
    if (*pcov) return with_diagram(a, [&](const auto& d) { return run_pcov(d, a); });
    if (*dsep) return run_dsep(load_diagram(a.file).graph(), a);
    if (*wright) return with_diagram(a, [&](const auto& d) { return run_wright(d, a); });
    if (*fact) return with_diagram(a, [&](const auto& d) { return run_factorize(d, a); });
    if (*fcond) return with_diagram(a, [&](const auto& d) { return run_factorize_cond(d, a); });
    if (*cond) return run_condition(load_diagram(a.file), a);
    if (*simpson) return with_diagram(a, [&](const auto& d) { return run_simpson(d, a); });
    if (*sim) return run_simulate(a);
    if (*self) return run_selfcheck_cmd(a);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
