#include "pathcov/simlab.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <ostream>

#include "pathcov/error.hpp"

namespace pathcov {

Sampler::Sampler(const PathDiagram<double>& d, Eigen::VectorXd error_means) : means_(std::move(error_means)) {
  require_valid(d);
  const int n = d.size();
  if (means_.size() == 0) means_ = Eigen::VectorXd::Zero(n);
  if (means_.size() != n) throw PreconditionError("error means do not match the diagram");
  const Eigen::MatrixXd b = d.coefficients();
  transfer_ = (Eigen::MatrixXd::Identity(n, n) - b).inverse();
  Eigen::LLT<Eigen::MatrixXd> llt(d.omega());
  if (llt.info() != Eigen::Success) throw DomainError("error covariance is not positive definite");
  chol_ = llt.matrixL();
}

Eigen::VectorXd Sampler::draw(Rng& rng) const {
  Eigen::VectorXd e(size());
  for (int i = 0; i < size(); ++i) e(i) = rng.normal();
  return transfer_ * (means_ + chol_ * e);
}

Dataset sample(const PathDiagram<double>& d, int n, Rng& rng, const Eigen::VectorXd& error_means) {
  const Sampler s(d, error_means);
  Dataset out(n, d.size());
  for (int r = 0; r < n; ++r) out.row(r) = s.draw(rng).transpose();
  return out;
}

Dataset sample(const PathDiagram<double>& d, int n, std::uint64_t seed) {
  Rng rng(seed);
  return sample(d, n, rng);
}

double ols(const Dataset& data, int y, int x, const std::vector<int>& given) {
  const Eigen::Index cols = 2 + static_cast<Eigen::Index>(given.size());
  if (data.rows() < cols) throw PreconditionError("too few rows for the regression");
  Eigen::MatrixXd design(data.rows(), cols);
  design.col(0).setOnes();
  design.col(1) = data.col(x);
  for (std::size_t k = 0; k < given.size(); ++k) design.col(2 + static_cast<Eigen::Index>(k)) = data.col(given[k]);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-12);
  if (qr.rank() < cols) throw DomainError("rank-deficient regression");
  const Eigen::VectorXd beta = qr.solve(data.col(y));
  return beta(1);
}

double corrected_alpha(double r_cond, double var_x, double var_y, double var_x_cond, double var_y_cond) {
  if (!(var_x > 0) || !(var_y > 0) || !(var_x_cond > 0) || !(var_y_cond > 0)) {
    throw DomainError("variances must be positive");
  }
  return r_cond * (var_x_cond / var_x) * (var_y / var_y_cond);
}

RunningOls::RunningOls(int given_count)
    : k_(given_count),
      xtx_(Eigen::MatrixXd::Zero(given_count + 2, given_count + 2)),
      xty_(Eigen::VectorXd::Zero(given_count + 2)) {}

void RunningOls::add(double y, const Eigen::VectorXd& regressors) {
  Eigen::VectorXd row(k_ + 2);
  row(0) = 1.0;
  row.tail(k_ + 1) = regressors;
  xtx_.selfadjointView<Eigen::Lower>().rankUpdate(row);
  xty_ += y * row;
  ++n_;
}

std::optional<double> RunningOls::estimate() const {
  if (n_ < k_ + 3) return std::nullopt;
  const Eigen::MatrixXd full = xtx_.selfadjointView<Eigen::Lower>();
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(full);
  if (qr.rank() < k_ + 2) return std::nullopt;
  return qr.solve(xty_)(1);
}

void RunningMoments::add(double v) {
  ++n_;
  const double d = v - mean_;
  mean_ += d / static_cast<double>(n_);
  m2_ += d * (v - mean_);
}

namespace {

constexpr std::array<std::pair<std::string_view, Scenario>, 5> kScenarios{{
    {"childOfCause", Scenario::child_of_cause},
    {"childOfEffect", Scenario::child_of_effect},
    {"proxyConfounder", Scenario::proxy_confounder},
    {"proxyDriver", Scenario::proxy_driver},
    {"longConfounder", Scenario::long_confounder},
}};

}  // namespace

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (const auto& [n, s] : kScenarios) {
    if (n == name) return s;
  }
  return std::nullopt;
}

const char* to_string(Scenario s) {
  for (const auto& [n, v] : kScenarios) {
    if (v == s) return n.data();
  }
  return "?";
}

bool uses_window(Scenario s) { return s == Scenario::child_of_cause || s == Scenario::child_of_effect; }

void SimConfig::validate() const {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw InputError("epsilon must lie in [0, 1]");
  if (!(window_low < window_high)) throw InputError("window must satisfy low < high");
  if (episodes < 0) throw InputError("episodes must be non-negative");
  if (!(proxy_sd > 0.0)) throw InputError("proxy standard deviation must be positive");
  if (offset && !std::isfinite(*offset)) throw InputError("offset must be finite");
}

ArmModel doctor_arm(Scenario s, int arm, double alpha, const SimConfig& cfg) {
  ArmModel m;
  auto& d = m.diagram;
  const double proxy_var = cfg.proxy_sd * cfg.proxy_sd;
  switch (s) {
    case Scenario::child_of_cause:
    case Scenario::child_of_effect: {
      m.x = d.add_node("X", 1.0);
      m.y = d.add_node("Y", 1.0);
      d.add_edge(m.x, m.y, alpha);
      const bool effect = s == Scenario::child_of_effect && arm == 1;
      const int w = d.add_node(effect ? "W" : "Z", 1.0);
      d.add_edge(effect ? m.y : m.x, w, 1.0);
      m.select = w;
      m.correctable = effect;
      m.error_means = Eigen::VectorXd::Zero(3);
      m.error_means(m.x) = cfg.x_mean;
      break;
    }
    case Scenario::proxy_confounder:
    case Scenario::proxy_driver:
    case Scenario::long_confounder: {
      const bool lng = s != Scenario::proxy_confounder;
      const bool driver = arm == 1 || s == Scenario::proxy_driver;
      const int u = d.add_node("U", driver ? proxy_var : 1.0);
      m.x = d.add_node("X", 1.0);
      m.y = d.add_node("Y", 1.0);
      d.add_edge(m.x, m.y, alpha);
      d.add_edge(u, m.y, 1.0);
      if (lng) {
        const int u2 = d.add_node("U'", 1.0);
        d.add_edge(u2, m.x, 1.0);
        d.add_edge(u2, u, 1.0);
      } else {
        d.add_edge(u, m.x, 1.0);
      }
      if (driver) {
        const int w = d.add_node("W", 1.0);
        d.add_edge(w, u, 1.0);
        m.given = {w};
      } else {
        const int z = d.add_node("Z", proxy_var);
        d.add_edge(u, z, 1.0);
        m.given = {z};
      }
      m.error_means = Eigen::VectorXd::Zero(d.size());
      m.error_means(m.x) = cfg.x_mean;
      break;
    }
  }
  return m;
}

int SimResult::preferred() const {
  if (!final_estimate[0] && !final_estimate[1]) return 0;
  if (!final_estimate[1]) return 0;
  if (!final_estimate[0]) return 1;
  const double a = *final_estimate[0];
  const double b = *final_estimate[1];
  return (maximize ? b > a : b < a) ? 1 : 0;
}

namespace {

struct ArmState {
  ArmModel model;
  Sampler sampler;
  Rng rng;
  RunningOls fit;
  RunningMoments kept_x, kept_y, all_x, all_y;
  bool correct = false;

  ArmState(ArmModel m, Rng r, bool correct_on)
      : model(std::move(m)),
        sampler(model.diagram, model.error_means),
        rng(r),
        fit(static_cast<int>(model.given.size())),
        correct(correct_on && model.correctable) {}

  std::optional<double> estimate() const {
    auto r = fit.estimate();
    if (!r || !correct) return r;
    const double vxc = kept_x.variance();
    const double vyc = kept_y.variance();
    if (!(vxc > 0) || !(vyc > 0) || !(all_x.variance() > 0)) return std::nullopt;
    return corrected_alpha(*r, all_x.variance(), all_y.variance(), vxc, vyc);
  }
};

}  // namespace

SimResult run_doctor_experiment(const SimConfig& cfg, Scenario s) {
  cfg.validate();
  SimResult res;
  res.scenario = s;
  const bool window = uses_window(s);
  res.maximize = window;

  Rng params = Rng::stream(cfg.seed, 0);
  Rng policy = Rng::stream(cfg.seed, 1);
  const double a1 = params.uniform(0.5, 1.5);
  const double off = cfg.offset ? *cfg.offset : params.uniform(0.15, 0.3);
  res.alpha = {a1, window ? a1 + off : a1 - off};

  std::vector<ArmState> arms;
  for (int a = 0; a < 2; ++a) arms.emplace_back(doctor_arm(s, a, res.alpha[a], cfg), Rng::stream(cfg.seed, 2 + a), cfg.correct);

  const auto n = static_cast<std::size_t>(cfg.episodes);
  res.arm.reserve(n);
  res.kept.reserve(n);
  for (auto& t : res.alpha_hat) t.reserve(n);
  std::array<std::optional<double>, 2> est;

  for (int e = 0; e < cfg.episodes; ++e) {
    int pick;
    if (!est[0] || !est[1]) {
      pick = est[0] ? 1 : 0;
    } else if (policy.bernoulli(cfg.epsilon)) {
      pick = static_cast<int>(policy.below(2));
    } else {
      const bool second = res.maximize ? *est[1] > *est[0] : *est[1] < *est[0];
      pick = second ? 1 : 0;
      ++res.exploited[pick];
    }
    ArmState& st = arms[pick];
    const ArmModel& m = st.model;
    Eigen::VectorXd row;
    while (true) {
      row = st.sampler.draw(st.rng);
      if (!(window && cfg.reject_negative) || row.minCoeff() >= 0.0) break;
    }
    st.all_x.add(row(m.x));
    st.all_y.add(row(m.y));
    bool keep = true;
    if (window && m.select) {
      const double v = row(*m.select);
      keep = v > cfg.window_low && v < cfg.window_high;
    }
    if (keep) {
      Eigen::VectorXd reg(1 + m.given.size());
      reg(0) = row(m.x);
      for (std::size_t k = 0; k < m.given.size(); ++k) reg(1 + static_cast<Eigen::Index>(k)) = row(m.given[k]);
      st.fit.add(row(m.y), reg);
      st.kept_x.add(row(m.x));
      st.kept_y.add(row(m.y));
      ++res.kept_count[pick];
      est[pick] = st.estimate();
    }
    ++res.chosen[pick];
    res.arm.push_back(pick);
    res.kept.push_back(keep);
    for (int a = 0; a < 2; ++a) res.alpha_hat[a].push_back(est[a].value_or(std::numeric_limits<double>::quiet_NaN()));
  }
  res.final_estimate = est;
  return res;
}

std::string format_double(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

void write_trajectory_csv(std::ostream& out, const SimResult& r) {
  out << "episode,arm,kept,alpha1_hat,alpha2_hat\n";
  for (std::size_t e = 0; e < r.arm.size(); ++e) {
    out << e + 1 << ',' << r.arm[e] + 1 << ',' << (r.kept[e] ? 1 : 0);
    for (int a = 0; a < 2; ++a) {
      out << ',';
      if (!std::isnan(r.alpha_hat[a][e])) out << format_double(r.alpha_hat[a][e]);
    }
    out << '\n';
  }
}

}  // namespace pathcov
