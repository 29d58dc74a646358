#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pathcov/diagram.hpp"
#include "pathcov/rng.hpp"

namespace pathcov {

/// Rows are draws, columns follow the diagram's node indices.
using Dataset = Eigen::MatrixXd;

/// Ancestral sampler: x = (I - B)^-1 (mu + L e), with L L^T = Omega.
class Sampler {
 public:
  explicit Sampler(const PathDiagram<double>& d, Eigen::VectorXd error_means = {});

  Eigen::VectorXd draw(Rng& rng) const;
  int size() const { return static_cast<int>(transfer_.rows()); }

 private:
  Eigen::MatrixXd transfer_;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd means_;
};

Dataset sample(const PathDiagram<double>& d, int n, Rng& rng, const Eigen::VectorXd& error_means = {});
Dataset sample(const PathDiagram<double>& d, int n, std::uint64_t seed);

/// Coefficient of column x in the least-squares fit of column y on an
/// intercept, x and the given columns.
double ols(const Dataset& data, int y, int x, const std::vector<int>& given);

/// Inverse of the selection distortion: r * (var_x_cond / var_x) * (var_y / var_y_cond).
double corrected_alpha(double r_cond, double var_x, double var_y, double var_x_cond, double var_y_cond);

/// OLS from sufficient statistics; regressors are x then the given values.
class RunningOls {
 public:
  explicit RunningOls(int given_count);

  void add(double y, const Eigen::VectorXd& regressors);
  long count() const { return n_; }
  /// Coefficient of the first regressor once count() >= given_count + 3.
  std::optional<double> estimate() const;

 private:
  int k_;
  long n_ = 0;
  Eigen::MatrixXd xtx_;
  Eigen::VectorXd xty_;
};

class RunningMoments {
 public:
  void add(double v);
  long count() const { return n_; }
  double mean() const { return mean_; }
  /// Sample variance (n - 1 denominator).
  double variance() const { return n_ > 1 ? m2_ / static_cast<double>(n_ - 1) : 0.0; }

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

enum class Scenario { child_of_cause, child_of_effect, proxy_confounder, proxy_driver, long_confounder };

std::optional<Scenario> parse_scenario(std::string_view name);
const char* to_string(Scenario s);

/// Scenarios under truncation keep only rows whose selection node lies in
/// the window and maximize the effect; the proxy scenarios keep every row,
/// adjust for the proxy and minimize.
bool uses_window(Scenario s);

struct SimConfig {
  std::uint64_t seed = 0;
  double epsilon = 0.2;
  int episodes = 5000;
  double window_low = 4.0;
  double window_high = 6.0;
  bool reject_negative = true;
  bool correct = false;
  /// alpha_2 - alpha_1 in magnitude; drawn from (0.15, 0.3) when unset.
  std::optional<double> offset;
  /// Standard deviation of the proxy's (arm 1) or the confounder's (arm 2) error.
  double proxy_sd = 1.0;
  double x_mean = 5.0;

  void validate() const;
};

struct ArmModel {
  PathDiagram<double> diagram;
  Eigen::VectorXd error_means;
  int x = 0;
  int y = 0;
  std::vector<int> given;
  std::optional<int> select;
  /// Selection is on a child of the effect, so the estimate can be corrected.
  bool correctable = false;
};

/// The SEM for one arm (0 or 1) of a scenario.
ArmModel doctor_arm(Scenario s, int arm, double alpha, const SimConfig& cfg);

struct SimResult {
  Scenario scenario = Scenario::child_of_effect;
  bool maximize = true;
  std::array<double, 2> alpha{};
  std::vector<int> arm;
  std::vector<bool> kept;
  /// NaN where the arm has no estimate yet.
  std::array<std::vector<double>, 2> alpha_hat;
  std::array<std::optional<double>, 2> final_estimate;
  std::array<int, 2> chosen{};
  std::array<int, 2> kept_count{};
  std::array<int, 2> exploited{};

  /// Arm the greedy rule picks after the last episode.
  int preferred() const;
};

SimResult run_doctor_experiment(const SimConfig& cfg, Scenario s);

/// episode,arm,kept,alpha1_hat,alpha2_hat with 1-based episodes and arms;
/// undefined estimates are empty fields.
void write_trajectory_csv(std::ostream& out, const SimResult& r);

/// Shortest round-trip decimal form.
std::string format_double(double v);

}  // namespace pathcov
