//
// Copyright 2026 The dpmc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// dpmc command line: calibrate noise bounds, perturb matrices from files,
// design covariance factors, compare against the matrix-variate comparator,
// run the verification suites, and convert bounds to Renyi guarantees.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid configuration,
// 3 file or parse error, 4 degenerate utility subspace.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpmc/dpmc.hpp"

namespace {

using nlohmann::json;

constexpr int kExitVerifyFailure = 1;
constexpr int kExitBadConfig = 2;
constexpr int kExitFileError = 3;
constexpr int kExitDegenerateSubspace = 4;

std::string format_double(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  return buffer;
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& from_cli) {
  if (from_cli) return *from_cli;
  if (const char* env = std::getenv("DPMC_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;  // documented default
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string cell;
  while (std::getline(stream, cell, ',')) {
    std::size_t used = 0;
    values.push_back(std::stod(cell, &used));
  }
  if (values.empty()) throw std::domain_error("empty list: '" + text + "'");
  return values;
}

void emit_text(const std::string& text, const std::string& out_path) {
  std::cout << text;
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw dpmc::ParseError("cannot open for writing: " + out_path);
    out << text;
  }
}

// Comment line carried at the top of CSV tables so that every emitted report
// embeds its configuration and the library version.
std::string csv_config_line(const std::string& command, const json& config) {
  return "# version=" + std::string(dpmc::kVersion) + " command=" + command +
         " config=" + config.dump() + "\n";
}

struct CalibrateOptions {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;
  int compositions = 1;
  std::string format = "json";
  std::string out_path;
};

int run_calibrate(const CalibrateOptions& opt) {
  const dpmc::PrivacyBudget budget(opt.epsilon, opt.delta);
  const double b_analytic = dpmc::solve_bound_analytic(budget);
  const double b_bisection = dpmc::solve_bound_bisection(budget);
  const std::string method = opt.epsilon == 0.0 ? "bisection" : "analytic";
  const double b = opt.epsilon == 0.0 ? b_bisection : b_analytic;
  const double sigma =
      opt.sensitivity * std::sqrt(static_cast<double>(opt.compositions)) / b;
  const double residual = std::abs(dpmc::g_eval(b, opt.epsilon) - opt.delta);

  if (opt.format == "csv") {
    std::ostringstream csv;
    csv << csv_config_line("calibrate", {{"epsilon", opt.epsilon},
                                         {"delta", opt.delta},
                                         {"sensitivity", opt.sensitivity},
                                         {"t", opt.compositions}});
    csv << "epsilon,delta,sensitivity,t,b,sigma,method,residual,b_analytic,"
           "b_bisection,solver_difference\n";
    csv << format_double(opt.epsilon) << "," << format_double(opt.delta) << ","
        << format_double(opt.sensitivity) << "," << opt.compositions << ","
        << format_double(b) << "," << format_double(sigma) << "," << method
        << "," << format_double(residual) << "," << format_double(b_analytic)
        << "," << format_double(b_bisection) << ","
        << format_double(std::abs(b_analytic - b_bisection)) << "\n";
    emit_text(csv.str(), opt.out_path);
    return 0;
  }
  json report{{"command", "calibrate"},
              {"version", dpmc::kVersion},
              {"config",
               {{"epsilon", opt.epsilon},
                {"delta", opt.delta},
                {"sensitivity", opt.sensitivity},
                {"t", opt.compositions},
                {"format", opt.format}}},
              {"epsilon", opt.epsilon},
              {"delta", opt.delta},
              {"t", opt.compositions},
              {"b", b},
              {"sigma", sigma},
              {"method", method},
              {"residual", residual},
              {"b_analytic", b_analytic},
              {"b_bisection", b_bisection},
              {"solver_difference", std::abs(b_analytic - b_bisection)}};
  emit_text(report.dump(2) + "\n", opt.out_path);
  return 0;
}

struct PerturbOptions {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;
  int compositions = 1;
  std::optional<std::uint64_t> seed;
  std::optional<int> rows;
  std::optional<int> cols;
  std::string in_path;
  std::string out_path;
  std::string format = "json";
};

int run_perturb(const PerturbOptions& opt) {
  const dpmc::RealMatrix input = dpmc::read_matrix_csv_file(opt.in_path);
  if ((opt.rows && *opt.rows != input.rows()) ||
      (opt.cols && *opt.cols != input.cols())) {
    throw std::domain_error("perturb: --rows/--cols do not match the input file");
  }
  const dpmc::MechanismSpec spec(opt.sensitivity, input.rows(), input.cols(),
                                 dpmc::PrivacyBudget(opt.epsilon, opt.delta),
                                 opt.compositions);
  const std::uint64_t seed = resolve_seed(opt.seed);
  dpmc::CounterRng rng(seed);
  const dpmc::RealMatrix output = dpmc::imgm_perturb(input, spec, rng);
  dpmc::write_matrix_csv_file(opt.out_path, output);

  const dpmc::PrivacyBound bound =
      dpmc::calibrate(opt.sensitivity, spec.budget, opt.compositions);
  json report{{"command", "perturb"},
              {"version", dpmc::kVersion},
              {"config",
               {{"epsilon", opt.epsilon},
                {"delta", opt.delta},
                {"sensitivity", opt.sensitivity},
                {"t", opt.compositions},
                {"seed", seed},
                {"in", opt.in_path},
                {"out", opt.out_path}}},
              {"epsilon", opt.epsilon},
              {"delta", opt.delta},
              {"t", opt.compositions},
              {"rows", input.rows()},
              {"cols", input.cols()},
              {"b", bound.b},
              {"sigma", bound.sigma}};
  std::cout << report.dump(2) << "\n";
  return 0;
}

struct DesignOptions {
  double epsilon = 0.0;
  double delta = 0.0;
  double sensitivity = 1.0;
  int compositions = 1;
  std::string w1_path;
  std::string w2_path;
  std::string format = "json";
  std::string out_path;
};

int run_design(const DesignOptions& opt) {
  const dpmc::RealMatrix w1 = dpmc::read_matrix_csv_file(opt.w1_path);
  const dpmc::RealMatrix w2 = dpmc::read_matrix_csv_file(opt.w2_path);
  const dpmc::MechanismSpec spec(opt.sensitivity, w1.cols(), w2.cols(),
                                 dpmc::PrivacyBudget(opt.epsilon, opt.delta),
                                 opt.compositions);
  const dpmc::DesignResult design =
      dpmc::optimal_design(dpmc::UtilitySubspace(w1, w2), spec);
  const dpmc::PrivacyBound bound =
      dpmc::calibrate(opt.sensitivity, spec.budget, opt.compositions);

  json report{{"command", "design"},
              {"version", dpmc::kVersion},
              {"config",
               {{"epsilon", opt.epsilon},
                {"delta", opt.delta},
                {"sensitivity", opt.sensitivity},
                {"t", opt.compositions},
                {"w1", opt.w1_path},
                {"w2", opt.w2_path}}},
              {"epsilon", opt.epsilon},
              {"delta", opt.delta},
              {"t", opt.compositions},
              {"b", bound.b},
              {"sigma", bound.sigma},
              {"u1_spectrum", design.cov.u1_spectrum()},
              {"u2_spectrum", design.cov.u2_spectrum()},
              {"objective", design.objective},
              {"minimum_formula", design.minimum_formula}};
  emit_text(report.dump(2) + "\n", opt.out_path);
  return 0;
}

struct CompareOptions {
  std::string eps_list = "1";
  double delta = 0.0;
  double sensitivity = 1.0;
  std::optional<double> gamma;
  std::string dim_list;
  int rows = 2;
  int cols = 2;
  std::string format = "csv";
  std::string out_path;
};

int run_compare(const CompareOptions& opt) {
  const std::vector<double> eps_values = parse_list(opt.eps_list);
  std::vector<std::pair<int, int>> shapes;
  if (!opt.dim_list.empty()) {
    for (double d : parse_list(opt.dim_list)) {
      shapes.emplace_back(static_cast<int>(d), static_cast<int>(d));
    }
  } else {
    shapes.emplace_back(opt.rows, opt.cols);
  }
  const double gamma = opt.gamma ? *opt.gamma : opt.sensitivity;

  json rows_json = json::array();
  std::ostringstream csv;
  csv << csv_config_line("compare", {{"eps", opt.eps_list},
                                     {"delta", opt.delta},
                                     {"sensitivity", opt.sensitivity},
                                     {"gamma", gamma},
                                     {"dims", opt.dim_list}});
  csv << "epsilon,m,n,imgm_sigma,mvg_sigma,ratio\n";
  for (const auto& [m, n] : shapes) {
    for (double eps : eps_values) {
      const dpmc::PrivacyBudget budget(eps, opt.delta);
      const double imgm_sigma = dpmc::calibrate(opt.sensitivity, budget, 1).sigma;
      const dpmc::MvgParams params(opt.sensitivity, gamma, m, n, budget);
      const double mvg_sigma =
          dpmc::mvg_iid_sigma(dpmc::mvg_singular_bound(params), m, n);
      const double ratio = mvg_sigma / imgm_sigma;
      csv << format_double(eps) << "," << m << "," << n << ","
          << format_double(imgm_sigma) << "," << format_double(mvg_sigma) << ","
          << format_double(ratio) << "\n";
      rows_json.push_back({{"epsilon", eps},
                           {"m", m},
                           {"n", n},
                           {"imgm_sigma", imgm_sigma},
                           {"mvg_sigma", mvg_sigma},
                           {"ratio", ratio}});
    }
  }
  if (opt.format == "json") {
    json report{{"command", "compare"},
                {"version", dpmc::kVersion},
                {"config",
                 {{"eps", opt.eps_list},
                  {"delta", opt.delta},
                  {"sensitivity", opt.sensitivity},
                  {"gamma", gamma},
                  {"dims", opt.dim_list}}},
                {"rows", rows_json}};
    emit_text(report.dump(2) + "\n", opt.out_path);
  } else {
    emit_text(csv.str(), opt.out_path);
  }
  return 0;
}

struct RdpOptions {
  std::string alphas = "1.5,2,4,8,16,32";
  std::optional<double> bound;
  std::optional<double> epsilon;
  std::optional<double> delta;
  std::string format = "csv";
  std::string out_path;
};

int run_rdp(const RdpOptions& opt) {
  double b = 0.0;
  if (opt.bound) {
    if (!(*opt.bound >= 0.0)) throw std::domain_error("rdp: bound must be >= 0");
    b = *opt.bound;
  } else if (opt.epsilon && opt.delta) {
    b = dpmc::solve_bound_analytic(dpmc::PrivacyBudget(*opt.epsilon, *opt.delta));
  } else {
    throw std::domain_error("rdp: provide --bound or both --eps and --delta");
  }
  const bool degenerate = b == 0.0;

  json rows_json = json::array();
  std::ostringstream csv;
  csv << csv_config_line("rdp", {{"alphas", opt.alphas}, {"b", b}});
  csv << "alpha,epsilon_prime,degenerate\n";
  for (double alpha : parse_list(opt.alphas)) {
    if (alpha <= 1.0) {
      std::cerr << "warning: skipping alpha=" << alpha
                << " (requires alpha > 1)\n";
      continue;
    }
    const dpmc::RdpPoint point = dpmc::rdp_epsilon(alpha, b);
    csv << format_double(alpha) << "," << format_double(point.epsilon_prime)
        << "," << (degenerate ? 1 : 0) << "\n";
    rows_json.push_back({{"alpha", alpha},
                         {"epsilon_prime", point.epsilon_prime},
                         {"degenerate", degenerate}});
  }
  if (opt.format == "json") {
    json report{{"command", "rdp"},
                {"version", dpmc::kVersion},
                {"config", {{"alphas", opt.alphas}, {"b", b}}},
                {"b", b},
                {"rows", rows_json}};
    emit_text(report.dump(2) + "\n", opt.out_path);
  } else {
    emit_text(csv.str(), opt.out_path);
  }
  return 0;
}

struct VerifyOptions {
  std::string suite = "all";
  int samples = 20000;
  std::optional<std::uint64_t> seed;
  double inject_scale = 1.0;
};

struct SuiteOutcome {
  bool ok = true;
  int checks = 0;

  void expect(bool condition) {
    ++checks;
    if (!condition) ok = false;
  }
};

bool suite_enabled(const VerifyOptions& opt, const std::string& name) {
  return opt.suite == "all" || opt.suite == name;
}

int run_verify(const VerifyOptions& opt) {
  const std::uint64_t seed = resolve_seed(opt.seed);
  bool all_ok = true;
  int ran = 0;

  const auto report = [&](const std::string& name, const SuiteOutcome& outcome,
                          const std::string& detail) {
    ++ran;
    all_ok = all_ok && outcome.ok;
    std::cout << (outcome.ok ? "ok   " : "FAIL ") << name << ": " << detail
              << " (" << outcome.checks << " checks)\n";
  };

  if (suite_enabled(opt, "profile")) {
    SuiteOutcome outcome;
    for (double eps : {0.01, 0.1, 1.0, 5.0}) {
      for (double delta : {1e-8, 1e-5, 1e-2}) {
        const dpmc::PrivacyBudget budget(eps, delta);
        const double b = dpmc::solve_bound_analytic(budget);
        for (int t : {1, 4, 64}) {
          const double sigma = std::sqrt(static_cast<double>(t)) / b;
          const double norm = 1.0 / sigma;
          const double achieved =
              dpmc::profile_delta({0.5 * norm * norm, t}, eps).delta_achieved.value();
          outcome.expect(std::abs(achieved - delta) <= 1e-9);
        }
      }
    }
    report("profile", outcome, "profile of calibrated noise returns delta");
  }

  if (suite_enabled(opt, "dp")) {
    SuiteOutcome outcome;
    const dpmc::PrivacyBudget budget(1.0, 1e-5);
    const double sigma = dpmc::calibrate(1.0, budget, 1).sigma;
    const double split = std::sqrt(sigma) * std::sqrt(opt.inject_scale);
    const dpmc::CovariancePair cov(
        split * dpmc::RealMatrix::identity(3),
        std::sqrt(sigma) * dpmc::RealMatrix::identity(3));
    const dpmc::DpCheckResult check = dpmc::check_dp(cov, 1.0, budget, 1);
    outcome.expect(check.holds);
    outcome.expect(check.slack >= -1e-12);
    outcome.expect(check.worst_case_delta <= budget.delta + 1e-9);

    std::mt19937_64 gen(seed + 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const int adversaries = std::max(50, opt.samples / 100);
    for (int trial = 0; trial < adversaries; ++trial) {
      dpmc::RealMatrix delta_mat(3, 3);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) delta_mat(i, j) = normal(gen);
      const double scale =
          unit(gen) / std::max(1e-12, dpmc::frobenius_norm(delta_mat));
      delta_mat = scale * delta_mat;
      const double achieved =
          dpmc::profile_delta(dpmc::privacy_loss_params(delta_mat, cov, 1),
                              budget.epsilon)
              .delta_achieved.value();
      outcome.expect(achieved <= budget.delta + 1e-9);
    }
    report("dp", outcome,
           outcome.ok ? "check_dp certificate and adversarial profiles"
                      : "check_dp certificate violated");
  }

  if (suite_enabled(opt, "singular")) {
    SuiteOutcome outcome;
    std::mt19937_64 gen(seed + 2);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 6);
    const int triples = std::max(100, opt.samples / 40);
    for (int trial = 0; trial < triples; ++trial) {
      const int m = dim(gen);
      const int n = dim(gen);
      const auto fill = [&](int r, int c) {
        dpmc::RealMatrix x(r, c);
        for (int i = 0; i < r; ++i)
          for (int j = 0; j < c; ++j) x(i, j) = normal(gen);
        return x;
      };
      const dpmc::SingularGap gap =
          dpmc::singular_inequality_gap(fill(m, m), fill(m, n), fill(n, n));
      outcome.expect(gap.lhs <= gap.rhs + 1e-9);
    }
    report("singular", outcome, "weighted norm bounded by paired spectra");
  }

  if (suite_enabled(opt, "design")) {
    SuiteOutcome outcome;
    std::mt19937_64 gen(seed + 3);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_int_distribution<int> dim(1, 3);
    const dpmc::PrivacyBudget budget(1.0, 1e-5);
    const double b = dpmc::solve_bound_analytic(budget);
    for (int trial = 0; trial < 20; ++trial) {
      const int m = dim(gen);
      const int n = dim(gen);
      dpmc::RealMatrix w1(dim(gen), m);
      dpmc::RealMatrix w2(dim(gen), n);
      for (auto& v : w1.data()) v = normal(gen);
      for (auto& v : w2.data()) v = normal(gen);
      const dpmc::UtilitySubspace sub(w1, w2);
      const dpmc::MechanismSpec spec(1.0, m, n, budget, 1);
      const dpmc::DesignResult design = dpmc::optimal_design(sub, spec);
      outcome.expect(std::abs(design.objective - design.minimum_formula) <=
                     1e-10 * std::max(1.0, design.minimum_formula));
      const double oracle = dpmc::design_grid_oracle(sub, 1.0, b, 12);
      outcome.expect(oracle >= design.minimum_formula - 1e-9);
      outcome.expect(design.minimum_formula <=
                     oracle + 1e-9 * std::max(1.0, oracle));
    }
    report("design", outcome, "closed-form design matches the grid search");
  }

  if (suite_enabled(opt, "sampler")) {
    SuiteOutcome outcome;
    dpmc::RealMatrix u1(2, 2, 0.0);
    u1(0, 0) = 2.0;
    u1(1, 1) = 1.0;
    const dpmc::CovariancePair cov(u1, dpmc::RealMatrix::identity(2));
    dpmc::CounterRng rng(seed + 4);
    const int samples = std::max(10000, opt.samples);
    double acc[4][4] = {};
    const dpmc::RealMatrix mean(2, 2, 0.0);
    for (int s = 0; s < samples; ++s) {
      const dpmc::RealMatrix z = dpmc::sample_matrix_normal(mean, cov, rng);
      const double v[4] = {z(0, 0), z(1, 0), z(0, 1), z(1, 1)};
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) acc[i][j] += v[i] * v[j];
    }
    const double want[4] = {4.0, 1.0, 4.0, 1.0};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const double got = acc[i][j] / samples;
        const double expected = i == j ? want[i] : 0.0;
        const double se =
            std::sqrt((want[i] * want[j] + expected * expected) / samples);
        outcome.expect(std::abs(got - expected) <= 5.0 * se);
      }
    }
    report("sampler", outcome, "vec-covariance matches the Kronecker law");
  }

  if (suite_enabled(opt, "error")) {
    SuiteOutcome outcome;
    std::mt19937_64 gen(seed + 5);
    std::normal_distribution<double> normal(0.0, 1.0);
    dpmc::RealMatrix w1(2, 3);
    dpmc::RealMatrix w2(2, 2);
    for (auto& v : w1.data()) v = normal(gen);
    for (auto& v : w2.data()) v = normal(gen);
    dpmc::RealMatrix u1(3, 3, 0.0);
    dpmc::RealMatrix u2(2, 2, 0.0);
    for (int i = 0; i < 3; ++i) u1(i, i) = 0.5 + 0.5 * i;
    for (int i = 0; i < 2; ++i) u2(i, i) = 1.0 + 0.3 * i;
    const dpmc::CovariancePair cov(u1, u2);
    const dpmc::UtilitySubspace sub(w1, w2);
    dpmc::CounterRng rng(seed + 6);
    const dpmc::MonteCarloEstimate mc = dpmc::monte_carlo_expected_error(
        sub, cov, std::max(1000, opt.samples), rng);
    outcome.expect(std::abs(mc.mean - dpmc::expected_error(sub, cov)) <=
                   4.0 * mc.std_error);
    report("error", outcome, "Monte Carlo agrees with the separable identity");
  }

  if (ran == 0) {
    throw std::domain_error("verify: unknown suite '" + opt.suite + "'");
  }
  std::cout << (all_ok ? "verify: all suites passed\n"
                       : "verify: at least one suite FAILED\n");
  return all_ok ? 0 : kExitVerifyFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Matrix-valued differential privacy: calibration and design"};
  app.require_subcommand(1);

  CalibrateOptions calibrate_opt;
  CLI::App* calibrate_cmd =
      app.add_subcommand("calibrate", "Solve the noise bound for a budget");
  calibrate_cmd->add_option("--eps", calibrate_opt.epsilon, "privacy epsilon")
      ->required();
  calibrate_cmd->add_option("--delta", calibrate_opt.delta, "privacy delta")
      ->required();
  calibrate_cmd->add_option("--sensitivity", calibrate_opt.sensitivity,
                            "l2-sensitivity of the query");
  calibrate_cmd->add_option("-T,--compositions", calibrate_opt.compositions,
                            "number of composed mechanism runs");
  calibrate_cmd->add_option("--format", calibrate_opt.format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));
  calibrate_cmd->add_option("--out", calibrate_opt.out_path,
                            "also write the report to this path");

  PerturbOptions perturb_opt;
  CLI::App* perturb_cmd =
      app.add_subcommand("perturb", "Add calibrated noise to a matrix file");
  perturb_cmd->add_option("--eps", perturb_opt.epsilon, "privacy epsilon")
      ->required();
  perturb_cmd->add_option("--delta", perturb_opt.delta, "privacy delta")
      ->required();
  perturb_cmd->add_option("--sensitivity", perturb_opt.sensitivity,
                          "l2-sensitivity of the query");
  perturb_cmd->add_option("-T,--compositions", perturb_opt.compositions,
                          "number of composed mechanism runs");
  perturb_cmd->add_option("--seed", perturb_opt.seed,
                          "RNG seed (falls back to DPMC_SEED, then 0)");
  perturb_cmd->add_option("--rows", perturb_opt.rows, "expected row count");
  perturb_cmd->add_option("--cols", perturb_opt.cols, "expected column count");
  perturb_cmd->add_option("--in", perturb_opt.in_path, "input matrix file")
      ->required();
  perturb_cmd->add_option("--out", perturb_opt.out_path, "output matrix file")
      ->required();

  DesignOptions design_opt;
  CLI::App* design_cmd = app.add_subcommand(
      "design", "Error-minimizing covariance factors for a utility subspace");
  design_cmd->add_option("--eps", design_opt.epsilon, "privacy epsilon")
      ->required();
  design_cmd->add_option("--delta", design_opt.delta, "privacy delta")
      ->required();
  design_cmd->add_option("--sensitivity", design_opt.sensitivity,
                         "l2-sensitivity of the query");
  design_cmd->add_option("-T,--compositions", design_opt.compositions,
                         "number of composed mechanism runs");
  design_cmd->add_option("--w1", design_opt.w1_path, "row weights matrix file")
      ->required();
  design_cmd
      ->add_option("--w2", design_opt.w2_path, "column weights matrix file")
      ->required();
  design_cmd->add_option("--format", design_opt.format, "json")
      ->check(CLI::IsMember({"json"}));
  design_cmd->add_option("--out", design_opt.out_path,
                         "also write the report to this path");

  CompareOptions compare_opt;
  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "Per-element noise of this mechanism vs the MVG comparator");
  compare_cmd->add_option("--eps", compare_opt.eps_list,
                          "epsilon or comma-separated sweep");
  compare_cmd->add_option("--delta", compare_opt.delta, "privacy delta")
      ->required();
  compare_cmd->add_option("--sensitivity", compare_opt.sensitivity,
                          "l2-sensitivity of the query");
  compare_cmd->add_option("--gamma", compare_opt.gamma,
                          "comparator norm cap (defaults to the sensitivity)");
  compare_cmd->add_option("--dims", compare_opt.dim_list,
                          "comma-separated square dimension sweep");
  compare_cmd->add_option("--rows", compare_opt.rows, "row count");
  compare_cmd->add_option("--cols", compare_opt.cols, "column count");
  compare_cmd->add_option("--format", compare_opt.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  compare_cmd->add_option("--out", compare_opt.out_path,
                          "also write the table to this path");

  VerifyOptions verify_opt;
  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Run the verification suites");
  verify_cmd->add_option("--suite", verify_opt.suite,
                         "all, profile, dp, singular, design, sampler, error");
  verify_cmd->add_option("--samples", verify_opt.samples,
                         "Monte Carlo sample count");
  verify_cmd->add_option("--seed", verify_opt.seed,
                         "RNG seed (falls back to DPMC_SEED, then 0)");
  verify_cmd->add_option("--inject-scale", verify_opt.inject_scale,
                         "scale the dp-suite row factor (for failure drills)");

  RdpOptions rdp_opt;
  CLI::App* rdp_cmd =
      app.add_subcommand("rdp", "Renyi guarantees over an order sweep");
  rdp_cmd->add_option("--alphas", rdp_opt.alphas, "comma-separated orders");
  rdp_cmd->add_option("--bound", rdp_opt.bound, "noise bound B");
  rdp_cmd->add_option("--eps", rdp_opt.epsilon, "privacy epsilon");
  rdp_cmd->add_option("--delta", rdp_opt.delta, "privacy delta");
  rdp_cmd->add_option("--format", rdp_opt.format, "csv or json")
      ->check(CLI::IsMember({"json", "csv"}));
  rdp_cmd->add_option("--out", rdp_opt.out_path,
                      "also write the table to this path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitBadConfig;
  }

  try {
    if (*calibrate_cmd) return run_calibrate(calibrate_opt);
    if (*perturb_cmd) return run_perturb(perturb_opt);
    if (*design_cmd) return run_design(design_opt);
    if (*compare_cmd) return run_compare(compare_opt);
    if (*verify_cmd) return run_verify(verify_opt);
    if (*rdp_cmd) return run_rdp(rdp_opt);
  } catch (const dpmc::DegenerateSubspaceError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitDegenerateSubspace;
  } catch (const dpmc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFileError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitBadConfig;
  }
  return 0;
}
