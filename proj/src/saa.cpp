#include "srwa/saa.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "srwa/error.hpp"
#include "srwa/parallel.hpp"
#include "srwa/stats.hpp"

namespace srwa {

void SaaConfig::validate() const {
  if (level < 1) throw ConfigError("SAA level must be at least 1");
  if (repetitions < 2) throw ConfigError("SAA needs at least two repetitions");
  if (eval_size < 2) throw ConfigError("SAA evaluation sample needs at least two scenarios");
  if (!(confidence > 0.0 && confidence < 1.0)) throw ConfigError("confidence must lie in (0, 1)");
  if (threads < 1) throw ConfigError("threads must be at least 1");
}

std::vector<double> evaluate_first_stage(const FormulationSpec& spec, double first_stage_value,
                                         const WavelinkLoad& load, const std::vector<DemandMatrix>& scenarios,
                                         bool integer_recourse, const SolverBackend& backend, int threads) {
  std::vector<double> out(scenarios.size(), first_stage_value);
  parallel_for(static_cast<int>(scenarios.size()), threads, [&](int k) {
    if (scenarios[k].empty()) return;
    const LpModel m = build_recourse(spec, load, scenarios[k], integer_recourse);
    double value = 0.0;
    if (integer_recourse) {
      const MipSolution s = backend.solve_mip(m, {}, {});
      if (s.status != MipStatus::kOptimal) throw SolverError("recourse MIP not optimal");
      value = s.objective;
    } else {
      const LpSolution s = backend.solve_lp(m, {});
      if (s.status != LpStatus::kOptimal) throw SolverError("recourse LP not optimal");
      value = s.objective;
    }
    out[k] += value;
  });
  return out;
}

namespace {

bool integer_evaluation(const FormulationSpec& spec, bool exact) {
  return exact || spec.relaxation == Relaxation::kIpIp;
}

}  // namespace

SaaReport saa_analysis(const FormulationSpec& base, const TrafficParams& traffic, const SaaConfig& config,
                       const BendersConfig& benders, const SolverConfig& solver, const SolverBackend& backend) {
  config.validate();
  traffic.validate();
  const Topology& topo = base.topology();
  const int n = config.repetitions;
  const bool integer = integer_evaluation(base, config.exact_recourse);

  std::vector<SolveResult> solved(n);
  parallel_for(n, config.threads, [&](int i) {
    FormulationSpec spec = base;
    spec.scenarios = sample_scenarios(traffic, topo, config.level,
                                      derive_seed(config.seed, {stream_label("saa"), std::uint64_t(i)}));
    solved[i] = solve(spec, benders, solver, backend);
  });

  const ScenarioSample eval =
      sample_scenarios(traffic, topo, config.eval_size, derive_seed(config.seed, {stream_label("saa-eval")}));

  SaaReport report;
  report.level = config.level;
  report.repetitions = n;
  std::vector<std::vector<double>> eval_values;
  std::vector<int> finished;
  for (int i = 0; i < n; ++i) {
    if (solved[i].status == MipStatus::kOptimal) {
      finished.push_back(i);
    } else if (solved[i].status == MipStatus::kTimeLimit) {
      report.timed_out.push_back(i);
    } else {
      throw SolverError("SAA repetition " + std::to_string(i) + " ended " + to_string(solved[i].status));
    }
  }
  if (finished.size() < 2) throw SolverError("fewer than two SAA repetitions finished");
  for (int i : finished) {
    report.ub_values.push_back(solved[i].objective);
    eval_values.push_back(evaluate_first_stage(base, solved[i].first_stage_value, solved[i].load, eval.scenarios,
                                               integer, backend, config.threads));
    report.lb_values.push_back(mean(eval_values.back()));
  }
  const auto best = std::max_element(report.lb_values.begin(), report.lb_values.end()) - report.lb_values.begin();
  report.best_repetition = finished[best];
  report.ub_mean = mean(report.ub_values);
  report.ub_width = t_half_width(report.ub_values, config.confidence);
  report.lb_mean = report.lb_values[best];
  report.lb_width = t_half_width(eval_values[best], config.confidence);
  // Worst case over both intervals, relative to the upper end.
  const double hi = report.ub_mean + report.ub_width;
  const double lo = report.lb_mean - report.lb_width;
  report.gap_pct = std::max(0.0, hi - lo) / std::max(1.0, std::abs(hi)) * 100.0;
  return report;
}

EvssReport evss(const FormulationSpec& spec, const BendersConfig& benders, const SolverConfig& solver,
                const SolverBackend& backend, int threads) {
  const auto& scenarios = spec.scenarios.scenarios;
  const int n = static_cast<int>(scenarios.size());
  if (n < 2) throw ConfigError("EVSS needs at least two scenarios");
  const bool integer = integer_evaluation(spec, false);

  const SolveResult stochastic = solve(spec, benders, solver, backend);
  if (stochastic.status != MipStatus::kOptimal) {
    throw SolverError("stochastic problem ended " + to_string(stochastic.status));
  }

  EvssReport report;
  report.stochastic_objective = stochastic.objective;
  report.deterministic_values.assign(n, 0.0);
  parallel_for(n, threads, [&](int k) {
    FormulationSpec single = spec;
    single.scenarios.scenarios = {scenarios[k]};
    const SolveResult r = solve(single, benders, solver, backend);
    if (r.status != MipStatus::kOptimal) {
      throw SolverError("single-scenario problem " + std::to_string(k) + " ended " + to_string(r.status));
    }
    report.deterministic_values[k] =
        mean(evaluate_first_stage(spec, r.first_stage_value, r.load, scenarios, integer, backend));
  });
  report.deterministic_mean = mean(report.deterministic_values);
  report.sigma_det = sample_std(report.deterministic_values);
  report.evss = report.stochastic_objective - report.deterministic_mean;
  return report;
}

void write_saa_csv(std::ostream& out, const std::vector<SaaReport>& reports) {
  out << "level,repetitions,ub_mean,ub_width,lb_mean,lb_width,gap_pct,timed_out\n";
  for (const auto& r : reports) {
    out << r.level << ',' << r.repetitions << ',' << r.ub_mean << ',' << r.ub_width << ',' << r.lb_mean << ','
        << r.lb_width << ',' << r.gap_pct << ',' << r.timed_out.size() << '\n';
  }
}

void write_evss_csv(std::ostream& out, const std::vector<std::pair<std::string, EvssReport>>& reports) {
  out << "label,evss,sigma_det,stochastic_objective,deterministic_mean\n";
  for (const auto& [label, r] : reports) {
    out << label << ',' << r.evss << ',' << r.sigma_det << ',' << r.stochastic_objective << ','
        << r.deterministic_mean << '\n';
  }
}

}  // namespace srwa
