#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "srwa/benders.hpp"
#include "srwa/formulation.hpp"
#include "srwa/solver.hpp"
#include "srwa/traffic.hpp"

namespace srwa {

struct SaaConfig {
  int level = 10;         // scenarios per SAA problem
  int repetitions = 10;   // independent SAA problems
  int eval_size = 1000;   // scenarios of the evaluation sample
  std::uint64_t seed = 1;
  double confidence = 0.95;
  // Evaluate with integer recourse instead of its LP relaxation.
  bool exact_recourse = false;
  int threads = 1;

  void validate() const;
};

struct SaaReport {
  int level = 0;
  int repetitions = 0;
  double ub_mean = 0.0;
  double ub_width = 0.0;  // CI half-width
  double lb_mean = 0.0;
  double lb_width = 0.0;
  double gap_pct = 0.0;
  std::vector<double> ub_values;  // SAA optima of the finished repetitions
  std::vector<double> lb_values;  // evaluation mean per finished repetition
  int best_repetition = -1;       // source of the lower bound
  std::vector<int> timed_out;     // repetitions excluded for hitting the time limit
};

// Objective of a fixed first stage on each scenario: first-stage value plus
// the recourse optimum.
std::vector<double> evaluate_first_stage(const FormulationSpec& spec, double first_stage_value,
                                         const WavelinkLoad& load, const std::vector<DemandMatrix>& scenarios,
                                         bool integer_recourse, const SolverBackend& backend = reference_backend(),
                                         int threads = 1);

// Upper bound from the mean of `repetitions` SAA optima, lower bound from the
// best evaluated first stage on an independent sample. `base` supplies the
// problem, relaxation, state and first-stage demand; its scenarios are ignored.
SaaReport saa_analysis(const FormulationSpec& base, const TrafficParams& traffic, const SaaConfig& config,
                       const BendersConfig& benders = {}, const SolverConfig& solver = {},
                       const SolverBackend& backend = reference_backend());

struct EvssReport {
  double evss = 0.0;
  double sigma_det = 0.0;
  double stochastic_objective = 0.0;
  double deterministic_mean = 0.0;
  std::vector<double> deterministic_values;  // per scenario, in sample order
};

// Stochastic optimum over spec.scenarios minus the mean in-sample value of
// the single-scenario solutions.
EvssReport evss(const FormulationSpec& spec, const BendersConfig& benders = {}, const SolverConfig& solver = {},
                const SolverBackend& backend = reference_backend(), int threads = 1);

// level,repetitions,ub_mean,ub_width,lb_mean,lb_width,gap_pct,timed_out
void write_saa_csv(std::ostream& out, const std::vector<SaaReport>& reports);
// label,evss,sigma_det,stochastic_objective,deterministic_mean
void write_evss_csv(std::ostream& out, const std::vector<std::pair<std::string, EvssReport>>& reports);

}  // namespace srwa
