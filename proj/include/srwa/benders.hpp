#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "srwa/formulation.hpp"
#include "srwa/solver.hpp"

namespace srwa {

enum class Method { kExtensive, kBendersX, kBendersXBeta };
std::string to_string(Method m);
Method method_from_string(const std::string& s);

struct BendersConfig {
  Method method = Method::kBendersXBeta;
  bool preprocess_lp_lp = true;
  bool separate_beta_at_fractional = true;
  // Off: only beta-cuts are separated, which solves the relaxed master.
  bool separate_x_cuts = true;
  double tol_cut = 1e-5;

  // BENDERS_x never separates beta-cuts.
  BendersConfig normalized() const;
  void validate() const;
};

enum class CutFamily { kX, kBeta };
std::string to_string(CutFamily f);

// eta_scenario <= constant + sum coef * v, where v is the wavelink load
// (x-cut, index w * |L| + arc) or the per-arc load (beta-cut, index arc).
struct Cut {
  CutFamily family = CutFamily::kX;
  int scenario = 0;
  double constant = 0.0;
  std::vector<std::pair<int, double>> coefficients;
  // Subproblem optimum at the separation point.
  double subproblem_value = 0.0;
  // Load at which the cut was generated, indexed like the coefficients.
  std::vector<double> point;

  double rhs(std::span<const double> point) const;
  // Right-hand side at a first-stage wavelink load (beta-cuts aggregate it per arc).
  double rhs_at_load(const WavelinkLoad& load, int num_arcs) const;
};

// Append-only, rejects cuts identical to one already held.
class CutPool {
 public:
  bool add(const Cut& cut);
  const std::vector<Cut>& cuts() const { return cuts_; }
  int count(CutFamily f) const { return f == CutFamily::kX ? n_x_ : n_beta_; }
  std::size_t size() const { return cuts_.size(); }

 private:
  std::vector<Cut> cuts_;
  std::unordered_set<std::uint64_t> seen_;
  int n_x_ = 0;
  int n_beta_ = 0;
};

// First stage plus eta per scenario (bounded by the scenario's total demand)
// and, optionally, per-arc usage columns beta = sum x.
struct MasterProblem {
  LpModel model;
  std::vector<int> eta_cols;
  std::vector<int> beta_cols;                   // empty without beta
  std::vector<std::vector<int>> x_by_wavelink;  // wavelink -> x columns
  int num_arcs = 0;

  CutRow to_row(const Cut& cut) const;
};

MasterProblem build_master(const FormulationSpec& spec, bool with_beta);

// Cut from the recourse LP at `load`, whether violated or not.
Cut make_x_cut(const FormulationSpec& spec, const WavelinkLoad& load, int scenario,
               const SolverBackend& backend = reference_backend());
// Cut from the relaxed recourse LP at the per-arc load.
Cut make_beta_cut(const FormulationSpec& spec, std::span<const double> arc_load, int scenario,
                  const SolverBackend& backend = reference_backend());

// Cut when eta_hat exceeds the subproblem optimum by more than tol_cut.
std::optional<Cut> separate_x_cut(const FormulationSpec& spec, const WavelinkLoad& load, double eta_hat,
                                  int scenario, double tol_cut = 1e-5,
                                  const SolverBackend& backend = reference_backend());
std::optional<Cut> separate_beta_cut(const FormulationSpec& spec, std::span<const double> arc_load,
                                     double eta_hat, int scenario, double tol_cut = 1e-5,
                                     const SolverBackend& backend = reference_backend());

struct PreprocessResult {
  CutPool pool;
  double lp_value = 0.0;  // final LP value of the relaxed master
  int rounds = 0;
  bool complete = true;  // false when stopped by the time limit
};

// Beta-cut loop on the LP relaxation of the relaxed master until no
// scenario yields a violated cut.
PreprocessResult preprocess_lp_lp(const FormulationSpec& spec, const BendersConfig& config,
                                  const SolverConfig& solver = {},
                                  const SolverBackend& backend = reference_backend());

struct SolveResult {
  Method method = Method::kBendersXBeta;
  MipStatus status = MipStatus::kInfeasible;
  double objective = 0.0;
  double bound = 0.0;
  double gap = 0.0;
  double first_stage_value = 0.0;
  std::vector<double> eta;
  std::vector<Lightpath> first_stage;
  WavelinkLoad load;
  int n_x_cuts = 0;
  int n_beta_cuts = 0;
  long nodes = 0;
  double seconds = 0.0;
  std::vector<Cut> cuts;

  // {method, time_s, gap_pct, n_beta_cuts, n_x_cuts, objective}
  nlohmann::json stats() const;
};

// IP-LP (or, for EXTENSIVE, also IP-IP) solve of the sampled problem. With no
// scenarios this is the deterministic first-stage problem.
SolveResult solve(const FormulationSpec& spec, const BendersConfig& config, const SolverConfig& solver = {},
                  const SolverBackend& backend = reference_backend());

}  // namespace srwa
