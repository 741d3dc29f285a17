#pragma once

#include <span>
#include <vector>

#include "srwa/lp_model.hpp"
#include "srwa/topology.hpp"
#include "srwa/traffic.hpp"

namespace srwa {

enum class Problem { kMaxRwa, kMinRwa, kSmaxRwa, kSmaxLr };
enum class Relaxation { kIpIp, kIpLp, kLpLp };

std::string to_string(Problem p);
std::string to_string(Relaxation r);
Problem problem_from_string(const std::string& s);
Relaxation relaxation_from_string(const std::string& s);

// Everything a builder needs. maxRWA/SmaxRWA provision `new_demand` on the
// wavelinks that are free in `state`; minRWA/SmaxLR reroute `current_demand`
// over the whole network.
struct FormulationSpec {
  Problem problem = Problem::kMaxRwa;
  Relaxation relaxation = Relaxation::kIpLp;
  NetworkState state;
  DemandMatrix new_demand;
  DemandMatrix current_demand;
  ScenarioSample scenarios;

  const Topology& topology() const { return state.topology(); }
  // Demand of the first stage: new or current depending on the problem.
  const DemandMatrix& first_stage_demand() const;
  // Whether (arc, w) may carry first- or second-stage flow.
  bool available(ArcId arc, Wavelength w) const;
  // Number of wavelengths on which `arc` is available.
  int arc_capacity(ArcId arc) const;
  bool rerouting() const { return problem == Problem::kMinRwa || problem == Problem::kSmaxLr; }
};

// Per wavelink (index w * |L| + arc) sum over pairs of first-stage x.
using WavelinkLoad = std::vector<double>;

// First stage alone: conflict, flow and demand rows over x. Columns for arcs
// entering the source or leaving the destination are never created.
LpModel build_first_stage(const FormulationSpec& spec);

// Recourse problem for fixed first-stage load: capacity rows
// sum y <= 1 - load, flow, demand and grant rows. Integer recourse when
// `integer` is set, otherwise continuous. Throws ModelError when some load
// exceeds one.
LpModel build_recourse(const FormulationSpec& spec, const WavelinkLoad& load, const DemandMatrix& xi,
                       bool integer = false);

// Conflict-free relaxation of the recourse: per-arc capacity
// sum_w sum_sd y <= capacity(arc) - arc_load, per-wavelink unit rows, and the
// flow, demand and grant rows of the recourse.
LpModel build_relaxed_recourse(const FormulationSpec& spec, std::span<const double> arc_load,
                               const DemandMatrix& xi);

// First stage plus one recourse block and one eta column per scenario, eta
// weighted by 1 / |scenarios|. IP-IP keeps recourse integral, IP-LP relaxes
// y and z, LP-LP also relaxes x.
LpModel build_extensive(const FormulationSpec& spec);

WavelinkLoad wavelink_load(const FormulationSpec& spec, const LpModel& model,
                           std::span<const double> values);
std::vector<double> arc_load(const FormulationSpec& spec, const WavelinkLoad& load);

// Objective contribution of the x columns only.
double first_stage_value(const LpModel& model, std::span<const double> values);

// Splits an integral first-stage flow into lightpaths, always following the
// smallest arc id available; cycles in the support are discarded.
std::vector<Lightpath> decode_first_stage(const FormulationSpec& spec, const LpModel& model,
                                          std::span<const double> values);

// Optimal recourse value (LP, or MIP when `integer`).
double recourse_value(const FormulationSpec& spec, const WavelinkLoad& load, const DemandMatrix& xi,
                      bool integer = false);

}  // namespace srwa
