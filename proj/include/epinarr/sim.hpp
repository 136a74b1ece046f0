#ifndef EPINARR_SIM_HPP
#define EPINARR_SIM_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "epinarr/model.hpp"

namespace epinarr {

struct SimConfig {
  double tEnd = 1.0;
  double dt = 0.01;          // ODE step
  double outputEvery = 0.0;  // 0 = dt for ODE, tEnd/1000 for SSA
  int replicates = 1;        // SSA only
  std::uint64_t seed = 0;    // SSA only
};

/// Time-indexed species amounts. Times are strictly increasing and start
/// at 0; each row carries one amount per entry of speciesOrder.
struct Trajectory {
  std::vector<std::string> speciesOrder;  // global ids, systemEquation order
  struct Row {
    double time = 0.0;
    std::vector<double> amounts;

    bool operator==(const Row&) const = default;
  };
  std::vector<Row> rows;

  bool operator==(const Trajectory&) const = default;
};

/// Classic fixed-step RK4 over dx/dt = S f(x), S the stoichiometry matrix
/// and f the kinetic laws under parameters + current amounts. Integration
/// stops exactly at each event trigger, applies its assignments and
/// resumes. Rows at multiples of outputEvery plus t = 0 and tEnd; an event
/// landing on a sample time applies before the row is recorded.
/// Throws ValidationFailed, NumericalBlowup.
Trajectory simulate_ode(const Model& model, const SimConfig& cfg);

/// Gillespie direct method, one trajectory per replicate. Propensities are
/// the kinetic laws at the integer state, clamped to 0 when negative or
/// when a reactant count is below its stoichiometry. Replicate r draws
/// from mt19937_64 seeded with splitmix64(seed, r), so runs are
/// reproducible and replicates independent.
/// Throws ValidationFailed, NonIntegerInitialAmount, NumericalBlowup.
std::vector<Trajectory> simulate_ssa(const Model& model, const SimConfig& cfg);

/// Pointwise mean over replicates sharing one sample grid.
Trajectory mean_trajectory(const std::vector<Trajectory>& replicates);

/// Header "time,<id>,..." then one row per sample, shortest round-trippable
/// decimals, \n line endings.
std::string trajectory_to_csv(const Trajectory& traj);
void write_trajectory_csv(const Trajectory& traj, std::ostream& out);
/// File overload; throws IoError with the path on failure.
void write_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace epinarr

#endif
