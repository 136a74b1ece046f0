#include "epinarr/sim.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <ostream>
#include <random>
#include <sstream>

#include "epinarr/analysis.hpp"
#include "epinarr/errors.hpp"
#include "epinarr/numfmt.hpp"

namespace epinarr {

namespace {

constexpr double kBlowupLimit = 1e300;

// An expression with its leaves resolved to state/parameter slots, so the
// hot loop never touches symbol tables.
struct CompiledExpr {
  enum class K { Const, Species, Param, Add, Sub, Mul, Div, Pow };
  K k = K::Const;
  double value = 0.0;
  int slot = 0;
  std::unique_ptr<CompiledExpr> lhs, rhs;

  double eval(const std::vector<double>& state,
              const std::vector<double>& params) const {
    switch (k) {
      case K::Const: return value;
      case K::Species: return state[static_cast<size_t>(slot)];
      case K::Param: return params[static_cast<size_t>(slot)];
      default: {
        const double l = lhs->eval(state, params);
        const double r = rhs->eval(state, params);
        double v = 0.0;
        switch (k) {
          case K::Add: v = l + r; break;
          case K::Sub: v = l - r; break;
          case K::Mul: v = l * r; break;
          case K::Div:
            if (r == 0.0) throw DivisionByZero();
            v = l / r;
            break;
          case K::Pow: v = std::pow(l, r); break;
          default: break;
        }
        if (!std::isfinite(v)) throw NonFiniteResult();
        return v;
      }
    }
  }
};

// The model lowered to plain arrays: state vector in systemEquation order,
// parameter vector in declaration order, per-reaction compiled laws and
// integer stoichiometry.
struct Engine {
  std::vector<std::string> speciesIds;
  std::vector<double> initialState;
  std::vector<double> params;

  std::vector<CompiledExpr> laws;                    // one per reaction
  std::vector<std::vector<int>> net;                 // [reaction][species]
  std::vector<std::vector<std::pair<int, int>>> req; // reactant (slot, stoich)

  struct CompiledEvent {
    double time = 0.0;
    // (isSpecies, slot, value)
    struct Assignment {
      bool isSpecies = false;
      int slot = 0;
      CompiledExpr value;
    };
    std::vector<Assignment> assignments;
  };
  std::vector<CompiledEvent> events;  // sorted by time
};

CompiledExpr compile_expr(const ExprPtr& e, const SymbolScope& scope,
                          const std::unordered_map<std::string, int>& paramSlot) {
  CompiledExpr out;
  switch (e->op) {
    case Expr::Op::Number:
      out.k = CompiledExpr::K::Const;
      out.value = e->number;
      return out;
    case Expr::Op::Symbol: {
      if (auto it = scope.species.find(e->symbol); it != scope.species.end()) {
        out.k = CompiledExpr::K::Species;
        out.slot = it->second;
        return out;
      }
      if (auto it = paramSlot.find(e->symbol); it != paramSlot.end()) {
        out.k = CompiledExpr::K::Param;
        out.slot = it->second;
        return out;
      }
      if (auto it = scope.constants.find(e->symbol);
          it != scope.constants.end()) {
        out.k = CompiledExpr::K::Const;  // an evaluated location size
        out.value = it->second;
        return out;
      }
      throw UnboundSymbol(e->symbol);
    }
    default: {
      switch (e->op) {
        case Expr::Op::Add: out.k = CompiledExpr::K::Add; break;
        case Expr::Op::Sub: out.k = CompiledExpr::K::Sub; break;
        case Expr::Op::Mul: out.k = CompiledExpr::K::Mul; break;
        case Expr::Op::Div: out.k = CompiledExpr::K::Div; break;
        default: out.k = CompiledExpr::K::Pow; break;
      }
      out.lhs = std::make_unique<CompiledExpr>(
          compile_expr(e->lhs, scope, paramSlot));
      out.rhs = std::make_unique<CompiledExpr>(
          compile_expr(e->rhs, scope, paramSlot));
      return out;
    }
  }
}

Engine build_engine(const Model& model) {
  {
    const auto issues = validate(model);
    if (has_errors(issues)) {
      std::string what;
      for (const auto& i : issues) {
        if (i.severity != Severity::Error) continue;
        if (!what.empty()) what += "; ";
        what += i.detail;
      }
      throw ValidationFailed(what);
    }
  }

  Engine eng;
  const SymbolScope scope = make_symbol_scope(model);
  std::unordered_map<std::string, int> paramSlot;
  for (const auto& p : model.parameters) {
    paramSlot.emplace(p.name, static_cast<int>(eng.params.size()));
    eng.params.push_back(p.value);
  }

  std::unordered_map<std::string, int> speciesSlot;
  for (const auto& inst : model.systemEquation) {
    speciesSlot.emplace(inst.global_id(),
                        static_cast<int>(eng.speciesIds.size()));
    eng.speciesIds.push_back(inst.global_id());
    eng.initialState.push_back(inst.initialAmount);
  }

  const auto reactions = derive_reactions(model);
  const size_t n = eng.speciesIds.size();
  for (const auto& r : reactions) {
    eng.laws.push_back(compile_expr(r.kineticLaw, scope, paramSlot));
    std::vector<int> net(n, 0);
    std::vector<std::pair<int, int>> req;
    for (const auto& [id, k] : r.reactants) {
      const int slot = speciesSlot.at(id);
      net[static_cast<size_t>(slot)] -= k;
      req.emplace_back(slot, k);
    }
    for (const auto& [id, k] : r.products)
      net[static_cast<size_t>(speciesSlot.at(id))] += k;
    eng.net.push_back(std::move(net));
    eng.req.push_back(std::move(req));
  }

  for (const auto& ev : model.events) {
    Engine::CompiledEvent ce;
    ce.time = ev.triggerTime;
    for (const auto& a : ev.assignments) {
      Engine::CompiledEvent::Assignment ca;
      if (auto it = speciesSlot.find(a.target); it != speciesSlot.end()) {
        ca.isSpecies = true;
        ca.slot = it->second;
      } else {
        ca.isSpecies = false;
        ca.slot = paramSlot.at(a.target);
      }
      ca.value = compile_expr(a.value, scope, paramSlot);
      ce.assignments.push_back(std::move(ca));
    }
    eng.events.push_back(std::move(ce));
  }
  std::stable_sort(eng.events.begin(), eng.events.end(),
                   [](const auto& a, const auto& b) { return a.time < b.time; });
  return eng;
}

// All assignments read the pre-event environment, then write at once.
void apply_event(const Engine::CompiledEvent& ev, std::vector<double>& state,
                 std::vector<double>& params) {
  std::vector<double> values;
  values.reserve(ev.assignments.size());
  for (const auto& a : ev.assignments) values.push_back(a.value.eval(state, params));
  for (size_t i = 0; i < ev.assignments.size(); ++i) {
    const auto& a = ev.assignments[i];
    (a.isSpecies ? state : params)[static_cast<size_t>(a.slot)] = values[i];
  }
}

double resolved_output_every(const SimConfig& cfg, bool ode) {
  if (cfg.outputEvery > 0.0) return cfg.outputEvery;
  return ode ? cfg.dt : cfg.tEnd / 1000.0;
}

void check_config(const SimConfig& cfg, double outputEvery, bool ode) {
  if (!(cfg.tEnd > 0.0)) throw ConfigError("tEnd must be positive");
  if (ode && !(cfg.dt > 0.0)) throw ConfigError("dt must be positive");
  if (!(outputEvery > 0.0)) throw ConfigError("outputEvery must be positive");
  if (ode && cfg.dt > outputEvery * (1.0 + 1e-12))
    throw ConfigError("dt must not exceed outputEvery");
  if (outputEvery > cfg.tEnd * (1.0 + 1e-12))
    throw ConfigError("outputEvery must not exceed tEnd");
  if (cfg.replicates < 1) throw ConfigError("replicates must be at least 1");
}

// Sample times: 0, outputEvery, 2*outputEvery, ..., plus tEnd.
std::vector<double> sample_times(double outputEvery, double tEnd) {
  std::vector<double> out{0.0};
  const double eps = 1e-9 * std::max(1.0, tEnd);
  for (long i = 1;; ++i) {
    const double t = static_cast<double>(i) * outputEvery;
    if (t > tEnd - eps) break;
    out.push_back(t);
  }
  out.push_back(tEnd);
  return out;
}

[[noreturn]] void blowup(double t, const std::exception& e) {
  throw NumericalBlowup(t, e.what());
}

void check_state(double t, const std::vector<double>& state) {
  for (double x : state) {
    if (!std::isfinite(x) || std::fabs(x) > kBlowupLimit)
      throw NumericalBlowup(t, "species amount " + format_double(x));
  }
}

// splitmix64 mix of (seed, replicate) — the documented child-seed rule.
std::uint64_t child_seed(std::uint64_t seed, std::uint64_t replicate) {
  std::uint64_t z = seed + (replicate + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;  // [0, 1)
}

}  // namespace

Trajectory simulate_ode(const Model& model, const SimConfig& cfg) {
  const double outputEvery = resolved_output_every(cfg, true);
  check_config(cfg, outputEvery, true);
  Engine eng = build_engine(model);

  Trajectory traj;
  traj.speciesOrder = eng.speciesIds;

  std::vector<double> state = eng.initialState;
  std::vector<double> params = eng.params;
  const size_t n = state.size();
  const size_t m = eng.laws.size();

  std::vector<double> rates(m), k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto deriv = [&](const std::vector<double>& x, std::vector<double>& dx,
                   double tNow) {
    for (size_t j = 0; j < m; ++j) {
      try {
        rates[j] = eng.laws[j].eval(x, params);
      } catch (const EvalError& e) {
        blowup(tNow, e);
      }
    }
    std::fill(dx.begin(), dx.end(), 0.0);
    for (size_t j = 0; j < m; ++j) {
      const auto& col = eng.net[j];
      for (size_t i = 0; i < n; ++i)
        dx[i] += static_cast<double>(col[i]) * rates[j];
    }
  };

  auto rk4_step = [&](double tNow, double h) {
    deriv(state, k1, tNow);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k1[i];
    deriv(tmp, k2, tNow);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + 0.5 * h * k2[i];
    deriv(tmp, k3, tNow);
    for (size_t i = 0; i < n; ++i) tmp[i] = state[i] + h * k3[i];
    deriv(tmp, k4, tNow);
    for (size_t i = 0; i < n; ++i)
      state[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    check_state(tNow + h, state);
  };

  // Stop points: sample times and event triggers, merged.
  const double eps = 1e-9 * std::max(1.0, cfg.tEnd);
  struct Stop {
    double time;
    bool sample = false;
    std::vector<size_t> events;
  };
  std::vector<Stop> stops;
  for (double t : sample_times(outputEvery, cfg.tEnd))
    stops.push_back({t, true, {}});
  for (size_t i = 0; i < eng.events.size(); ++i) {
    const double t = eng.events[i].time;
    if (t > cfg.tEnd + eps) continue;
    auto it = std::find_if(stops.begin(), stops.end(), [&](const Stop& s) {
      return std::fabs(s.time - t) <= eps;
    });
    if (it != stops.end()) {
      it->events.push_back(i);
    } else {
      stops.push_back({t, false, {i}});
    }
  }
  std::sort(stops.begin(), stops.end(),
            [](const Stop& a, const Stop& b) { return a.time < b.time; });

  double t = 0.0;
  for (const auto& stop : stops) {
    const double span = stop.time - t;
    if (span > eps) {
      const long full = static_cast<long>(std::floor(span / cfg.dt + 1e-9));
      for (long s = 0; s < full; ++s) rk4_step(t + s * cfg.dt, cfg.dt);
      const double rem = span - static_cast<double>(full) * cfg.dt;
      if (rem > eps) rk4_step(stop.time - rem, rem);
      t = stop.time;
    }
    for (size_t ei : stop.events) apply_event(eng.events[ei], state, params);
    if (stop.sample) traj.rows.push_back({stop.time, state});
  }
  return traj;
}

std::vector<Trajectory> simulate_ssa(const Model& model, const SimConfig& cfg) {
  const double outputEvery = resolved_output_every(cfg, false);
  check_config(cfg, outputEvery, false);
  Engine eng = build_engine(model);

  for (size_t i = 0; i < eng.initialState.size(); ++i) {
    const double a = eng.initialState[i];
    if (a != std::floor(a)) throw NonIntegerInitialAmount(eng.speciesIds[i]);
  }

  const auto samples = sample_times(outputEvery, cfg.tEnd);
  const size_t n = eng.speciesIds.size();
  const size_t m = eng.laws.size();
  const double eps = 1e-9 * std::max(1.0, cfg.tEnd);

  std::vector<Trajectory> out;
  out.reserve(static_cast<size_t>(cfg.replicates));

  for (int rep = 1; rep <= cfg.replicates; ++rep) {
    std::mt19937_64 rng(child_seed(cfg.seed, static_cast<std::uint64_t>(rep)));
    std::vector<double> state = eng.initialState;
    std::vector<double> params = eng.params;

    Trajectory traj;
    traj.speciesOrder = eng.speciesIds;
    traj.rows.reserve(samples.size());

    size_t nextSample = 0;
    size_t nextEvent = 0;
    double t = 0.0;

    auto emit_samples_until = [&](double limit, bool inclusive) {
      while (nextSample < samples.size() &&
             (inclusive ? samples[nextSample] <= limit + eps
                        : samples[nextSample] < limit - eps)) {
        traj.rows.push_back({samples[nextSample], state});
        ++nextSample;
      }
    };

    std::vector<double> propensity(m);
    while (t < cfg.tEnd - eps || nextSample < samples.size()) {
      // Propensities at the current integer state.
      double total = 0.0;
      for (size_t j = 0; j < m; ++j) {
        bool enabled = true;
        for (const auto& [slot, k] : eng.req[j]) {
          if (state[static_cast<size_t>(slot)] <
              static_cast<double>(k)) {
            enabled = false;
            break;
          }
        }
        double a = 0.0;
        if (enabled) {
          try {
            a = eng.laws[j].eval(state, params);
          } catch (const EvalError& e) {
            blowup(t, e);
          }
          if (!(a > 0.0)) a = 0.0;  // clamp negative rates
        }
        propensity[j] = a;
        total += a;
      }

      double tNext = cfg.tEnd;
      bool fires = false;
      if (total > 0.0) {
        const double tau = -std::log(1.0 - uniform01(rng)) / total;
        tNext = t + tau;
        fires = true;
      }

      // A pending event wins over the drawn jump: advance to the trigger,
      // apply, then resample from scratch.
      if (nextEvent < eng.events.size() &&
          eng.events[nextEvent].time <= std::min(tNext, cfg.tEnd) + eps) {
        const double te = eng.events[nextEvent].time;
        emit_samples_until(te, false);
        apply_event(eng.events[nextEvent], state, params);
        ++nextEvent;
        t = te;
        continue;
      }

      if (!fires || tNext > cfg.tEnd - eps) {
        // Nothing more happens before tEnd; hold the state flat.
        emit_samples_until(cfg.tEnd, true);
        t = cfg.tEnd;
        break;
      }

      emit_samples_until(tNext, false);
      double pick = uniform01(rng) * total;
      size_t chosen = m - 1;
      for (size_t j = 0; j < m; ++j) {
        pick -= propensity[j];
        if (pick <= 0.0) {
          chosen = j;
          break;
        }
      }
      const auto& col = eng.net[chosen];
      for (size_t i = 0; i < n; ++i)
        state[i] += static_cast<double>(col[i]);
      t = tNext;
    }
    emit_samples_until(cfg.tEnd, true);
    out.push_back(std::move(traj));
  }
  return out;
}

Trajectory mean_trajectory(const std::vector<Trajectory>& replicates) {
  Trajectory mean;
  if (replicates.empty()) return mean;
  mean.speciesOrder = replicates.front().speciesOrder;
  const size_t rows = replicates.front().rows.size();
  const size_t cols = mean.speciesOrder.size();
  mean.rows.resize(rows);
  for (size_t r = 0; r < rows; ++r) {
    mean.rows[r].time = replicates.front().rows[r].time;
    mean.rows[r].amounts.assign(cols, 0.0);
    for (const auto& traj : replicates)
      for (size_t c = 0; c < cols; ++c)
        mean.rows[r].amounts[c] += traj.rows[r].amounts[c];
    for (size_t c = 0; c < cols; ++c)
      mean.rows[r].amounts[c] /= static_cast<double>(replicates.size());
  }
  return mean;
}

std::string trajectory_to_csv(const Trajectory& traj) {
  std::string out = "time";
  for (const auto& id : traj.speciesOrder) out += "," + id;
  out += "\n";
  for (const auto& row : traj.rows) {
    out += format_double(row.time);
    for (double a : row.amounts) out += "," + format_double(a);
    out += "\n";
  }
  return out;
}

void write_trajectory_csv(const Trajectory& traj, std::ostream& out) {
  out << trajectory_to_csv(traj);
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
  std::ofstream file(path, std::ios::binary);
  if (!file) throw IoError(path, "cannot open for writing");
  file << trajectory_to_csv(traj);
  file.flush();
  if (!file) throw IoError(path, "write failed");
}

}  // namespace epinarr
