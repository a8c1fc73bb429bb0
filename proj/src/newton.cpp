#include "mmdwr/newton.hpp"

#include <cmath>
#include <iomanip>
#include <ostream>

namespace mmdwr {

SteadyResult solve_steady(const LeafMesh& mesh, const CellField& u0, const FreestreamSpec& fs,
                          const NewtonConfig& cfg) {
  FlowDiscretization disc(mesh, fs);
  GmgHierarchy hierarchy(mesh);
  return solve_steady(disc, hierarchy, u0, cfg);
}

SteadyResult solve_steady(const FlowDiscretization& disc, const GmgHierarchy& hierarchy,
                          const CellField& u0, const NewtonConfig& cfg) {
  const LeafMesh& mesh = disc.mesh();
  u0.check(mesh);
  SteadyResult result;
  result.u = u0;
  ResidualVector r = disc.residual(result.u);
  double r_norm = norm_l1(r.values);
  result.history.push_back({0, r_norm, 0.0, 0});

  GmgOptions gopt;
  gopt.tol = cfg.linear_tol;
  gopt.max_cycles = cfg.max_cycles;
  gopt.throw_on_failure = false;

  int growth_streak = 0;
  double streak_start = r_norm;
  for (int it = 1; it <= cfg.max_iterations; ++it) {
    if (r_norm < cfg.newton_tol) {
      result.converged = true;
      return result;
    }
    const SparseJacobian jac = disc.jacobian(result.u, cfg.alpha, r_norm, cfg.linearization, cfg.scaling);
    BlockVector rhs(r.values.size());
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] = -r.values[i];
    const GmgSolver solver(jac.matrix, hierarchy, false);
    const GmgResult lin = solver.solve(std::span<const BlockVector>(&rhs, 1), gopt);
    const BlockVector& du = lin.solutions.front();

    double step = 1.0;
    bool accepted = false;
    CellField trial = result.u;
    ResidualVector trial_r;
    double trial_norm = 0.0;
    bool have_physical = false;
    CellField fallback;
    ResidualVector fallback_r;
    double fallback_norm = 0.0;
    double fallback_step = 0.0;
    for (int h = 0; h <= cfg.max_halvings; ++h, step *= 0.5) {
      for (std::size_t i = 0; i < du.size(); ++i) trial.values[i] = result.u.values[i] + step * du[i];
      try {
        trial_r = disc.residual(trial);
      } catch (const NonphysicalState&) {
        continue;
      }
      trial_norm = norm_l1(trial_r.values);
      if (!std::isfinite(trial_norm)) continue;
      if (trial_norm <= (1.0 - cfg.armijo * step) * r_norm) {
        accepted = true;
        break;
      }
      if (!have_physical || trial_norm < fallback_norm) {
        have_physical = true;
        fallback = trial;
        fallback_r = trial_r;
        fallback_norm = trial_norm;
        fallback_step = step;
      }
    }
    if (!accepted) {
      if (!have_physical) throw NonphysicalState("Newton update is nonphysical at every damping level");
      trial = std::move(fallback);
      trial_r = std::move(fallback_r);
      trial_norm = fallback_norm;
      step = fallback_step;
    }

    if (trial_norm > r_norm) {
      if (growth_streak == 0) streak_start = r_norm;
      ++growth_streak;
      if (growth_streak >= 5 && trial_norm > 10.0 * streak_start) {
        throw NewtonDiverged("residual grew tenfold over five consecutive Newton steps");
      }
    } else {
      growth_streak = 0;
    }
    result.u = std::move(trial);
    r = std::move(trial_r);
    r_norm = trial_norm;
    result.history.push_back({it, r_norm, step, lin.report.cycles});
  }
  result.converged = r_norm < cfg.newton_tol;
  return result;
}

void write_history_csv(std::ostream& os, const std::vector<NewtonStep>& history) {
  os << "iteration,residual_l1,damping\n" << std::setprecision(17);
  for (const auto& h : history) os << h.iteration << "," << h.residual_l1 << "," << h.damping << "\n";
}

}  // namespace mmdwr
