#include "mmdwr/gmg.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/LU>

namespace mmdwr {

GmgHierarchy::GmgHierarchy(const LeafMesh& finest) {
  keys_.push_back(finest.keys());
  cells_.push_back(finest.num_cells());
  std::uint32_t depth = finest.max_level();
  while (depth > 0) {
    --depth;
    const auto& fine = keys_.back();
    std::vector<NodeKey> coarse;
    std::vector<int> agg(fine.size());
    std::unordered_map<NodeKey, int, NodeKeyHash> index;
    for (std::size_t c = 0; c < fine.size(); ++c) {
      const NodeKey k = fine[c].ancestor(depth);
      auto [it, inserted] = index.try_emplace(k, static_cast<int>(coarse.size()));
      if (inserted) coarse.push_back(k);
      agg[c] = it->second;
    }
    aggregate_.push_back(std::move(agg));
    cells_.push_back(static_cast<int>(coarse.size()));
    keys_.push_back(std::move(coarse));
  }
}

namespace {

BlockSparseMatrix galerkin_coarse(const BlockSparseMatrix& fine, const std::vector<int>& agg, int ncoarse) {
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(ncoarse));
  for (int i = 0; i < fine.rows(); ++i) {
    for (int k = fine.row_begin(i); k < fine.row_end(i); ++k) cols[agg[i]].push_back(agg[fine.col(k)]);
  }
  BlockSparseMatrix coarse(std::move(cols));
  for (int i = 0; i < fine.rows(); ++i) {
    for (int k = fine.row_begin(i); k < fine.row_end(i); ++k) {
      coarse.block(coarse.find(agg[i], agg[fine.col(k)])) += fine.block(k);
    }
  }
  return coarse;
}

std::vector<Block4> invert_diagonal(const BlockSparseMatrix& a) {
  std::vector<Block4> inv(static_cast<std::size_t>(a.rows()));
  for (int i = 0; i < a.rows(); ++i) inv[i] = a.block(a.diagonal(i)).partialPivLu().inverse();
  return inv;
}

}  // namespace

GmgSolver::GmgSolver(const BlockSparseMatrix& fine, const GmgHierarchy& hierarchy, bool transpose)
    : hierarchy_(&hierarchy), transpose_(transpose) {
  if (fine.rows() != hierarchy.cells(0)) throw Error("matrix does not match the multigrid hierarchy");
  levels_.reserve(static_cast<std::size_t>(hierarchy.levels()));
  levels_.push_back({transpose ? fine.transposed() : fine, {}});
  for (int l = 0; l + 1 < hierarchy.levels(); ++l) {
    levels_.push_back({galerkin_coarse(levels_[l].a, hierarchy.aggregate(l), hierarchy.cells(l + 1)), {}});
  }
  for (std::size_t l = 0; l + 1 < levels_.size(); ++l) levels_[l].diag_inverse = invert_diagonal(levels_[l].a);
  coarse_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
  Eigen::SparseMatrix<double> coarse = levels_.back().a.to_scalar();
  coarse.makeCompressed();
  coarse_->compute(coarse);
  if (coarse_->info() != Eigen::Success) throw Error("coarse-level factorization failed");
}

void GmgSolver::smooth(const Level& lv, std::vector<BlockVector>& x, const std::vector<BlockVector>& b,
                       bool forward) const {
  const int n = lv.a.rows();
  const std::size_t nrhs = x.size();
  for (int s = 0; s < n; ++s) {
    const int i = forward ? s : n - 1 - s;
    for (std::size_t r = 0; r < nrhs; ++r) {
      State acc = b[r][i];
      for (int k = lv.a.row_begin(i); k < lv.a.row_end(i); ++k) {
        const int j = lv.a.col(k);
        if (j != i) acc.noalias() -= lv.a.block(k) * x[r][j];
      }
      x[r][i].noalias() = lv.diag_inverse[i] * acc;
    }
  }
}

void GmgSolver::cycle(int level, std::vector<BlockVector>& x, const std::vector<BlockVector>& b,
                      const GmgOptions& options) const {
  const Level& lv = levels_[level];
  const std::size_t nrhs = x.size();
  if (level + 1 == static_cast<int>(levels_.size())) {
    const int n = lv.a.rows();
    Eigen::VectorXd rhs(4 * n);
    for (std::size_t r = 0; r < nrhs; ++r) {
      for (int i = 0; i < n; ++i) rhs.segment<4>(4 * i) = b[r][i];
      const Eigen::VectorXd sol = coarse_->solve(rhs);
      for (int i = 0; i < n; ++i) x[r][i] = sol.segment<4>(4 * i);
    }
    return;
  }
  for (int s = 0; s < options.pre_sweeps; ++s) smooth(lv, x, b, true);

  const auto& agg = hierarchy_->aggregate(level);
  const int nc = hierarchy_->cells(level + 1);
  std::vector<BlockVector> bc(nrhs, BlockVector(static_cast<std::size_t>(nc), State::Zero()));
  std::vector<BlockVector> xc(nrhs, BlockVector(static_cast<std::size_t>(nc), State::Zero()));
  BlockVector ax;
  for (std::size_t r = 0; r < nrhs; ++r) {
    lv.a.multiply(x[r], ax);
    for (int i = 0; i < lv.a.rows(); ++i) bc[r][agg[i]] += b[r][i] - ax[i];
  }
  cycle(level + 1, xc, bc, options);
  for (std::size_t r = 0; r < nrhs; ++r) {
    for (int i = 0; i < lv.a.rows(); ++i) x[r][i] += xc[r][agg[i]];
  }
  for (int s = 0; s < options.post_sweeps; ++s) smooth(lv, x, b, false);
}

GmgResult GmgSolver::solve(std::span<const BlockVector> rhs, const GmgOptions& options) const {
  const std::size_t nrhs = rhs.size();
  const int n = levels_.front().a.rows();
  GmgResult result;
  std::vector<BlockVector> b(rhs.begin(), rhs.end());
  result.solutions.assign(nrhs, BlockVector(static_cast<std::size_t>(n), State::Zero()));
  auto& report = result.report;
  report.initial_residuals.resize(nrhs);
  report.final_residuals.resize(nrhs);
  report.relative_residuals.assign(nrhs, 0.0);
  for (std::size_t r = 0; r < nrhs; ++r) {
    if (static_cast<int>(b[r].size()) != n) throw Error("right-hand side has the wrong length");
    report.initial_residuals[r] = norm2(b[r]);
    report.final_residuals[r] = report.initial_residuals[r];
  }

  auto all_converged = [&]() {
    for (std::size_t r = 0; r < nrhs; ++r) {
      const double b0 = report.initial_residuals[r];
      report.relative_residuals[r] = b0 > 0.0 ? report.final_residuals[r] / b0 : 0.0;
      if (b0 > 0.0 && !(report.relative_residuals[r] < options.tol)) return false;
    }
    return true;
  };

  BlockVector ax;
  const auto& a = levels_.front().a;
  while (!all_converged()) {
    if (report.cycles >= options.max_cycles) {
      if (options.throw_on_failure) throw NoConvergence("multigrid did not converge", report);
      return result;
    }
    cycle(0, result.solutions, b, options);
    ++report.cycles;
    for (std::size_t r = 0; r < nrhs; ++r) {
      a.multiply(result.solutions[r], ax);
      double s = 0.0;
      for (int i = 0; i < n; ++i) s += (b[r][i] - ax[i]).squaredNorm();
      report.final_residuals[r] = std::sqrt(s);
      if (!std::isfinite(report.final_residuals[r]) ||
          report.final_residuals[r] > 1e8 * std::max(report.initial_residuals[r], 1e-300)) {
        if (options.throw_on_failure) throw NoConvergence("multigrid diverged", report);
        return result;
      }
    }
  }
  report.converged = true;
  return result;
}

GmgResult gmg_solve(const BlockSparseMatrix& jacobian, std::span<const BlockVector> rhs,
                    const GmgHierarchy& hierarchy, const GmgOptions& options) {
  GmgSolver solver(jacobian, hierarchy, options.transpose);
  return solver.solve(rhs, options);
}

}  // namespace mmdwr
