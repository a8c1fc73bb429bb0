#pragma once

// Geometric multigrid on the generations of a hierarchical tree. Level 0 is
// the leaf mesh; level l+1 merges every cell deeper than (max_level - l - 1)
// into its ancestor. Coarse operators are Galerkin products with
// piecewise-constant transfers, so restriction sums residuals over children
// and prolongation injects corrections.

#include <memory>
#include <span>
#include <vector>

#include <Eigen/SparseLU>

#include "mmdwr/block_sparse.hpp"
#include "mmdwr/discretization.hpp"
#include "mmdwr/errors.hpp"
#include "mmdwr/leaf_mesh.hpp"

namespace mmdwr {

class GmgHierarchy {
 public:
  explicit GmgHierarchy(const LeafMesh& finest);

  int levels() const { return static_cast<int>(cells_.size()); }
  int cells(int level) const { return cells_[level]; }
  /// For each cell of `level`, its aggregate on `level + 1`.
  const std::vector<int>& aggregate(int level) const { return aggregate_[level]; }
  /// Cell keys of each level (level 0 equals the finest mesh).
  const std::vector<NodeKey>& keys(int level) const { return keys_[level]; }

 private:
  std::vector<int> cells_;
  std::vector<std::vector<int>> aggregate_;
  std::vector<std::vector<NodeKey>> keys_;
};

struct GmgOptions {
  double tol = 1e-8;  // relative 2-norm residual per right-hand side
  int max_cycles = 200;
  int pre_sweeps = 3;
  int post_sweeps = 3;
  bool transpose = false;
  /// Throw NoConvergence when the cap is hit; otherwise return the iterate.
  bool throw_on_failure = true;
};

struct GmgResult {
  std::vector<BlockVector> solutions;
  ConvergenceReport report;
};

/// Level operators for one matrix; reusable across solves with it.
class GmgSolver {
 public:
  GmgSolver(const BlockSparseMatrix& fine, const GmgHierarchy& hierarchy, bool transpose);

  GmgResult solve(std::span<const BlockVector> rhs, const GmgOptions& options) const;
  bool transposed() const { return transpose_; }

 private:
  struct Level {
    BlockSparseMatrix a;
    std::vector<Block4> diag_inverse;
  };
  void cycle(int level, std::vector<BlockVector>& x, const std::vector<BlockVector>& b,
             const GmgOptions& options) const;
  void smooth(const Level& lv, std::vector<BlockVector>& x, const std::vector<BlockVector>& b,
              bool forward) const;

  const GmgHierarchy* hierarchy_;
  bool transpose_;
  std::vector<Level> levels_;
  std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> coarse_;
};

/// One-shot solve of J x = b (or J^T x = b) for every right-hand side.
GmgResult gmg_solve(const BlockSparseMatrix& jacobian, std::span<const BlockVector> rhs,
                    const GmgHierarchy& hierarchy, const GmgOptions& options);

}  // namespace mmdwr
