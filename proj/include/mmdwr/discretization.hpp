#pragma once

// Cell-centred finite-volume residual of the Euler equations on a leaf mesh
// and its block Jacobian.

#include <array>
#include <vector>

#include "mmdwr/block_sparse.hpp"
#include "mmdwr/leaf_mesh.hpp"

namespace mmdwr {

/// Per-cell sum of numerical fluxes times face length, tied to a LeafMesh.
using ResidualVector = CellField;

/// How the weight alpha * ||R||_1 enters the diagonal: as a plain identity
/// shift, or multiplied by each cell's area (a lumped mass matrix).
enum class RegularizationScaling { Identity, CellArea };

struct SparseJacobian {
  BlockSparseMatrix matrix;
  /// alpha * ||R||_1; added to every diagonal block (times the cell area
  /// under RegularizationScaling::CellArea).
  double regularization = 0.0;
};

/// Assembly of residuals and Jacobians on one mesh. Holds the block pattern so
/// repeated Newton steps reuse it.
class FlowDiscretization {
 public:
  FlowDiscretization(const LeafMesh& mesh, FreestreamSpec fs);

  const LeafMesh& mesh() const { return *mesh_; }
  const FreestreamSpec& freestream() const { return fs_; }

  ResidualVector residual(const CellField& u) const;
  /// Flux Jacobian plus alpha * ||R(u)||_1 on the diagonal.
  SparseJacobian jacobian(const CellField& u, double alpha,
                          Linearization lin = Linearization::FrozenWaveSpeed) const;
  /// Same, reusing an already computed residual norm.
  SparseJacobian jacobian(const CellField& u, double alpha, double residual_l1, Linearization lin,
                          RegularizationScaling scaling = RegularizationScaling::Identity) const;
  CellField freestream_field() const;

  /// Ghost state and its derivative for a boundary face.
  State ghost(const State& u, const Face& face) const;
  Block4 ghost_jacobian(const State& u, const Face& face) const;

 private:
  const LeafMesh* mesh_;
  FreestreamSpec fs_;
  BlockSparseMatrix pattern_;
  // Positions of (L,L), (L,R), (R,L), (R,R) blocks per face; -1 on boundaries.
  std::vector<std::array<int, 4>> face_blocks_;
};

ResidualVector assemble_residual(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs);
SparseJacobian assemble_jacobian(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                 double alpha, Linearization lin = Linearization::FrozenWaveSpeed);

}  // namespace mmdwr
