#include "mmdwr/discretization.hpp"

namespace mmdwr {

FlowDiscretization::FlowDiscretization(const LeafMesh& mesh, FreestreamSpec fs)
    : mesh_(&mesh), fs_(fs) {
  fs_.validate();
  const int n = mesh.num_cells();
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(n));
  for (const auto& f : mesh.faces()) {
    if (f.right < 0) continue;
    cols[f.left].push_back(f.right);
    cols[f.right].push_back(f.left);
  }
  pattern_ = BlockSparseMatrix(std::move(cols));
  face_blocks_.reserve(mesh.faces().size());
  for (const auto& f : mesh.faces()) {
    if (f.right < 0) {
      face_blocks_.push_back({pattern_.diagonal(f.left), -1, -1, -1});
    } else {
      face_blocks_.push_back({pattern_.diagonal(f.left), pattern_.find(f.left, f.right),
                              pattern_.find(f.right, f.left), pattern_.diagonal(f.right)});
    }
  }
}

CellField FlowDiscretization::freestream_field() const { return CellField(*mesh_, fs_.state()); }

State FlowDiscretization::ghost(const State& u, const Face& face) const {
  if (mesh_->marker_kind(face.marker) == BoundaryKind::Wall) return wall_ghost(u, face.normal);
  return farfield_ghost(u, face.normal, fs_);
}

Block4 FlowDiscretization::ghost_jacobian(const State& u, const Face& face) const {
  if (mesh_->marker_kind(face.marker) == BoundaryKind::Wall) return wall_ghost_jacobian(face.normal);
  return farfield_ghost_jacobian(u, face.normal, fs_);
}

ResidualVector FlowDiscretization::residual(const CellField& u) const {
  u.check(*mesh_);
  ResidualVector r(*mesh_, State::Zero());
  const double g = fs_.gamma;
  for (const auto& f : mesh_->faces()) {
    try {
      if (f.right < 0) {
        const State& ul = u[f.left];
        r[f.left] += f.length * lax_friedrichs_flux(ul, ghost(ul, f), f.normal, g);
      } else {
        const State h = f.length * lax_friedrichs_flux(u[f.left], u[f.right], f.normal, g);
        r[f.left] += h;
        r[f.right] -= h;
      }
    } catch (const NonphysicalState& e) {
      long cell = f.left;
      if (f.right >= 0) {
        try {
          pressure(u[f.left], g);
        } catch (const NonphysicalState&) {
          throw NonphysicalState(e.what(), f.left);
        }
        cell = f.right;
      }
      throw NonphysicalState(e.what(), cell);
    }
  }
  return r;
}

SparseJacobian FlowDiscretization::jacobian(const CellField& u, double alpha, Linearization lin) const {
  const double l1 = alpha != 0.0 ? norm_l1(residual(u).values) : 0.0;
  return jacobian(u, alpha, l1, lin);
}

SparseJacobian FlowDiscretization::jacobian(const CellField& u, double alpha, double residual_l1,
                                            Linearization lin, RegularizationScaling scaling) const {
  u.check(*mesh_);
  SparseJacobian jac{pattern_, alpha * residual_l1};
  auto& m = jac.matrix;
  const double g = fs_.gamma;
  const auto& faces = mesh_->faces();
  for (std::size_t i = 0; i < faces.size(); ++i) {
    const auto& f = faces[i];
    const auto& pos = face_blocks_[i];
    if (f.right < 0) {
      const State& ul = u[f.left];
      const State gh = ghost(ul, f);
      const FluxJacobians d = flux_jacobians(ul, gh, f.normal, g, lin);
      m.block(pos[0]).noalias() += f.length * (d.dL + d.dR * ghost_jacobian(ul, f));
    } else {
      const FluxJacobians d = flux_jacobians(u[f.left], u[f.right], f.normal, g, lin);
      m.block(pos[0]).noalias() += f.length * d.dL;
      m.block(pos[1]).noalias() += f.length * d.dR;
      m.block(pos[2]).noalias() -= f.length * d.dL;
      m.block(pos[3]).noalias() -= f.length * d.dR;
    }
  }
  if (jac.regularization != 0.0) {
    for (int c = 0; c < m.rows(); ++c) {
      const double w = scaling == RegularizationScaling::CellArea ? mesh_->area(c) : 1.0;
      m.block(m.diagonal(c)).diagonal().array() += w * jac.regularization;
    }
  }
  return jac;
}

ResidualVector assemble_residual(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs) {
  return FlowDiscretization(mesh, fs).residual(u);
}

SparseJacobian assemble_jacobian(const LeafMesh& mesh, const CellField& u, const FreestreamSpec& fs,
                                 double alpha, Linearization lin) {
  return FlowDiscretization(mesh, fs).jacobian(u, alpha, lin);
}

}  // namespace mmdwr
