#pragma once

#include <iosfwd>
#include <vector>

#include <Eigen/SparseCore>

#include "mmdwr/euler.hpp"

namespace mmdwr {

using BlockVector = std::vector<State>;

/// Square block-CSR matrix with 4x4 blocks and sorted column indices.
class BlockSparseMatrix {
 public:
  BlockSparseMatrix() = default;
  /// Pattern from per-row column lists (sorted and deduplicated here); blocks zeroed.
  explicit BlockSparseMatrix(std::vector<std::vector<int>> columns);

  int rows() const { return static_cast<int>(row_ptr_.size()) - 1; }
  int nonzero_blocks() const { return static_cast<int>(cols_.size()); }
  int row_begin(int i) const { return row_ptr_[i]; }
  int row_end(int i) const { return row_ptr_[i + 1]; }
  int col(int k) const { return cols_[k]; }
  Block4& block(int k) { return blocks_[k]; }
  const Block4& block(int k) const { return blocks_[k]; }
  int diagonal(int i) const { return diag_[i]; }
  /// Block position of (i, j), -1 when outside the pattern.
  int find(int i, int j) const;

  void set_zero();
  void multiply(const BlockVector& x, BlockVector& y) const;
  BlockSparseMatrix transposed() const;
  Eigen::SparseMatrix<double> to_scalar() const;
  /// Coordinate-format text: one "row col value" line per stored scalar entry.
  void write_coordinate(std::ostream& os) const;

 private:
  std::vector<int> row_ptr_{0};
  std::vector<int> cols_;
  std::vector<int> diag_;
  std::vector<Block4> blocks_;
};

double dot(const BlockVector& a, const BlockVector& b);
double norm2(const BlockVector& a);
double norm_l1(const BlockVector& a);
double norm_inf(const BlockVector& a);

}  // namespace mmdwr
