#include "mmdwr/block_sparse.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

namespace mmdwr {

BlockSparseMatrix::BlockSparseMatrix(std::vector<std::vector<int>> columns) {
  const int n = static_cast<int>(columns.size());
  row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  diag_.assign(static_cast<std::size_t>(n), -1);
  for (int i = 0; i < n; ++i) {
    auto& c = columns[i];
    c.push_back(i);
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(c.size());
  }
  cols_.reserve(static_cast<std::size_t>(row_ptr_[n]));
  for (int i = 0; i < n; ++i) {
    for (int j : columns[i]) {
      if (j == i) diag_[i] = static_cast<int>(cols_.size());
      cols_.push_back(j);
    }
  }
  blocks_.assign(cols_.size(), Block4::Zero());
}

int BlockSparseMatrix::find(int i, int j) const {
  auto first = cols_.begin() + row_ptr_[i];
  auto last = cols_.begin() + row_ptr_[i + 1];
  auto it = std::lower_bound(first, last, j);
  return (it != last && *it == j) ? static_cast<int>(it - cols_.begin()) : -1;
}

void BlockSparseMatrix::set_zero() {
  for (auto& b : blocks_) b.setZero();
}

void BlockSparseMatrix::multiply(const BlockVector& x, BlockVector& y) const {
  const int n = rows();
  y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    State acc = State::Zero();
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) acc.noalias() += blocks_[k] * x[cols_[k]];
    y[i] = acc;
  }
}

BlockSparseMatrix BlockSparseMatrix::transposed() const {
  const int n = rows();
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) cols[cols_[k]].push_back(i);
  }
  BlockSparseMatrix t(std::move(cols));
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      t.blocks_[t.find(cols_[k], i)] = blocks_[k].transpose();
    }
  }
  return t;
}

Eigen::SparseMatrix<double> BlockSparseMatrix::to_scalar() const {
  const int n = rows();
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(blocks_.size() * 16);
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) triplets.emplace_back(4 * i + a, 4 * cols_[k] + b, blocks_[k](a, b));
      }
    }
  }
  Eigen::SparseMatrix<double> m(4 * n, 4 * n);
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

void BlockSparseMatrix::write_coordinate(std::ostream& os) const {
  const int n = rows();
  os << "% block-sparse jacobian, " << 4 * n << " x " << 4 * n << "\n";
  os << std::setprecision(17);
  for (int i = 0; i < n; ++i) {
    for (int k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
          if (blocks_[k](a, b) != 0.0) os << 4 * i + a << " " << 4 * cols_[k] + b << " " << blocks_[k](a, b) << "\n";
        }
      }
    }
  }
}

double dot(const BlockVector& a, const BlockVector& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].dot(b[i]);
  return s;
}

double norm2(const BlockVector& a) { return std::sqrt(dot(a, a)); }

double norm_l1(const BlockVector& a) {
  double s = 0.0;
  for (const auto& v : a) s += v.cwiseAbs().sum();
  return s;
}

double norm_inf(const BlockVector& a) {
  double s = 0.0;
  for (const auto& v : a) s = std::max(s, v.cwiseAbs().maxCoeff());
  return s;
}

}  // namespace mmdwr
