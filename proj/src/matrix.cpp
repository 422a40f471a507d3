#include "ttcore/matrix.hpp"

#include <algorithm>
#include <cassert>
#include <charconv>
#include <ostream>
#include <stdexcept>

#include "ttcore/kernels.hpp"

namespace ttcore {

RowMatrix RowMatrix::dense(std::size_t n, std::vector<double> values) {
  if (values.size() != n * n) throw std::invalid_argument("dense matrix: expected n*n values");
  RowMatrix m;
  m.n_ = n;
  m.sparse_ = false;
  m.dense_ = std::move(values);
  return m;
}

RowMatrix RowMatrix::sparse(std::size_t n, std::vector<std::size_t> row_ptr,
                            std::vector<std::uint32_t> cols, std::vector<double> vals,
                            std::vector<double> fill) {
  if (row_ptr.size() != n + 1 || fill.size() != n || cols.size() != vals.size() ||
      row_ptr.front() != 0 || row_ptr.back() != cols.size()) {
    throw std::invalid_argument("sparse matrix: inconsistent storage");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (row_ptr[i] > row_ptr[i + 1]) throw std::invalid_argument("sparse matrix: row_ptr not monotone");
    for (std::size_t k = row_ptr[i]; k < row_ptr[i + 1]; ++k) {
      if (cols[k] >= n) throw std::invalid_argument("sparse matrix: column out of range");
      if (k > row_ptr[i] && cols[k - 1] >= cols[k])
        throw std::invalid_argument("sparse matrix: columns must be strictly increasing");
    }
  }
  RowMatrix m;
  m.n_ = n;
  m.sparse_ = true;
  m.row_ptr_ = std::move(row_ptr);
  m.cols_ = std::move(cols);
  m.vals_ = std::move(vals);
  m.fill_ = std::move(fill);
  return m;
}

double RowMatrix::at(std::size_t i, std::size_t j) const {
  assert(i < n_ && j < n_);
  if (!sparse_) return dense_[i * n_ + j];
  auto first = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
  auto last = cols_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
  auto it = std::lower_bound(first, last, static_cast<std::uint32_t>(j));
  if (it != last && *it == j) return vals_[static_cast<std::size_t>(it - cols_.begin())];
  return fill_[i];
}

double RowMatrix::row_sum(std::size_t i) const {
  const auto& k = kernels::active();
  if (!sparse_) return k.sum(dense_.data() + i * n_, n_);
  const std::size_t stored = row_ptr_[i + 1] - row_ptr_[i];
  return k.sum(vals_.data() + row_ptr_[i], stored) + fill_[i] * static_cast<double>(n_ - stored);
}

void RowMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  assert(x.size() == n_ && y.size() == n_);
  const auto& k = kernels::active();
  if (!sparse_) {
    for (std::size_t i = 0; i < n_; ++i) y[i] = k.dot(dense_.data() + i * n_, x.data(), n_);
    return;
  }
  const double total = k.sum(x.data(), n_);
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t begin = row_ptr_[i];
    const std::size_t count = row_ptr_[i + 1] - begin;
    double acc = k.gather_dot(vals_.data() + begin, cols_.data() + begin, x.data(), count);
    if (fill_[i] != 0.0) {
      double listed = 0.0;
      for (std::size_t p = begin; p < begin + count; ++p) listed += x[cols_[p]];
      acc += fill_[i] * (total - listed);
    }
    y[i] = acc;
  }
}

void RowMatrix::multiply_transposed(std::span<const double> x, std::span<double> y) const {
  assert(x.size() == n_ && y.size() == n_);
  const auto& k = kernels::active();
  std::fill(y.begin(), y.end(), 0.0);
  if (!sparse_) {
    for (std::size_t i = 0; i < n_; ++i) {
      if (x[i] != 0.0) k.axpy(x[i], dense_.data() + i * n_, y.data(), n_);
    }
    return;
  }
  // y_j = sum_i x_i fill_i + sum_{i stores j} x_i (m_ij - fill_i)
  double background = 0.0;
  for (std::size_t i = 0; i < n_; ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    background += xi * fill_[i];
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) y[cols_[p]] += xi * (vals_[p] - fill_[i]);
  }
  if (background != 0.0) {
    for (auto& v : y) v += background;
  }
}

std::vector<double> RowMatrix::to_dense() const {
  if (!sparse_) return dense_;
  std::vector<double> out(n_ * n_);
  for (std::size_t i = 0; i < n_; ++i) {
    std::fill(out.begin() + static_cast<std::ptrdiff_t>(i * n_),
              out.begin() + static_cast<std::ptrdiff_t>((i + 1) * n_), fill_[i]);
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) out[i * n_ + cols_[p]] = vals_[p];
  }
  return out;
}

std::span<const double> RowMatrix::dense_row(std::size_t i) const {
  assert(!sparse_);
  return {dense_.data() + i * n_, n_};
}

std::span<const std::uint32_t> RowMatrix::row_cols(std::size_t i) const {
  assert(sparse_);
  return {cols_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::span<const double> RowMatrix::row_vals(std::size_t i) const {
  assert(sparse_);
  return {vals_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
}

std::size_t RowMatrix::stored_in_row(std::size_t i) const {
  return sparse_ ? row_ptr_[i + 1] - row_ptr_[i] : n_;
}

RowMatrix RowMatrix::principal_submatrix(std::span<const std::size_t> keep) const {
  const std::size_t m = keep.size();
  std::vector<std::size_t> new_index(n_, n_);
  for (std::size_t r = 0; r < m; ++r) {
    if (keep[r] >= n_ || (r > 0 && keep[r - 1] >= keep[r]))
      throw std::invalid_argument("principal_submatrix: indices must be ascending and in range");
    new_index[keep[r]] = r;
  }
  if (!sparse_) {
    std::vector<double> out(m * m);
    for (std::size_t r = 0; r < m; ++r)
      for (std::size_t c = 0; c < m; ++c) out[r * m + c] = dense_[keep[r] * n_ + keep[c]];
    return dense(m, std::move(out));
  }
  std::vector<std::size_t> row_ptr{0};
  std::vector<std::uint32_t> cols;
  std::vector<double> vals;
  std::vector<double> fill;
  for (std::size_t r = 0; r < m; ++r) {
    const std::size_t i = keep[r];
    for (std::size_t p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (new_index[cols_[p]] < n_) {
        cols.push_back(static_cast<std::uint32_t>(new_index[cols_[p]]));
        vals.push_back(vals_[p]);
      }
    }
    row_ptr.push_back(cols.size());
    fill.push_back(fill_[i]);
  }
  return sparse(m, std::move(row_ptr), std::move(cols), std::move(vals), std::move(fill));
}

void write_dense_csv(std::ostream& os, const RowMatrix& m) {
  char buf[32];
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (j) os << ',';
      auto res = std::to_chars(buf, buf + sizeof buf, m.at(i, j));
      os.write(buf, res.ptr - buf);
    }
    os << '\n';
  }
}

}  // namespace ttcore
