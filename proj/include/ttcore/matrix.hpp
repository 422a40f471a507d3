#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace ttcore {

// Square n x n matrix of nonnegative reals, stored either dense row-major or
// as compressed rows plus a per-row fill value. In the sparse layout an entry
// that is not stored equals fill(i) for its row, so a smoothed truncated
// preference matrix stays O(Ln) in memory and in every product.
//
// Indices are 0-based.
class RowMatrix {
 public:
  RowMatrix() = default;

  static RowMatrix dense(std::size_t n, std::vector<double> values);
  static RowMatrix sparse(std::size_t n, std::vector<std::size_t> row_ptr,
                          std::vector<std::uint32_t> cols, std::vector<double> vals,
                          std::vector<double> fill);

  std::size_t size() const { return n_; }
  bool is_sparse() const { return sparse_; }

  double at(std::size_t i, std::size_t j) const;
  double row_sum(std::size_t i) const;

  // y = M x
  void multiply(std::span<const double> x, std::span<double> y) const;
  // y = M^T x
  void multiply_transposed(std::span<const double> x, std::span<double> y) const;

  std::vector<double> to_dense() const;

  // Dense storage access.
  std::span<const double> dense_row(std::size_t i) const;

  // Sparse storage access.
  std::span<const std::uint32_t> row_cols(std::size_t i) const;
  std::span<const double> row_vals(std::size_t i) const;
  double fill(std::size_t i) const { return sparse_ ? fill_[i] : 0.0; }
  std::size_t stored_in_row(std::size_t i) const;

  // Applies f(i, value) -> value to every stored entry and every row fill.
  template <typename F>
  RowMatrix transform(F f) const {
    RowMatrix out = *this;
    if (sparse_) {
      for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.vals_[k] = f(i, vals_[k]);
        out.fill_[i] = f(i, fill_[i]);
      }
    } else {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = 0; j < n_; ++j) out.dense_[i * n_ + j] = f(i, dense_[i * n_ + j]);
    }
    return out;
  }

  // Keeps rows and columns listed in `keep` (ascending), preserving storage kind.
  RowMatrix principal_submatrix(std::span<const std::size_t> keep) const;

  bool operator==(const RowMatrix&) const = default;

 private:
  std::size_t n_ = 0;
  bool sparse_ = false;
  std::vector<double> dense_;
  std::vector<std::size_t> row_ptr_;
  std::vector<std::uint32_t> cols_;
  std::vector<double> vals_;
  std::vector<double> fill_;
};

// One row per line, comma separated, full round-trip precision.
void write_dense_csv(std::ostream& os, const RowMatrix& m);

}  // namespace ttcore
