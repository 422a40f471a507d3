#include "ttcore/kernels.hpp"

#include <cmath>

namespace ttcore::kernels {
namespace {

double dot(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += a[i] * b[i];
  return acc;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(double alpha, double* x, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) x[i] *= alpha;
}

double sum(const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += x[i];
  return acc;
}

double l1_distance(const double* a, const double* b, std::size_t n) {
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::abs(a[i] - b[i]);
  return acc;
}

double gather_dot(const double* vals, const std::uint32_t* idx, const double* x, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += vals[k] * x[idx[k]];
  return acc;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, dot, axpy, scale, sum, l1_distance, gather_dot};
  return table;
}

}  // namespace ttcore::kernels
