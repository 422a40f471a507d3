#pragma once

// Dense inner-loop kernels used by the matrix-vector products and the
// iterative solvers. Every kernel has a portable scalar reference and, on
// x86-64, an AVX2/FMA variant. The active table is chosen once at startup
// from the CPU feature bits; TTCORE_ISA=scalar in the environment pins the
// reference path.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace ttcore::kernels {

enum class Isa { scalar, avx2 };

struct KernelTable {
  Isa isa;
  double (*dot)(const double* a, const double* b, std::size_t n);
  // y += alpha * x
  void (*axpy)(double alpha, const double* x, double* y, std::size_t n);
  void (*scale)(double alpha, double* x, std::size_t n);
  double (*sum)(const double* x, std::size_t n);
  double (*l1_distance)(const double* a, const double* b, std::size_t n);
  // sum_k vals[k] * x[idx[k]]
  double (*gather_dot)(const double* vals, const std::uint32_t* idx, const double* x,
                       std::size_t n);
};

const KernelTable& scalar_table();

// nullptr when the variant was not compiled in or the CPU lacks the features.
const KernelTable* table_for(Isa isa);

// Table selected for this process.
const KernelTable& active();

std::string_view isa_name(Isa isa);

}  // namespace ttcore::kernels
