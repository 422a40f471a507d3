#include <cstdlib>
#include <string_view>

#include "ttcore/kernels.hpp"

namespace ttcore::kernels {

#if defined(TTCORE_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

namespace {

bool cpu_has_avx2() {
#if defined(TTCORE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable& select() {
  if (const char* forced = std::getenv("TTCORE_ISA"); forced && std::string_view(forced) == "scalar") {
    return scalar_table();
  }
  if (const KernelTable* t = table_for(Isa::avx2)) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable* table_for(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return &scalar_table();
    case Isa::avx2:
#if defined(TTCORE_HAVE_AVX2)
      if (cpu_has_avx2()) return &avx2_table();
#endif
      return nullptr;
  }
  return nullptr;
}

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar:
      return "scalar";
    case Isa::avx2:
      return "avx2";
  }
  return "unknown";
}

}  // namespace ttcore::kernels
