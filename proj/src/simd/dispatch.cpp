#include <cstdlib>
#include <string_view>

#include "treealign/simd/kernels.hpp"

namespace treealign::simd {
namespace {

const KernelTable& select() {
    const char* env = std::getenv("TREEALIGN_SIMD");
    const std::string_view want = env ? env : "";
    if (want == "scalar") return scalar();
    if (const KernelTable* t = avx2()) return *t;
    return scalar();
}

}  // namespace

const KernelTable& active() {
    static const KernelTable& table = select();
    return table;
}

}  // namespace treealign::simd
