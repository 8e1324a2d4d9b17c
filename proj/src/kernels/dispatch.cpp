// Runtime kernel selection. The choice is made once; SPHERELIFT_KERNELS
// ("scalar" / "avx2") overrides the cpuid-based default.

#include <cstdlib>
#include <string>

#include "spherelift/kernels.hpp"

namespace spherelift::kernels {

// Defined in avx2.cpp (returns null when unsupported by the build target).
const Ops* avx2_ops_build();

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops* select_default() {
    if (const char* env = std::getenv("SPHERELIFT_KERNELS")) {
        std::string want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2" && avx2_ops()) return avx2_ops();
        // unknown or unavailable value: fall through to auto
    }
    if (const Ops* v = avx2_ops()) return v;
    return &scalar_ops();
}

const Ops*& active_slot() {
    static const Ops* slot = select_default();
    return slot;
}

}  // namespace

const Ops* avx2_ops() {
    static const Ops* ops = cpu_has_avx2() ? avx2_ops_build() : nullptr;
    return ops;
}

const Ops& active() { return *active_slot(); }

bool force(const std::string& name) {
    if (name == "scalar") {
        active_slot() = &scalar_ops();
        return true;
    }
    if (name == "avx2" && avx2_ops()) {
        active_slot() = avx2_ops();
        return true;
    }
    return false;
}

}  // namespace spherelift::kernels
