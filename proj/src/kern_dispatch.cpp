#include "psbf/kern.hpp"

#include <cstdlib>
#include <cstring>

namespace psbf::kern {

const Ops* avx2_ops();  // kern_avx2.cpp

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("popcnt");
#else
    return false;
#endif
}

const Ops* resolve() {
    const char* force = std::getenv("PSB_FACTOR_SIMD");
    if (force != nullptr && std::strcmp(force, "scalar") == 0) return &scalar();
    const Ops* simd = cpu_has_avx2() ? avx2_ops() : nullptr;
    if (force != nullptr && std::strcmp(force, "avx2") == 0 && simd != nullptr) return simd;
    if (force != nullptr && std::strcmp(force, "auto") != 0 && std::strcmp(force, "avx2") != 0)
        return &scalar();
    return simd != nullptr ? simd : &scalar();
}

}  // namespace

const Ops& active() {
    static const Ops* chosen = resolve();
    return *chosen;
}

std::vector<const Ops*> available() {
    std::vector<const Ops*> out{&scalar()};
    if (cpu_has_avx2() && avx2_ops() != nullptr) out.push_back(avx2_ops());
    return out;
}

}  // namespace psbf::kern
