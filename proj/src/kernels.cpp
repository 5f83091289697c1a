#include "ltr/kernels.hpp"

#include <atomic>
#include <cstdlib>

namespace ltr::kernels {

namespace {

const Backend* lookup(const std::string& name) {
    if (name == "scalar") return &scalar_backend();
    if (name == "avx2") return avx2_backend();
    return nullptr;
}

const Backend* default_backend() {
    if (const char* env = std::getenv("LTR_KERNELS")) {
        if (const Backend* b = lookup(env)) return b;
    }
    if (const Backend* b = avx2_backend()) return b;
    return &scalar_backend();
}

std::atomic<const Backend*>& current() {
    static std::atomic<const Backend*> b{default_backend()};
    return b;
}

}  // namespace

const Backend& active() {
    return *current().load(std::memory_order_relaxed);
}

bool select(const std::string& name) {
    const Backend* b = lookup(name);
    if (!b) return false;
    current().store(b, std::memory_order_relaxed);
    return true;
}

std::vector<std::string> available() {
    std::vector<std::string> names{"scalar"};
    if (avx2_backend()) names.emplace_back("avx2");
    return names;
}

}  // namespace ltr::kernels
