#include "ltr/param_store.hpp"

#include <stdexcept>

#include "ltr/kernels.hpp"

namespace ltr {

ParamSlot& ParamStore::add(std::string name, Matrix init) {
    if (index_.count(name)) {
        throw std::invalid_argument("ParamStore: duplicate slot '" + name + "'");
    }
    Matrix grad(init.rows(), init.cols());
    index_.emplace(name, slots_.size());
    slots_.push_back(ParamSlot{std::move(name), std::move(init), std::move(grad)});
    return slots_.back();
}

ParamSlot& ParamStore::at(std::string_view name) {
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        throw std::out_of_range("ParamStore: no slot '" + std::string(name) + "'");
    }
    return slots_[it->second];
}

const ParamSlot& ParamStore::at(std::string_view name) const {
    return const_cast<ParamStore*>(this)->at(name);
}

bool ParamStore::contains(std::string_view name) const {
    return index_.count(std::string(name)) != 0;
}

std::size_t ParamStore::value_count() const {
    std::size_t n = 0;
    for (const auto& s : slots_) n += s.value.size();
    return n;
}

void ParamStore::zero_grads() {
    for (auto& s : slots_) s.grad.fill(0.0);
}

void ParamStore::sgd_step(double lr) {
    for (auto& s : slots_) {
        if (!s.grad.all_finite()) {
            throw std::runtime_error("sgd_step: non-finite gradient in slot '" +
                                     s.name + "'");
        }
        kernels::axpy(-lr, s.grad.data(), s.value.data(), s.value.size());
    }
    zero_grads();
}

}  // namespace ltr
