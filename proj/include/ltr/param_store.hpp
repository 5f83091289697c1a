#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ltr/matrix.hpp"

namespace ltr {

// A named parameter with its gradient buffer. value and grad always have
// identical shapes.
struct ParamSlot {
    std::string name;
    Matrix value;
    Matrix grad;
};

// Ordered collection of parameter slots. Iteration and serialization follow
// insertion order, which is fixed by model construction and therefore
// deterministic.
class ParamStore {
public:
    ParamSlot& add(std::string name, Matrix init);

    ParamSlot& at(std::string_view name);
    const ParamSlot& at(std::string_view name) const;
    bool contains(std::string_view name) const;

    std::size_t slot_count() const { return slots_.size(); }
    std::size_t value_count() const;  // total scalar parameters

    ParamSlot& operator[](std::size_t i) { return slots_[i]; }
    const ParamSlot& operator[](std::size_t i) const { return slots_[i]; }

    auto begin() { return slots_.begin(); }
    auto end() { return slots_.end(); }
    auto begin() const { return slots_.begin(); }
    auto end() const { return slots_.end(); }

    void zero_grads();

    // value -= lr * grad for every slot, then grads are zeroed. Throws if
    // any gradient entry is non-finite, naming the offending slot.
    void sgd_step(double lr);

private:
    std::vector<ParamSlot> slots_;
    std::unordered_map<std::string, std::size_t> index_;
};

}  // namespace ltr
