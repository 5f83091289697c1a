#pragma once

#include <functional>
#include <string>
#include <vector>

#include "ltr/param_store.hpp"

namespace ltr {

struct GradCheckEntry {
    std::string param;
    std::size_t index;
    double analytic;
    double numeric;
    double rel_error;
};

struct GradCheckReport {
    double max_rel_error = 0.0;
    bool pass = true;
    GradCheckEntry worst;                  // entry attaining max_rel_error
    std::vector<GradCheckEntry> failures;  // entries exceeding tol
    std::size_t checked = 0;
};

// Compares the analytic gradients already accumulated in the stores' grad
// buffers against central finite differences of `loss`, which must be a
// deterministic forward evaluation (dropout in eval mode, rng fixed).
//
// rel_error = |analytic - numeric| / max(|analytic|, |numeric|, 1e-6); the
// floor keeps finite-difference noise on near-zero gradients from reading
// as large relative errors.
//
// Throws std::runtime_error if `loss` returns a non-finite value.
GradCheckReport grad_check(std::vector<ParamStore*> stores,
                           const std::function<double()>& loss,
                           double h = 1e-5, double tol = 1e-4);

GradCheckReport grad_check(ParamStore& store, const std::function<double()>& loss,
                           double h = 1e-5, double tol = 1e-4);

}  // namespace ltr
