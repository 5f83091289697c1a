#include "ltr/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ltr {

GradCheckReport grad_check(std::vector<ParamStore*> stores,
                           const std::function<double()>& loss, double h,
                           double tol) {
    GradCheckReport report;
    for (ParamStore* store : stores) {
        for (auto& slot : *store) {
            for (std::size_t i = 0; i < slot.value.size(); ++i) {
                double& theta = slot.value.data()[i];
                const double saved = theta;
                theta = saved + h;
                const double up = loss();
                theta = saved - h;
                const double down = loss();
                theta = saved;
                if (!std::isfinite(up) || !std::isfinite(down)) {
                    throw std::runtime_error("grad_check: non-finite loss at slot '" +
                                             slot.name + "'");
                }
                const double numeric = (up - down) / (2.0 * h);
                const double analytic = slot.grad.data()[i];
                const double denom =
                        std::max({std::fabs(analytic), std::fabs(numeric), 1e-6});
                const double rel = std::fabs(analytic - numeric) / denom;
                GradCheckEntry entry{slot.name, i, analytic, numeric, rel};
                if (rel > report.max_rel_error) {
                    report.max_rel_error = rel;
                    report.worst = entry;
                }
                if (rel > tol) report.failures.push_back(entry);
                ++report.checked;
            }
        }
    }
    report.pass = report.failures.empty();
    return report;
}

GradCheckReport grad_check(ParamStore& store, const std::function<double()>& loss,
                           double h, double tol) {
    return grad_check(std::vector<ParamStore*>{&store}, loss, h, tol);
}

}  // namespace ltr
