#include "icenet/optimizer.hpp"

#include <algorithm>
#include <cmath>

namespace icenet {

Adam::Adam(std::vector<ad::Var> params, double lr, double beta1, double beta2, double eps)
    : learning_rate(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {
    if (lr <= 0.0) throw ConfigError("learning rate must be positive");
    for (auto& p : params)
        slots_.push_back({p, std::vector<double>(p->size(), 0.0),
                          std::vector<double>(p->size(), 0.0)});
}

void Adam::zero_grad() {
    for (auto& s : slots_) std::fill(s.param->grad.begin(), s.param->grad.end(), 0.0);
}

void Adam::step() {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (auto& s : slots_) {
        for (std::size_t i = 0; i < s.param->size(); ++i) {
            const double g = s.param->grad[i];
            s.m[i] = beta1_ * s.m[i] + (1.0 - beta1_) * g;
            s.v[i] = beta2_ * s.v[i] + (1.0 - beta2_) * g * g;
            const double mhat = s.m[i] / bc1;
            const double vhat = s.v[i] / bc2;
            s.param->val[i] -= learning_rate * mhat / (std::sqrt(vhat) + eps_);
        }
    }
}

}  // namespace icenet
