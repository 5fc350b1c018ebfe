#pragma once

#include <vector>

#include "icenet/ad.hpp"

namespace icenet {

// Adam with bias-corrected moment estimates.
class Adam {
public:
    explicit Adam(std::vector<ad::Var> params, double lr = 0.001, double beta1 = 0.9,
                  double beta2 = 0.999, double eps = 1e-8);

    void zero_grad();
    void step();

    double learning_rate;

private:
    struct Slot {
        ad::Var param;
        std::vector<double> m, v;
    };
    std::vector<Slot> slots_;
    double beta1_, beta2_, eps_;
    long t_ = 0;
};

}  // namespace icenet
