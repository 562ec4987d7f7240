#pragma once

#include "grasp/layers.hpp"
#include "grasp/tensor.hpp"

#include <cstdint>
#include <unordered_map>
#include <vector>

namespace grasp {

struct SgdConfig {
    double lr0 = 0.001;     // base learning rate
    double decay = 1e-6;    // per-update: lr_t = lr0 / (1 + decay * t)
    double momentum = 0.9;  // in [0, 1)

    void validate() const;
};

// SGD with classical momentum and inverse-time decay. One step() per
// mini-batch; the step counter feeds the decay schedule.
class Sgd {
public:
    explicit Sgd(SgdConfig cfg);

    // v <- momentum * v - lr_t * grad;  p <- p + v. Frozen parameters are
    // untouched. Throws TrainAbort on a non-finite gradient.
    void step(const std::vector<Param*>& params);

    double effective_lr() const; // lr at the current step count
    std::size_t step_count() const { return step_count_; }

    double base_lr() const { return cfg_.lr0; }
    void set_base_lr(double lr0) { cfg_.lr0 = lr0; }

private:
    SgdConfig cfg_;
    std::size_t step_count_ = 0;
    std::unordered_map<Param*, Tensor> velocity_;
};

// Reduce-on-plateau scan over a per-epoch loss history: every time the best
// loss fails to improve for `patience` consecutive epochs, the rate is
// multiplied by `factor` (never below min_lr). Returns the rate implied by
// the full history. Deterministic.
double plateau_lr(double lr0, const std::vector<double>& history, int patience,
                  double factor, double min_lr);

// Xavier/Glorot uniform fill: +-sqrt(6 / (fan_in + fan_out)), deterministic
// per seed. Rank-2 weights use [out, in]; rank-4 convolution kernels use
// [out, in, kh, kw] with fan scaled by the receptive field. Values are
// quantized to the 32-bit float grid so freshly initialized models survive
// the weight-file round trip bit-exactly.
void xavier_init(Tensor& t, std::uint64_t seed);

} // namespace grasp
