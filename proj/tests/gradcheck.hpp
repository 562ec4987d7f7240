#pragma once

// Central finite-difference gradient checker (the independent oracle for
// every differentiable operation). A random fixed projection R turns a
// tensor-valued op into the scalar L = sum(out * R), whose analytic input
// gradient is backward(R).

#include "grasp/layers.hpp"
#include "grasp/rng.hpp"

#include <cmath>
#include <functional>
#include <random>

namespace gradcheck {

inline grasp::Tensor random_like(const grasp::Tensor& t, std::uint64_t seed) {
    grasp::Tensor r(t.shape);
    std::mt19937_64 rng(seed);
    for (auto& v : r.data)
        v = static_cast<grasp::Scalar>(grasp::uniform_real(rng, -1.0, 1.0));
    return r;
}

inline double rel_err(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

inline double dot(const grasp::Tensor& a, const grasp::Tensor& b) {
    double acc = 0;
    for (std::size_t i = 0; i < a.numel(); ++i)
        acc += static_cast<double>(a.data[i]) * static_cast<double>(b.data[i]);
    return acc;
}

// Max relative error between analytic and numeric input gradients for a
// deterministic forward function.
inline double check_input(const std::function<grasp::Tensor(const grasp::Tensor&)>& fwd,
                          grasp::Tensor x, const grasp::Tensor& projection,
                          const grasp::Tensor& analytic, double eps = 1e-5) {
    double worst = 0;
    for (std::size_t i = 0; i < x.numel(); ++i) {
        const grasp::Scalar keep = x.data[i];
        x.data[i] = keep + static_cast<grasp::Scalar>(eps);
        const double lp = dot(fwd(x), projection);
        x.data[i] = keep - static_cast<grasp::Scalar>(eps);
        const double lm = dot(fwd(x), projection);
        x.data[i] = keep;
        const double numeric = (lp - lm) / (2 * eps);
        worst = std::max(worst, rel_err(static_cast<double>(analytic.data[i]), numeric));
    }
    return worst;
}

// Full check of a layer: analytic backward vs central differences for the
// input and every parameter. The layer's forward must be deterministic.
inline double check_layer(grasp::Layer& layer, const grasp::Tensor& x,
                          grasp::Mode mode = grasp::Mode::train,
                          std::uint64_t seed = 1234, double eps = 1e-5) {
    using grasp::Tensor;
    const Tensor out0 = layer.forward(x, mode);
    const Tensor projection = random_like(out0, seed);

    std::vector<grasp::Param*> params;
    layer.collect_params(params);
    for (auto* p : params) p->zero_grad();
    layer.forward(x, mode);
    const Tensor analytic_in = layer.backward(projection);

    auto fwd = [&](const Tensor& xi) { return layer.forward(xi, mode); };
    double worst = check_input(fwd, x, projection, analytic_in, eps);

    for (auto* p : params) {
        for (std::size_t i = 0; i < p->value.numel(); ++i) {
            const grasp::Scalar keep = p->value.data[i];
            p->value.data[i] = keep + static_cast<grasp::Scalar>(eps);
            const double lp = dot(layer.forward(x, mode), projection);
            p->value.data[i] = keep - static_cast<grasp::Scalar>(eps);
            const double lm = dot(layer.forward(x, mode), projection);
            p->value.data[i] = keep;
            const double numeric = (lp - lm) / (2 * eps);
            worst = std::max(worst,
                             rel_err(static_cast<double>(p->grad.data[i]), numeric));
        }
    }
    // restore caches to the unperturbed state
    layer.forward(x, mode);
    return worst;
}

} // namespace gradcheck
