#include "grasp/optim.hpp"

#include "grasp/errors.hpp"
#include "grasp/rng.hpp"

#include <cmath>

namespace grasp {

void SgdConfig::validate() const {
    if (!(lr0 > 0.0)) throw ConfigError("sgd: lr0 must be > 0");
    if (!(decay >= 0.0)) throw ConfigError("sgd: decay must be >= 0");
    if (!(momentum >= 0.0 && momentum < 1.0))
        throw ConfigError("sgd: momentum must be in [0, 1)");
}

Sgd::Sgd(SgdConfig cfg) : cfg_(cfg) { cfg_.validate(); }

double Sgd::effective_lr() const {
    return cfg_.lr0 / (1.0 + cfg_.decay * static_cast<double>(step_count_));
}

void Sgd::step(const std::vector<Param*>& params) {
    const Scalar lr = static_cast<Scalar>(effective_lr());
    const Scalar mu = static_cast<Scalar>(cfg_.momentum);
    for (Param* p : params) {
        if (p->frozen) continue;
        if (!p->grad.all_finite())
            throw TrainAbort("sgd: non-finite gradient in parameter '" + p->name + "'");
        auto [it, inserted] = velocity_.try_emplace(p, p->value.shape);
        Tensor& v = it->second;
        for (std::size_t i = 0; i < v.numel(); ++i) {
            v.data[i] = mu * v.data[i] - lr * p->grad.data[i];
            p->value.data[i] += v.data[i];
        }
    }
    ++step_count_;
}

double plateau_lr(double lr0, const std::vector<double>& history, int patience,
                  double factor, double min_lr) {
    if (patience <= 0) throw ConfigError("plateau: patience must be > 0");
    if (!(factor > 0.0 && factor < 1.0))
        throw ConfigError("plateau: factor must be in (0, 1)");
    double lr = lr0;
    if (history.empty()) return lr;
    double best = history[0];
    int stall = 0;
    for (std::size_t i = 1; i < history.size(); ++i) {
        if (history[i] < best) {
            best = history[i];
            stall = 0;
        } else if (++stall >= patience) {
            lr = std::max(lr * factor, min_lr);
            stall = 0;
        }
    }
    return lr;
}

void xavier_init(Tensor& t, std::uint64_t seed) {
    std::size_t fan_in, fan_out;
    if (t.rank() == 2) {
        fan_out = t.dim(0);
        fan_in = t.dim(1);
    } else if (t.rank() == 4) {
        const std::size_t rf = t.dim(2) * t.dim(3);
        fan_out = t.dim(0) * rf;
        fan_in = t.dim(1) * rf;
    } else {
        throw Error("xavier_init: fan-in/fan-out not derivable from shape " +
                    t.shape_str());
    }
    const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::mt19937_64 rng(seed);
    for (Scalar& v : t.data) {
        const double u = uniform_real(rng, -bound, bound);
        v = static_cast<Scalar>(static_cast<float>(u)); // f32 grid, see header
    }
}

} // namespace grasp
