#include "grasp/layers.hpp"

#include "grasp/errors.hpp"
#include "grasp/parallel.hpp"
#include "grasp/rng.hpp"

#include <algorithm>
#include <cmath>

namespace grasp {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw Error(msg);
}

std::size_t conv_extent(std::size_t in, std::size_t k, std::size_t stride,
                        std::size_t pad, const char* axis) {
    require(in + 2 * pad >= k, std::string("conv2d: kernel exceeds padded ") + axis);
    return (in + 2 * pad - k) / stride + 1;
}

} // namespace

// ---------------------------------------------------------------------------
// Conv2d

Conv2d::Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels,
               std::size_t kernel, std::size_t stride, std::size_t pad)
    : in_ch_(in_channels), out_ch_(out_channels), k_(kernel), stride_(stride), pad_(pad),
      weight_(name + ".weight", {out_channels, in_channels, kernel, kernel}),
      bias_(name + ".bias", {out_channels}) {
    require(stride >= 1, "conv2d: stride must be >= 1");
}

Tensor Conv2d::forward(const Tensor& x, Mode) {
    require(x.rank() == 4, "conv2d: expected NCHW input, got shape " + x.shape_str());
    require(x.dim(1) == in_ch_,
            "conv2d " + weight_.name + ": input has " + std::to_string(x.dim(1)) +
                " channels, layer expects " + std::to_string(in_ch_));
    input_ = x;

    const int N = static_cast<int>(x.dim(0)), H = static_cast<int>(x.dim(2)),
              W = static_cast<int>(x.dim(3));
    const int OH = static_cast<int>(conv_extent(H, k_, stride_, pad_, "height"));
    const int OW = static_cast<int>(conv_extent(W, k_, stride_, pad_, "width"));
    const int Cin = static_cast<int>(in_ch_), Cout = static_cast<int>(out_ch_);
    const int k = static_cast<int>(k_), s = static_cast<int>(stride_),
              p = static_cast<int>(pad_);

    Tensor out({x.dim(0), out_ch_, static_cast<std::size_t>(OH),
                static_cast<std::size_t>(OW)});
    const Scalar* xd = x.ptr();
    const Scalar* wd = weight_.value.ptr();
    const Scalar* bd = bias_.value.ptr();
    Scalar* od = out.ptr();

    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ni) {
        const int n = static_cast<int>(ni);
        const Scalar* xn = xd + static_cast<std::size_t>(n) * Cin * H * W;
        Scalar* on = od + static_cast<std::size_t>(n) * Cout * OH * OW;
        for (int co = 0; co < Cout; ++co) {
            Scalar* oc = on + static_cast<std::size_t>(co) * OH * OW;
            std::fill(oc, oc + OH * OW, bd[co]);
            for (int ci = 0; ci < Cin; ++ci) {
                const Scalar* xc = xn + static_cast<std::size_t>(ci) * H * W;
                const Scalar* wc = wd + (static_cast<std::size_t>(co) * Cin + ci) * k * k;
                for (int kh = 0; kh < k; ++kh) {
                    for (int kw = 0; kw < k; ++kw) {
                        const Scalar wv = wc[kh * k + kw];
                        const int lo = p - kw;
                        const int ow_lo = lo > 0 ? (lo + s - 1) / s : 0;
                        const int hi = W - 1 + p - kw;
                        if (hi < 0) continue;
                        const int ow_hi = std::min(OW - 1, hi / s);
                        for (int oh = 0; oh < OH; ++oh) {
                            const int ih = oh * s + kh - p;
                            if (ih < 0 || ih >= H) continue;
                            const Scalar* xrow = xc + static_cast<std::size_t>(ih) * W;
                            Scalar* orow = oc + static_cast<std::size_t>(oh) * OW;
                            if (s == 1) {
                                const Scalar* xs = xrow + (ow_lo + kw - p);
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    orow[ow] += wv * xs[ow - ow_lo];
                            } else {
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    orow[ow] += wv * xrow[ow * s + kw - p];
                            }
                        }
                    }
                }
            }
        }
    });
    return out;
}

Tensor Conv2d::backward(const Tensor& grad_out) {
    const Tensor& x = input_;
    require(x.numel() > 0, "conv2d: backward before forward");
    const int N = static_cast<int>(x.dim(0)), H = static_cast<int>(x.dim(2)),
              W = static_cast<int>(x.dim(3));
    const int Cin = static_cast<int>(in_ch_), Cout = static_cast<int>(out_ch_);
    const int k = static_cast<int>(k_), s = static_cast<int>(stride_),
              p = static_cast<int>(pad_);
    const int OH = static_cast<int>(grad_out.dim(2)), OW = static_cast<int>(grad_out.dim(3));
    require(grad_out.rank() == 4 && static_cast<int>(grad_out.dim(0)) == N &&
                static_cast<int>(grad_out.dim(1)) == Cout,
            "conv2d: gradient shape " + grad_out.shape_str() + " mismatches output");

    Tensor grad_in(x.shape);
    const Scalar* gd = grad_out.ptr();
    const Scalar* wd = weight_.value.ptr();
    const Scalar* xd = x.ptr();
    Scalar* gid = grad_in.ptr();

    // gradient w.r.t. input, one sample per task
    parallel_for(static_cast<std::size_t>(N), [&](std::size_t ni) {
        const int n = static_cast<int>(ni);
        const Scalar* gn = gd + static_cast<std::size_t>(n) * Cout * OH * OW;
        Scalar* gin = gid + static_cast<std::size_t>(n) * Cin * H * W;
        for (int co = 0; co < Cout; ++co) {
            const Scalar* gc = gn + static_cast<std::size_t>(co) * OH * OW;
            for (int ci = 0; ci < Cin; ++ci) {
                Scalar* gi = gin + static_cast<std::size_t>(ci) * H * W;
                const Scalar* wc = wd + (static_cast<std::size_t>(co) * Cin + ci) * k * k;
                for (int kh = 0; kh < k; ++kh) {
                    for (int kw = 0; kw < k; ++kw) {
                        const Scalar wv = wc[kh * k + kw];
                        const int lo = p - kw;
                        const int ow_lo = lo > 0 ? (lo + s - 1) / s : 0;
                        const int hi = W - 1 + p - kw;
                        if (hi < 0) continue;
                        const int ow_hi = std::min(OW - 1, hi / s);
                        for (int oh = 0; oh < OH; ++oh) {
                            const int ih = oh * s + kh - p;
                            if (ih < 0 || ih >= H) continue;
                            Scalar* girow = gi + static_cast<std::size_t>(ih) * W;
                            const Scalar* grow = gc + static_cast<std::size_t>(oh) * OW;
                            if (s == 1) {
                                Scalar* gs = girow + (ow_lo + kw - p);
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    gs[ow - ow_lo] += wv * grow[ow];
                            } else {
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    girow[ow * s + kw - p] += wv * grow[ow];
                            }
                        }
                    }
                }
            }
        }
    });

    // gradients w.r.t. weight and bias, one output channel per task; each
    // channel accumulates over samples in a fixed order, so the result does
    // not depend on scheduling
    Scalar* gwd = weight_.grad.ptr();
    Scalar* gbd = bias_.grad.ptr();
    parallel_for(static_cast<std::size_t>(Cout), [&](std::size_t coi) {
        const int co = static_cast<int>(coi);
        for (int n = 0; n < N; ++n) {
            const Scalar* gc = gd + (static_cast<std::size_t>(n) * Cout + co) * OH * OW;
            const Scalar* xn = xd + static_cast<std::size_t>(n) * Cin * H * W;
            Scalar bacc = 0;
            for (int i = 0; i < OH * OW; ++i) bacc += gc[i];
            gbd[co] += bacc;
            for (int ci = 0; ci < Cin; ++ci) {
                const Scalar* xc = xn + static_cast<std::size_t>(ci) * H * W;
                Scalar* gw = gwd + (static_cast<std::size_t>(co) * Cin + ci) * k * k;
                for (int kh = 0; kh < k; ++kh) {
                    for (int kw = 0; kw < k; ++kw) {
                        const int lo = p - kw;
                        const int ow_lo = lo > 0 ? (lo + s - 1) / s : 0;
                        const int hi = W - 1 + p - kw;
                        if (hi < 0) continue;
                        const int ow_hi = std::min(OW - 1, hi / s);
                        Scalar acc = 0;
                        for (int oh = 0; oh < OH; ++oh) {
                            const int ih = oh * s + kh - p;
                            if (ih < 0 || ih >= H) continue;
                            const Scalar* xrow = xc + static_cast<std::size_t>(ih) * W;
                            const Scalar* grow = gc + static_cast<std::size_t>(oh) * OW;
                            if (s == 1) {
                                const Scalar* xs = xrow + (ow_lo + kw - p);
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    acc += grow[ow] * xs[ow - ow_lo];
                            } else {
                                for (int ow = ow_lo; ow <= ow_hi; ++ow)
                                    acc += grow[ow] * xrow[ow * s + kw - p];
                            }
                        }
                        gw[kh * k + kw] += acc;
                    }
                }
            }
        }
    });
    return grad_in;
}

void Conv2d::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
}

// ---------------------------------------------------------------------------
// FullyConnected

FullyConnected::FullyConnected(std::string name, std::size_t in_features,
                               std::size_t out_features)
    : in_(in_features), out_(out_features),
      weight_(name + ".weight", {out_features, in_features}),
      bias_(name + ".bias", {out_features}) {}

Tensor FullyConnected::forward(const Tensor& x, Mode) {
    require(x.rank() == 2, "fully_connected: expected N x F input, got " + x.shape_str());
    require(x.dim(1) == in_,
            "fully_connected " + weight_.name + ": input width " +
                std::to_string(x.dim(1)) + " != " + std::to_string(in_));
    input_ = x;
    const std::size_t N = x.dim(0);
    Tensor out({N, out_});
    const Scalar* xd = x.ptr();
    const Scalar* wd = weight_.value.ptr();
    const Scalar* bd = bias_.value.ptr();
    Scalar* od = out.ptr();
    for (std::size_t n = 0; n < N; ++n) {
        const Scalar* xr = xd + n * in_;
        Scalar* orow = od + n * out_;
        for (std::size_t o = 0; o < out_; ++o) {
            const Scalar* wr = wd + o * in_;
            Scalar acc = bd[o];
            for (std::size_t i = 0; i < in_; ++i) acc += wr[i] * xr[i];
            orow[o] = acc;
        }
    }
    return out;
}

Tensor FullyConnected::backward(const Tensor& grad_out) {
    const std::size_t N = input_.dim(0);
    require(grad_out.rank() == 2 && grad_out.dim(0) == N && grad_out.dim(1) == out_,
            "fully_connected: gradient shape " + grad_out.shape_str() + " mismatch");
    Tensor grad_in({N, in_});
    const Scalar* gd = grad_out.ptr();
    const Scalar* xd = input_.ptr();
    const Scalar* wd = weight_.value.ptr();
    Scalar* gid = grad_in.ptr();
    Scalar* gwd = weight_.grad.ptr();
    Scalar* gbd = bias_.grad.ptr();
    for (std::size_t n = 0; n < N; ++n) {
        const Scalar* gr = gd + n * out_;
        const Scalar* xr = xd + n * in_;
        Scalar* gir = gid + n * in_;
        for (std::size_t o = 0; o < out_; ++o) {
            const Scalar g = gr[o];
            const Scalar* wr = wd + o * in_;
            Scalar* gw = gwd + o * in_;
            for (std::size_t i = 0; i < in_; ++i) {
                gir[i] += g * wr[i];
                gw[i] += g * xr[i];
            }
            gbd[o] += g;
        }
    }
    return grad_in;
}

void FullyConnected::collect_params(std::vector<Param*>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
}

// ---------------------------------------------------------------------------
// Elementwise layers

Tensor Relu::forward(const Tensor& x, Mode) {
    input_ = x;
    Tensor out(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i)
        out.data[i] = x.data[i] > Scalar(0) ? x.data[i] : Scalar(0);
    return out;
}

Tensor Relu::backward(const Tensor& grad_out) {
    require(grad_out.same_shape(input_), "relu: gradient shape mismatch");
    Tensor grad_in(input_.shape);
    for (std::size_t i = 0; i < input_.numel(); ++i)
        grad_in.data[i] = input_.data[i] > Scalar(0) ? grad_out.data[i] : Scalar(0);
    return grad_in;
}

Tensor TanhLayer::forward(const Tensor& x, Mode) {
    Tensor out(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i)
        out.data[i] = std::tanh(x.data[i]);
    output_ = out;
    return out;
}

Tensor TanhLayer::backward(const Tensor& grad_out) {
    require(grad_out.same_shape(output_), "tanh: gradient shape mismatch");
    Tensor grad_in(output_.shape);
    for (std::size_t i = 0; i < output_.numel(); ++i)
        grad_in.data[i] = grad_out.data[i] * (Scalar(1) - output_.data[i] * output_.data[i]);
    return grad_in;
}

Dropout::Dropout(double p, std::uint64_t seed) : p_(p), rng_(seed) {
    if (!(p >= 0.0 && p < 1.0))
        throw ConfigError("dropout: probability must be in [0, 1), got " +
                          std::to_string(p));
}

Tensor Dropout::forward(const Tensor& x, Mode mode) {
    if (mode == Mode::eval || p_ == 0.0) {
        mask_.clear();
        return x;
    }
    const Scalar keep_scale = Scalar(1.0 / (1.0 - p_));
    mask_.resize(x.numel());
    Tensor out(x.shape);
    for (std::size_t i = 0; i < x.numel(); ++i) {
        mask_[i] = uniform_unit(rng_) >= p_ ? keep_scale : Scalar(0);
        out.data[i] = x.data[i] * mask_[i];
    }
    return out;
}

Tensor Dropout::backward(const Tensor& grad_out) {
    if (mask_.empty()) return grad_out; // identity pass
    require(mask_.size() == grad_out.numel(), "dropout: gradient shape mismatch");
    Tensor grad_in(grad_out.shape);
    for (std::size_t i = 0; i < grad_out.numel(); ++i)
        grad_in.data[i] = grad_out.data[i] * mask_[i];
    return grad_in;
}

Tensor GlobalAvgPool::forward(const Tensor& x, Mode) {
    require(x.rank() == 4, "global_avg_pool: expected NCHW input");
    in_shape_ = x.shape;
    const std::size_t N = x.dim(0), C = x.dim(1), HW = x.dim(2) * x.dim(3);
    Tensor out({N, C});
    const Scalar inv = Scalar(1) / static_cast<Scalar>(HW);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t c = 0; c < C; ++c) {
            const Scalar* p = x.ptr() + (n * C + c) * HW;
            Scalar acc = 0;
            for (std::size_t i = 0; i < HW; ++i) acc += p[i];
            out.data[n * C + c] = acc * inv;
        }
    return out;
}

Tensor GlobalAvgPool::backward(const Tensor& grad_out) {
    require(!in_shape_.empty(), "global_avg_pool: backward before forward");
    const std::size_t N = in_shape_[0], C = in_shape_[1], HW = in_shape_[2] * in_shape_[3];
    require(grad_out.rank() == 2 && grad_out.dim(0) == N && grad_out.dim(1) == C,
            "global_avg_pool: gradient shape mismatch");
    Tensor grad_in(in_shape_);
    const Scalar inv = Scalar(1) / static_cast<Scalar>(HW);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t c = 0; c < C; ++c) {
            const Scalar g = grad_out.data[n * C + c] * inv;
            Scalar* p = grad_in.ptr() + (n * C + c) * HW;
            for (std::size_t i = 0; i < HW; ++i) p[i] = g;
        }
    return grad_in;
}

Tensor L2Normalize::forward(const Tensor& x, Mode) {
    require(x.rank() == 2, "l2norm: expected N x F input, got " + x.shape_str());
    input_ = x;
    const std::size_t N = x.dim(0), F = x.dim(1);
    norms_.resize(N);
    Tensor out(x.shape);
    for (std::size_t n = 0; n < N; ++n) {
        const Scalar* xr = x.ptr() + n * F;
        Scalar acc = 0;
        for (std::size_t i = 0; i < F; ++i) acc += xr[i] * xr[i];
        const Scalar norm = std::sqrt(acc);
        norms_[n] = norm;
        Scalar* orow = out.ptr() + n * F;
        if (norm == Scalar(0)) {
            std::copy(xr, xr + F, orow);
        } else {
            const Scalar inv = Scalar(1) / norm;
            for (std::size_t i = 0; i < F; ++i) orow[i] = xr[i] * inv;
        }
    }
    return out;
}

Tensor L2Normalize::backward(const Tensor& grad_out) {
    require(grad_out.same_shape(input_), "l2norm: gradient shape mismatch");
    const std::size_t N = input_.dim(0), F = input_.dim(1);
    Tensor grad_in(input_.shape);
    for (std::size_t n = 0; n < N; ++n) {
        const Scalar* xr = input_.ptr() + n * F;
        const Scalar* gr = grad_out.ptr() + n * F;
        Scalar* gir = grad_in.ptr() + n * F;
        const Scalar norm = norms_[n];
        if (norm == Scalar(0)) {
            std::copy(gr, gr + F, gir);
            continue;
        }
        const Scalar inv = Scalar(1) / norm;
        Scalar dot = 0;
        for (std::size_t i = 0; i < F; ++i) dot += xr[i] * inv * gr[i];
        for (std::size_t i = 0; i < F; ++i)
            gir[i] = (gr[i] - xr[i] * inv * dot) * inv;
    }
    return grad_in;
}

// ---------------------------------------------------------------------------
// ResidualBlock

ResidualBlock::ResidualBlock(std::string name, std::size_t in_channels,
                             std::size_t out_channels, std::size_t stride)
    : conv1_(std::make_unique<Conv2d>(name + ".conv1", in_channels, out_channels, 3,
                                      stride, 1)),
      conv2_(std::make_unique<Conv2d>(name + ".conv2", out_channels, out_channels, 3,
                                      1, 1)) {
    if (stride != 1 || in_channels != out_channels)
        projection_ = std::make_unique<Conv2d>(name + ".proj", in_channels,
                                               out_channels, 1, stride, 0);
}

Tensor ResidualBlock::forward(const Tensor& x, Mode mode) {
    Tensor f = relu2_.forward(conv2_->forward(relu1_.forward(conv1_->forward(x, mode), mode),
                                              mode),
                              mode);
    const Tensor skip = projection_ ? projection_->forward(x, mode) : x;
    require(f.same_shape(skip),
            "residual_block: branch shape " + f.shape_str() + " mismatches skip " +
                skip.shape_str() + " and no projection is enabled");
    for (std::size_t i = 0; i < f.numel(); ++i) f.data[i] += skip.data[i];
    return f;
}

Tensor ResidualBlock::backward(const Tensor& grad_out) {
    Tensor g = conv1_->backward(
        relu1_.backward(conv2_->backward(relu2_.backward(grad_out))));
    if (projection_) {
        const Tensor gp = projection_->backward(grad_out);
        for (std::size_t i = 0; i < g.numel(); ++i) g.data[i] += gp.data[i];
    } else {
        for (std::size_t i = 0; i < g.numel(); ++i) g.data[i] += grad_out.data[i];
    }
    return g;
}

void ResidualBlock::collect_params(std::vector<Param*>& out) {
    conv1_->collect_params(out);
    conv2_->collect_params(out);
    if (projection_) projection_->collect_params(out);
}

// ---------------------------------------------------------------------------
// Sequential

Tensor Sequential::forward(const Tensor& x, Mode mode) {
    Tensor h = x;
    for (auto& layer : layers_) h = layer->forward(h, mode);
    return h;
}

Tensor Sequential::backward(const Tensor& grad_out) {
    Tensor g = grad_out;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
        g = (*it)->backward(g);
    return g;
}

void Sequential::collect_params(std::vector<Param*>& out) {
    for (auto& layer : layers_) layer->collect_params(out);
}

// ---------------------------------------------------------------------------
// Joins and losses

Tensor concat_features(const Tensor& a, const Tensor& b) {
    require(a.rank() == 2 && b.rank() == 2 && a.dim(0) == b.dim(0),
            "concat: expected two N x F blocks with equal N");
    const std::size_t N = a.dim(0), Fa = a.dim(1), Fb = b.dim(1);
    Tensor out({N, Fa + Fb});
    for (std::size_t n = 0; n < N; ++n) {
        std::copy(a.ptr() + n * Fa, a.ptr() + (n + 1) * Fa, out.ptr() + n * (Fa + Fb));
        std::copy(b.ptr() + n * Fb, b.ptr() + (n + 1) * Fb,
                  out.ptr() + n * (Fa + Fb) + Fa);
    }
    return out;
}

std::pair<Tensor, Tensor> split_features(const Tensor& grad, std::size_t fa,
                                         std::size_t fb) {
    require(grad.rank() == 2 && grad.dim(1) == fa + fb,
            "split_features: gradient width mismatch");
    const std::size_t N = grad.dim(0);
    Tensor ga({N, fa}), gb({N, fb});
    for (std::size_t n = 0; n < N; ++n) {
        std::copy(grad.ptr() + n * (fa + fb), grad.ptr() + n * (fa + fb) + fa,
                  ga.ptr() + n * fa);
        std::copy(grad.ptr() + n * (fa + fb) + fa, grad.ptr() + (n + 1) * (fa + fb),
                  gb.ptr() + n * fb);
    }
    return {std::move(ga), std::move(gb)};
}

LossResult mse_loss(const Tensor& pred, const Tensor& target) {
    require(pred.same_shape(target), "mse_loss: shape mismatch " + pred.shape_str() +
                                         " vs " + target.shape_str());
    const std::size_t N = pred.numel();
    LossResult res;
    res.grad = Tensor(pred.shape);
    double acc = 0;
    const Scalar inv = Scalar(2) / static_cast<Scalar>(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Scalar d = pred.data[i] - target.data[i];
        acc += static_cast<double>(d) * static_cast<double>(d);
        res.grad.data[i] = d * inv;
    }
    res.value = static_cast<Scalar>(acc / static_cast<double>(N));
    return res;
}

Tensor softmax_probs(const Tensor& logits) {
    require(logits.rank() == 2, "softmax: expected N x C logits");
    const std::size_t N = logits.dim(0), C = logits.dim(1);
    Tensor probs(logits.shape);
    for (std::size_t n = 0; n < N; ++n) {
        const Scalar* lr = logits.ptr() + n * C;
        Scalar* pr = probs.ptr() + n * C;
        Scalar mx = lr[0];
        for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, lr[c]);
        Scalar z = 0;
        for (std::size_t c = 0; c < C; ++c) {
            pr[c] = std::exp(lr[c] - mx);
            z += pr[c];
        }
        const Scalar inv = Scalar(1) / z;
        for (std::size_t c = 0; c < C; ++c) pr[c] *= inv;
    }
    return probs;
}

SoftmaxResult softmax_cross_entropy(const Tensor& logits,
                                    const std::vector<int>& labels) {
    require(logits.rank() == 2, "softmax_cross_entropy: expected N x C logits");
    const std::size_t N = logits.dim(0), C = logits.dim(1);
    require(labels.size() == N, "softmax_cross_entropy: label count mismatch");

    SoftmaxResult res;
    res.probs = softmax_probs(logits);
    res.grad = Tensor(logits.shape);
    double loss = 0;
    const Scalar invN = Scalar(1) / static_cast<Scalar>(N);
    for (std::size_t n = 0; n < N; ++n) {
        const int y = labels[n];
        require(y >= 0 && static_cast<std::size_t>(y) < C,
                "softmax_cross_entropy: label out of range");
        const Scalar* lr = logits.ptr() + n * C;
        // log-sum-exp form avoids log(0) for extreme logits
        Scalar mx = lr[0];
        for (std::size_t c = 1; c < C; ++c) mx = std::max(mx, lr[c]);
        Scalar z = 0;
        for (std::size_t c = 0; c < C; ++c) z += std::exp(lr[c] - mx);
        loss += static_cast<double>(std::log(z) - (lr[y] - mx));
        Scalar* gr = res.grad.ptr() + n * C;
        const Scalar* pr = res.probs.ptr() + n * C;
        for (std::size_t c = 0; c < C; ++c)
            gr[c] = (pr[c] - (static_cast<int>(c) == y ? Scalar(1) : Scalar(0))) * invN;
    }
    res.loss = static_cast<Scalar>(loss / static_cast<double>(N));
    return res;
}

} // namespace grasp
