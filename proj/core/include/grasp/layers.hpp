#pragma once

#include "grasp/tensor.hpp"

#include <cstdint>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace grasp {

enum class Mode { train, eval };

// Named parameter with gradient accumulator. Frozen parameters receive no
// optimizer updates (bit-identical across steps).
struct Param {
    std::string name;
    Tensor value;
    Tensor grad;
    bool frozen = false;

    explicit Param(std::string n, std::vector<std::size_t> shape)
        : name(std::move(n)), value(shape), grad(std::move(shape)) {}
    void zero_grad() { grad.zero(); }
};

// Layers cache whatever forward state their backward pass needs; the
// training loop always pairs one forward with at most one backward.
class Layer {
public:
    virtual ~Layer() = default;
    virtual Tensor forward(const Tensor& x, Mode mode) = 0;
    virtual Tensor backward(const Tensor& grad_out) = 0;
    virtual void collect_params(std::vector<Param*>&) {}
    virtual std::string kind() const = 0;
};

// 2-D cross-correlation, NCHW, zero padding.
// out spatial extent = (in + 2*pad - k) / stride + 1.
class Conv2d : public Layer {
public:
    Conv2d(std::string name, std::size_t in_channels, std::size_t out_channels,
           std::size_t kernel, std::size_t stride, std::size_t pad);

    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    std::string kind() const override { return "conv2d"; }

    Param& weight() { return weight_; }
    Param& bias() { return bias_; }
    std::size_t stride() const { return stride_; }

private:
    std::size_t in_ch_, out_ch_, k_, stride_, pad_;
    Param weight_; // [out, in, k, k]
    Param bias_;   // [out]
    Tensor input_; // cached for backward
};

class FullyConnected : public Layer {
public:
    FullyConnected(std::string name, std::size_t in_features, std::size_t out_features);

    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    std::string kind() const override { return "fully_connected"; }

    Param& weight() { return weight_; }
    Param& bias() { return bias_; }
    std::size_t in_features() const { return in_; }
    std::size_t out_features() const { return out_; }

private:
    std::size_t in_, out_;
    Param weight_; // [out, in]
    Param bias_;   // [out]
    Tensor input_;
};

class Relu : public Layer {
public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "relu"; }

private:
    Tensor input_;
};

class TanhLayer : public Layer {
public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "tanh"; }

private:
    Tensor output_;
};

// Inverted dropout: training scales kept activations by 1/(1-p); evaluation
// is the identity. p == 0 short-circuits to identity in both modes.
class Dropout : public Layer {
public:
    Dropout(double p, std::uint64_t seed);

    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "dropout"; }

private:
    double p_;
    std::mt19937_64 rng_;
    std::vector<Scalar> mask_;
};

// N x C x H x W -> N x C mean over the spatial extent.
class GlobalAvgPool : public Layer {
public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "global_avg_pool"; }

private:
    std::vector<std::size_t> in_shape_;
};

// Row-wise Euclidean normalization of N x F features. Zero rows pass
// through unchanged (matching l2_normalize's degenerate policy).
class L2Normalize : public Layer {
public:
    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    std::string kind() const override { return "l2norm"; }

private:
    Tensor input_;
    std::vector<Scalar> norms_;
};

// Residual block: out = F(x) + skip(x) where F is a ReLU-terminated
// conv-ReLU-conv-ReLU stack. With stride > 1 or a channel change the skip
// path is a 1x1 projection convolution; otherwise it is the identity, and
// a zero-initialized branch reproduces the input bit for bit.
class ResidualBlock : public Layer {
public:
    ResidualBlock(std::string name, std::size_t in_channels, std::size_t out_channels,
                  std::size_t stride);

    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    std::string kind() const override { return "residual_block"; }

    bool has_projection() const { return projection_ != nullptr; }
    Conv2d& conv1() { return *conv1_; }
    Conv2d& conv2() { return *conv2_; }
    Conv2d* projection() { return projection_.get(); }

private:
    std::unique_ptr<Conv2d> conv1_;
    std::unique_ptr<Conv2d> conv2_;
    std::unique_ptr<Conv2d> projection_;
    Relu relu1_, relu2_;
};

class Sequential : public Layer {
public:
    Sequential() = default;
    void add(std::unique_ptr<Layer> layer) { layers_.push_back(std::move(layer)); }

    Tensor forward(const Tensor& x, Mode mode) override;
    Tensor backward(const Tensor& grad_out) override;
    void collect_params(std::vector<Param*>& out) override;
    std::string kind() const override { return "sequential"; }

    std::size_t size() const { return layers_.size(); }
    Layer& at(std::size_t i) { return *layers_.at(i); }

private:
    std::vector<std::unique_ptr<Layer>> layers_;
};

// Feature-axis concatenation of two N x F blocks, with the matching
// gradient split.
Tensor concat_features(const Tensor& a, const Tensor& b);
std::pair<Tensor, Tensor> split_features(const Tensor& grad, std::size_t fa,
                                         std::size_t fb);

struct LossResult {
    Scalar value = 0;
    Tensor grad; // d loss / d prediction
};

// Mean over all elements of the squared difference; grad = 2 (pred - target) / N.
LossResult mse_loss(const Tensor& pred, const Tensor& target);

struct SoftmaxResult {
    Scalar loss = 0;
    Tensor probs; // same shape as logits, rows sum to 1
    Tensor grad;  // d loss / d logits
};

// Row-wise softmax (max-subtracted for stability) with mean cross-entropy
// against integer labels.
SoftmaxResult softmax_cross_entropy(const Tensor& logits,
                                    const std::vector<int>& labels);

// Softmax probabilities only (inference path).
Tensor softmax_probs(const Tensor& logits);

} // namespace grasp
