#include "grasp/model.hpp"

#include "grasp/errors.hpp"
#include "grasp/optim.hpp"
#include "grasp/rng.hpp"

namespace grasp {

namespace {

Sequential make_backbone(const std::string& prefix, const BackboneSpec& spec) {
    Sequential seq;
    seq.add(std::make_unique<Conv2d>(prefix + ".stem", 3, spec.stem_channels, 3, 2, 1));
    seq.add(std::make_unique<Relu>());
    std::size_t in_ch = spec.stem_channels;
    for (std::size_t si = 0; si < spec.stages.size(); ++si) {
        const auto& stage = spec.stages[si];
        for (std::size_t bi = 0; bi < stage.blocks; ++bi) {
            const std::size_t stride = (si > 0 && bi == 0) ? 2 : 1;
            seq.add(std::make_unique<ResidualBlock>(
                prefix + ".stage" + std::to_string(si) + ".block" + std::to_string(bi),
                in_ch, stage.channels, stride));
            in_ch = stage.channels;
        }
    }
    seq.add(std::make_unique<GlobalAvgPool>());
    return seq;
}

} // namespace

ModelGraph::ModelGraph(const RunConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    feature_width_ = cfg_.backbone.stages.back().channels;

    backbone_a_ = make_backbone(is_multi_input() ? "rgb_backbone" : "backbone",
                                cfg_.backbone);
    if (is_multi_input()) backbone_b_ = make_backbone("depth_backbone", cfg_.backbone);

    // head: FC stack with variant-determined dropout placement
    const std::vector<std::size_t> dropout_after =
        cfg_.variant == Variant::uni_modal ? std::vector<std::size_t>{0}
                                           : std::vector<std::size_t>{0, 1};
    std::size_t in = head_input_width();
    std::uint64_t dropout_salt = 1000;
    for (std::size_t i = 0; i < cfg_.head.widths.size(); ++i) {
        head_.add(std::make_unique<FullyConnected>("head.fc" + std::to_string(i), in,
                                                   cfg_.head.widths[i]));
        in = cfg_.head.widths[i];
        switch (cfg_.head.activations[i]) {
            case Activation::relu: head_.add(std::make_unique<Relu>()); break;
            case Activation::tanh: head_.add(std::make_unique<TanhLayer>()); break;
            case Activation::linear: break;
        }
        for (std::size_t pos : dropout_after)
            if (pos == i && i + 1 < cfg_.head.widths.size())
                head_.add(std::make_unique<Dropout>(cfg_.head.dropout_p,
                                                    mix_seed(cfg_.seed, ++dropout_salt)));
    }

    // Xavier for every weight matrix/kernel, zero biases
    std::uint64_t salt = 0;
    for (Param* p : all_params()) {
        if (p->value.rank() >= 2)
            xavier_init(p->value, mix_seed(cfg_.seed, ++salt));
        else
            p->value.zero();
    }
}

std::size_t ModelGraph::head_input_width() const {
    return is_multi_input() ? 2 * feature_width_ : feature_width_;
}

std::size_t ModelGraph::param_count() const {
    std::size_t n = 0;
    std::vector<Param*> params;
    const_cast<ModelGraph*>(this)->backbone_a_.collect_params(params);
    if (is_multi_input()) const_cast<ModelGraph*>(this)->backbone_b_.collect_params(params);
    const_cast<ModelGraph*>(this)->head_.collect_params(params);
    for (const Param* p : params) n += p->value.numel();
    return n;
}

Tensor ModelGraph::features(const Tensor& a, const Tensor* b, Mode mode) {
    if (!is_multi_input()) return backbone_a_.forward(a, mode);
    if (!b) throw Error("model: multi-modal forward needs both inputs");
    const Tensor fa = norm_a_.forward(backbone_a_.forward(a, mode), mode);
    const Tensor fb = norm_b_.forward(backbone_b_.forward(*b, mode), mode);
    return concat_features(fa, fb);
}

Tensor ModelGraph::head_forward(const Tensor& f, Mode mode) {
    return head_.forward(f, mode);
}

void ModelGraph::head_backward(const Tensor& grad_out) { head_.backward(grad_out); }

Tensor ModelGraph::forward(const Tensor& a, const Tensor* b, Mode mode) {
    return head_.forward(features(a, b, mode), mode);
}

void ModelGraph::backward(const Tensor& grad_out) {
    const Tensor gf = head_.backward(grad_out);
    if (!is_multi_input()) {
        backbone_a_.backward(gf);
        return;
    }
    auto [ga, gb] = split_features(gf, feature_width_, feature_width_);
    backbone_a_.backward(norm_a_.backward(ga));
    backbone_b_.backward(norm_b_.backward(gb));
}

std::vector<Param*> ModelGraph::backbone_params() {
    std::vector<Param*> params;
    backbone_a_.collect_params(params);
    if (is_multi_input()) backbone_b_.collect_params(params);
    return params;
}

std::vector<Param*> ModelGraph::head_params() {
    std::vector<Param*> params;
    head_.collect_params(params);
    return params;
}

std::vector<Param*> ModelGraph::all_params() {
    std::vector<Param*> params = backbone_params();
    head_.collect_params(params);
    return params;
}

void ModelGraph::set_backbone_frozen(bool frozen) {
    for (Param* p : backbone_params()) p->frozen = frozen;
}

std::unique_ptr<ModelGraph> build_model(const RunConfig& cfg) {
    return std::make_unique<ModelGraph>(cfg);
}

} // namespace grasp
