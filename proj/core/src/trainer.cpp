#include "grasp/trainer.hpp"

#include "grasp/errors.hpp"
#include "grasp/optim.hpp"
#include "grasp/parallel.hpp"
#include "grasp/rng.hpp"

#include <cmath>

namespace grasp {

Tensor net_input_to_tensor(const NetInput& in) {
    const std::size_t S = static_cast<std::size_t>(in.size);
    Tensor t({3, S, S});
    for (std::size_t i = 0; i < t.numel(); ++i)
        t.data[i] = static_cast<Scalar>(in.pixels[i]);
    return t;
}

namespace {

Tensor target_to_tensor(const TargetVec& v) {
    Tensor t({4});
    const auto arr = v.as_array();
    for (std::size_t i = 0; i < 4; ++i) t.data[i] = static_cast<Scalar>(arr[i]);
    return t;
}

// batch of [3,S,S] inputs -> [B,3,S,S]
Tensor stack_inputs(const std::vector<TrainExample>& examples,
                    const std::vector<std::size_t>& idx, bool second_input) {
    const Tensor& proto = second_input ? *examples[idx[0]].input_b
                                       : examples[idx[0]].input_a;
    Tensor batch({idx.size(), proto.dim(0), proto.dim(1), proto.dim(2)});
    const std::size_t stride = proto.numel();
    for (std::size_t i = 0; i < idx.size(); ++i) {
        const Tensor& src =
            second_input ? *examples[idx[i]].input_b : examples[idx[i]].input_a;
        std::copy(src.data.begin(), src.data.end(), batch.data.begin() + i * stride);
    }
    return batch;
}

Tensor stack_targets(const std::vector<TrainExample>& examples,
                     const std::vector<std::size_t>& idx) {
    Tensor batch({idx.size(), 4});
    for (std::size_t i = 0; i < idx.size(); ++i)
        std::copy(examples[idx[i]].target.data.begin(),
                  examples[idx[i]].target.data.end(), batch.data.begin() + i * 4);
    return batch;
}

std::vector<int> gather_labels(const std::vector<TrainExample>& examples,
                               const std::vector<std::size_t>& idx) {
    std::vector<int> labels(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) labels[i] = examples[idx[i]].label;
    return labels;
}

void zero_grads(const std::vector<Param*>& params) {
    for (Param* p : params) p->zero_grad();
}

} // namespace

std::vector<TrainExample> build_examples(const std::vector<RgbdSample>& samples,
                                         const RunConfig& cfg) {
    std::vector<TrainExample> examples;
    const bool multi_input = cfg.variant != Variant::uni_modal;

    for (const RgbdSample& s : samples) {
        auto make_inputs = [&](Point2 center, TrainExample& ex) {
            if (multi_input) {
                ex.input_a = net_input_to_tensor(
                    make_net_input(s, cfg.preprocess, Modality::rgb, center));
                ex.input_b = net_input_to_tensor(
                    make_net_input(s, cfg.preprocess, Modality::depth3, center));
            } else {
                ex.input_a = net_input_to_tensor(
                    make_net_input(s, cfg.preprocess, cfg.modality, center));
            }
        };

        if (cfg.variant == Variant::graspability) {
            for (const auto* rects : {&s.positive_grasps, &s.negative_grasps}) {
                const int label = rects == &s.positive_grasps ? 1 : 0;
                for (const GraspRect& g : *rects) {
                    TrainExample ex;
                    ex.sample_id = s.id;
                    ex.label = label;
                    make_inputs(g.center(), ex);
                    examples.push_back(std::move(ex));
                }
            }
            continue;
        }

        if (s.positive_grasps.empty()) continue; // nothing to regress against
        if (cfg.preprocess.patch_policy == PatchPolicy::grasp_centered) {
            for (const GraspRect& g : s.positive_grasps) {
                TrainExample ex;
                ex.sample_id = s.id;
                make_inputs(g.center(), ex);
                const NetInput probe =
                    make_net_input(s, cfg.preprocess,
                                   multi_input ? Modality::rgb : cfg.modality,
                                   g.center());
                ex.target = target_to_tensor(encode_target(
                    g, probe.crop_origin, probe.patch_size, cfg.preprocess.angle_encoding));
                examples.push_back(std::move(ex));
            }
        } else {
            TrainExample ex;
            ex.sample_id = s.id;
            make_inputs({0, 0}, ex);
            const NetInput probe = make_net_input(
                s, cfg.preprocess, multi_input ? Modality::rgb : cfg.modality);
            ex.target = target_to_tensor(
                encode_target(s.positive_grasps.front(), probe.crop_origin,
                              probe.patch_size, cfg.preprocess.angle_encoding));
            examples.push_back(std::move(ex));
        }
    }
    return examples;
}

TrainResult train_on_examples(ModelGraph& model,
                              const std::vector<TrainExample>& examples,
                              const RunConfig& cfg) {
    if (examples.empty()) throw DataError("train: no usable training examples");
    if (cfg.threads > 0) set_thread_count(cfg.threads);
    const bool multi_input = model.is_multi_input();
    const bool classify = cfg.variant == Variant::graspability;
    const std::size_t n = examples.size();

    std::mt19937_64 shuffle_rng(cfg.seed ^ 0x5bd1e995u);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    TrainResult result;
    result.example_count = n;

    auto run_batch_loss = [&](const Tensor& out, const std::vector<std::size_t>& idx,
                              Tensor& grad) -> double {
        if (classify) {
            const SoftmaxResult r = softmax_cross_entropy(out, gather_labels(examples, idx));
            grad = r.grad;
            return static_cast<double>(r.loss);
        }
        const LossResult r = mse_loss(out, stack_targets(examples, idx));
        grad = r.grad;
        return static_cast<double>(r.value);
    };

    auto check_loss = [](double loss, const char* stage, int epoch, std::size_t batch) {
        if (!std::isfinite(loss))
            throw TrainAbort(std::string("non-finite training loss in ") + stage +
                             ", epoch " + std::to_string(epoch + 1) + ", batch " +
                             std::to_string(batch + 1));
    };

    // ---- stage 1: frozen backbone, head only --------------------------------
    model.set_backbone_frozen(true);
    const StagePlan& s1 = cfg.train.stage1;
    if (s1.epochs > 0) {
        // A frozen backbone maps each example to a constant feature vector;
        // compute them once instead of per epoch.
        const std::size_t fw = model.head_input_width();
        Tensor feature_cache({n, fw});
        {
            const std::size_t chunk = static_cast<std::size_t>(s1.batch_size);
            for (std::size_t start = 0; start < n; start += chunk) {
                std::vector<std::size_t> idx;
                for (std::size_t i = start; i < std::min(n, start + chunk); ++i)
                    idx.push_back(i);
                const Tensor a = stack_inputs(examples, idx, false);
                Tensor b;
                if (multi_input) b = stack_inputs(examples, idx, true);
                const Tensor f =
                    model.features(a, multi_input ? &b : nullptr, Mode::eval);
                std::copy(f.data.begin(), f.data.end(),
                          feature_cache.data.begin() + start * fw);
            }
        }

        Sgd sgd({s1.lr0, s1.decay, s1.momentum});
        const auto head_params = model.head_params();
        for (int epoch = 0; epoch < s1.epochs; ++epoch) {
            fisher_yates(order, shuffle_rng);
            double epoch_loss = 0;
            std::size_t batch_index = 0;
            for (std::size_t start = 0; start < n;
                 start += static_cast<std::size_t>(s1.batch_size), ++batch_index) {
                const std::size_t end = std::min(n, start + s1.batch_size);
                const std::size_t bs = end - start;
                std::vector<std::size_t> idx(order.begin() + start, order.begin() + end);
                Tensor fb({bs, fw});
                for (std::size_t i = 0; i < bs; ++i)
                    std::copy(feature_cache.data.begin() + idx[i] * fw,
                              feature_cache.data.begin() + (idx[i] + 1) * fw,
                              fb.data.begin() + i * fw);
                zero_grads(head_params);
                const Tensor out = model.head_forward(fb, Mode::train);
                Tensor grad;
                const double loss = run_batch_loss(out, idx, grad);
                check_loss(loss, "stage 1", epoch, batch_index);
                model.head_backward(grad);
                sgd.step(head_params);
                epoch_loss += loss * static_cast<double>(bs);
            }
            result.history.stage1.push_back(epoch_loss / static_cast<double>(n));
        }
    }

    // ---- stage 2: end-to-end fine-tuning ------------------------------------
    model.set_backbone_frozen(false);
    const StagePlan& s2 = cfg.train.stage2;
    if (s2.epochs > 0) {
        Sgd sgd({s2.lr0, s2.decay, s2.momentum});
        const auto all_params = model.all_params();
        for (int epoch = 0; epoch < s2.epochs; ++epoch) {
            fisher_yates(order, shuffle_rng);
            double epoch_loss = 0;
            std::size_t batch_index = 0;
            for (std::size_t start = 0; start < n;
                 start += static_cast<std::size_t>(s2.batch_size), ++batch_index) {
                const std::size_t end = std::min(n, start + s2.batch_size);
                const std::size_t bs = end - start;
                std::vector<std::size_t> idx(order.begin() + start, order.begin() + end);
                const Tensor a = stack_inputs(examples, idx, false);
                Tensor b;
                if (multi_input) b = stack_inputs(examples, idx, true);
                zero_grads(all_params);
                const Tensor out = model.forward(a, multi_input ? &b : nullptr, Mode::train);
                Tensor grad;
                const double loss = run_batch_loss(out, idx, grad);
                check_loss(loss, "stage 2", epoch, batch_index);
                model.backward(grad);
                sgd.step(all_params);
                epoch_loss += loss * static_cast<double>(bs);
            }
            result.history.stage2.push_back(epoch_loss / static_cast<double>(n));
            const double lr = plateau_lr(s2.lr0, result.history.stage2,
                                         cfg.train.plateau.patience,
                                         cfg.train.plateau.factor,
                                         cfg.train.plateau.min_lr);
            sgd.set_base_lr(lr);
            result.history.stage2_lr.push_back(lr);
        }
    }
    return result;
}

TrainResult train(ModelGraph& model, const std::vector<RgbdSample>& samples,
                  const RunConfig& cfg) {
    return train_on_examples(model, build_examples(samples, cfg), cfg);
}

} // namespace grasp
