#include "grasp/predict.hpp"

#include "grasp/errors.hpp"
#include "grasp/trainer.hpp"

#include <algorithm>

namespace grasp {

namespace {

Tensor single_batch(const Tensor& input) {
    Tensor batch({1, input.dim(0), input.dim(1), input.dim(2)});
    batch.data = input.data;
    return batch;
}

} // namespace

Prediction predict_grasp(ModelGraph& model, const RgbdSample& sample,
                         const RunConfig& cfg) {
    if (cfg.variant == Variant::graspability)
        throw Error("predict_grasp: graspability models classify candidates, "
                    "use predict_graspability");
    const bool multi_input = model.is_multi_input();
    const NetInput in_a = make_net_input(
        sample, cfg.preprocess, multi_input ? Modality::rgb : cfg.modality);
    const Tensor a = single_batch(net_input_to_tensor(in_a));
    Tensor b;
    if (multi_input)
        b = single_batch(net_input_to_tensor(
            make_net_input(sample, cfg.preprocess, Modality::depth3)));

    const Tensor out = model.forward(a, multi_input ? &b : nullptr, Mode::eval);
    if (out.rank() != 2 || out.dim(1) != 4)
        throw Error("predict_grasp: model emitted " + out.shape_str() +
                    ", expected [1, 4]");

    Prediction pred;
    pred.raw = TargetVec{static_cast<double>(out.data[0]),
                         static_cast<double>(out.data[1]),
                         static_cast<double>(out.data[2]),
                         static_cast<double>(out.data[3])};
    GraspRect rect =
        decode_output(pred.raw, in_a.crop_origin, in_a.patch_size, cfg.fixed_h,
                      cfg.fixed_w, cfg.preprocess.angle_encoding);

    const double max_x = sample.rgb.width - 1.0;
    const double max_y = sample.rgb.height - 1.0;
    const double cx = std::clamp(rect.x(), 0.0, max_x);
    const double cy = std::clamp(rect.y(), 0.0, max_y);
    pred.clamped = (cx != rect.x()) || (cy != rect.y());
    pred.rect = GraspRect(cx, cy, rect.h(), rect.w(), rect.theta());
    return pred;
}

double predict_graspability(ModelGraph& model, const RgbdSample& sample,
                            const GraspRect& candidate, const RunConfig& cfg) {
    if (cfg.variant != Variant::graspability)
        throw Error("predict_graspability: model is not the graspability variant");
    PreprocessConfig pp = cfg.preprocess;
    pp.patch_policy = PatchPolicy::grasp_centered;
    const Point2 center = candidate.center();
    const Tensor a =
        single_batch(net_input_to_tensor(make_net_input(sample, pp, Modality::rgb, center)));
    const Tensor b = single_batch(
        net_input_to_tensor(make_net_input(sample, pp, Modality::depth3, center)));
    const Tensor logits = model.forward(a, &b, Mode::eval);
    const Tensor probs = softmax_probs(logits);
    return static_cast<double>(probs.data[1]); // class 1 = graspable
}

FoldEval evaluate_fold_with(const PredictorFn& predictor,
                            const std::vector<RgbdSample>& samples,
                            const MetricConfig& metrics) {
    if (samples.empty()) throw DataError("evaluate_fold: empty fold");
    FoldEval eval;
    std::size_t successes = 0;
    for (const RgbdSample& s : samples) {
        SampleOutcome outcome;
        outcome.id = s.id;
        if (s.positive_grasps.empty()) {
            outcome.note = "no positive annotations";
            eval.outcomes.push_back(std::move(outcome));
            continue;
        }
        const Prediction pred = predictor(s);
        const MatchResult match =
            rectangle_metric(pred.rect, s.positive_grasps, metrics);
        outcome.evaluated = true;
        outcome.success = match.success;
        outcome.jaccard = match.jaccard;
        outcome.delta_theta = match.angle_delta;
        outcome.matched_index = match.index;
        outcome.clamped = pred.clamped;
        outcome.pred_x = pred.rect.x();
        outcome.pred_y = pred.rect.y();
        outcome.pred_h = pred.rect.h();
        outcome.pred_w = pred.rect.w();
        outcome.pred_theta = pred.rect.theta();
        ++eval.evaluated;
        successes += match.success ? 1 : 0;
        eval.outcomes.push_back(std::move(outcome));
    }
    if (eval.evaluated == 0)
        throw DataError("evaluate_fold: no sample in the fold could be scored");
    eval.accuracy = static_cast<double>(successes) / static_cast<double>(eval.evaluated);
    return eval;
}

FoldEval evaluate_fold(ModelGraph& model, const std::vector<RgbdSample>& samples,
                       const RunConfig& cfg) {
    return evaluate_fold_with(
        [&](const RgbdSample& s) { return predict_grasp(model, s, cfg); }, samples,
        cfg.metrics);
}

} // namespace grasp
