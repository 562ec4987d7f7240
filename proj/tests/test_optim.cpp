#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "grasp/errors.hpp"
#include "grasp/optim.hpp"

#include <cmath>

using namespace grasp;

namespace {

Param make_param(const std::string& name, std::vector<std::size_t> shape, Scalar v) {
    Param p(name, std::move(shape));
    p.value.fill(v);
    return p;
}

} // namespace

TEST_CASE("sgd plain step without momentum or decay") {
    Param p = make_param("p", {1}, 0);
    p.grad.fill(1);
    Sgd sgd({0.1, 0.0, 0.0});
    sgd.step({&p});
    CHECK(p.value.data[0] == doctest::Approx(-0.1));
    CHECK(sgd.step_count() == 1);
}

TEST_CASE("sgd two-step momentum recurrence") {
    // v1 = -0.1, p1 = -0.1; v2 = 0.9*(-0.1) - 0.1 = -0.19, p2 = -0.29
    Param p = make_param("p", {1}, 0);
    Sgd sgd({0.1, 0.0, 0.9});
    p.grad.fill(1);
    sgd.step({&p});
    p.zero_grad();
    p.grad.fill(1);
    sgd.step({&p});
    CHECK(p.value.data[0] == doctest::Approx(-0.29).epsilon(1e-12));
}

TEST_CASE("sgd decay follows lr0 / (1 + decay * t)") {
    Sgd sgd({0.5, 0.25, 0.0});
    CHECK(sgd.effective_lr() == doctest::Approx(0.5)); // t = 0
    Param p = make_param("p", {1}, 0);
    p.grad.fill(0); // no-op updates, just advance the counter
    sgd.step({&p});
    CHECK(sgd.effective_lr() == doctest::Approx(0.5 / 1.25));
    sgd.step({&p});
    CHECK(sgd.effective_lr() == doctest::Approx(0.5 / 1.5));
}

TEST_CASE("frozen parameters keep their bits") {
    Param p = make_param("p", {4}, 1.2345);
    p.frozen = true;
    const auto before = p.value.data;
    p.grad.fill(42);
    Sgd sgd({0.1, 0.0, 0.9});
    for (int i = 0; i < 10; ++i) sgd.step({&p});
    CHECK(p.value.data == before);
}

TEST_CASE("sgd aborts on non-finite gradients") {
    Param p = make_param("p", {2}, 0);
    p.grad.data[1] = std::numeric_limits<Scalar>::quiet_NaN();
    Sgd sgd({0.1, 0.0, 0.0});
    CHECK_THROWS_WITH_AS(sgd.step({&p}), doctest::Contains("'p'"), TrainAbort);
}

TEST_CASE("sgd config validation") {
    CHECK_THROWS_AS(Sgd({0.0, 0.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(Sgd({0.1, -1.0, 0.0}), ConfigError);
    CHECK_THROWS_AS(Sgd({0.1, 0.0, 1.0}), ConfigError);
}

TEST_CASE("plateau schedule") {
    SUBCASE("strictly decreasing losses leave the rate unchanged") {
        CHECK(plateau_lr(0.1, {5, 4, 3, 2, 1}, 2, 0.1, 1e-6) == doctest::Approx(0.1));
    }
    SUBCASE("flat losses reduce once after epoch 3 with patience 2") {
        CHECK(plateau_lr(0.1, {1.0, 1.0, 1.0}, 2, 0.1, 1e-6) ==
              doctest::Approx(0.01));
        // one more flat epoch: stall counter restarted, no second cut yet
        CHECK(plateau_lr(0.1, {1.0, 1.0, 1.0, 1.0}, 2, 0.1, 1e-6) ==
              doctest::Approx(0.01));
        // two more: second cut
        CHECK(plateau_lr(0.1, {1.0, 1.0, 1.0, 1.0, 1.0}, 2, 0.1, 1e-6) ==
              doctest::Approx(0.001));
    }
    SUBCASE("never drops below min_lr") {
        CHECK(plateau_lr(1e-4, {1, 1, 1}, 2, 0.1, 1e-4) == doctest::Approx(1e-4));
        CHECK(plateau_lr(1e-3, std::vector<double>(20, 1.0), 2, 0.1, 1e-4) ==
              doctest::Approx(1e-4));
    }
    SUBCASE("improvement resets the stall counter") {
        CHECK(plateau_lr(0.1, {3, 3, 2, 2, 1}, 2, 0.5, 1e-6) == doctest::Approx(0.1));
    }
    SUBCASE("config validation") {
        CHECK_THROWS_AS(plateau_lr(0.1, {1.0}, 0, 0.1, 1e-6), ConfigError);
        CHECK_THROWS_AS(plateau_lr(0.1, {1.0}, 2, 1.5, 1e-6), ConfigError);
    }
}

TEST_CASE("xavier_init statistics and determinism") {
    Tensor t({64, 48});
    xavier_init(t, 2024);
    const double bound = std::sqrt(6.0 / (64 + 48));
    double sum = 0;
    for (Scalar v : t.data) {
        CHECK(std::fabs(v) <= bound);
        sum += v;
    }
    const std::size_t n = t.numel();
    // mean within 3 sigma of 0: sigma_mean = bound / sqrt(3 n)
    const double sigma_mean = bound / std::sqrt(3.0 * n);
    CHECK(std::fabs(sum / n) < 3 * sigma_mean);

    Tensor t2({64, 48});
    xavier_init(t2, 2024);
    CHECK(t.data == t2.data);
    Tensor t3({64, 48});
    xavier_init(t3, 2025);
    CHECK(t.data != t3.data);
}

TEST_CASE("xavier_init conv fan uses the receptive field") {
    Tensor t({8, 4, 3, 3});
    xavier_init(t, 7);
    const double bound = std::sqrt(6.0 / ((8 + 4) * 9));
    for (Scalar v : t.data) CHECK(std::fabs(v) <= bound);
    Tensor bias({8});
    CHECK_THROWS_AS(xavier_init(bias, 7), Error);
}

TEST_CASE("xavier_init large-sample mean bound") {
    Tensor t({500, 200}); // 1e5 draws
    xavier_init(t, 99);
    const double bound = std::sqrt(6.0 / 700);
    double sum = 0;
    for (Scalar v : t.data) sum += v;
    const double sigma_mean = bound / std::sqrt(3.0 * t.numel());
    CHECK(std::fabs(sum / t.numel()) < 3 * sigma_mean);
}
