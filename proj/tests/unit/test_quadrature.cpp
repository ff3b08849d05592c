#include "goldens.hpp"

#include "qfric/quadrature.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>

using namespace qfric;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}

TEST_CASE("adaptive rule reproduces smooth and oscillatory references")
{
    CHECK(rel(integrate_adaptive([](double x) { return x * x; }, 0.0, 1.0).value, 1.0 / 3.0) < 1e-14);
    CHECK(rel(integrate_adaptive([](double x) { return std::sin(x); }, 0.0, M_PI).value, 2.0) < 1e-14);
    const QuadratureResult r = integrate_adaptive([](double x) { return std::sin(50.0 * x) / (1.0 + x); }, 0.0, 1.0);
    CHECK(rel(r.value, golden::osc_sin50_over_1px) < 1e-10);
    CHECK(r.n_evals > 0);
}

TEST_CASE("adaptive rule is bit-for-bit deterministic")
{
    auto f = [](double x) { return std::exp(-x) * std::cos(17.0 * x); };
    const double a = integrate_adaptive(f, 0.0, 3.0).value;
    const double b = integrate_adaptive(f, 0.0, 3.0).value;
    CHECK(a == b);
}

TEST_CASE("endpoint inverse square root singularities")
{
    CHECK(rel(integrate_endpoint_invsqrt([](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {true, false}).value,
              2.0)
          < 1e-12);
    CHECK(rel(integrate_endpoint_invsqrt([](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0,
                                         {true, true})
                  .value,
              M_PI)
          < 1e-12);
    CHECK(rel(integrate_endpoint_invsqrt([](double x) { return std::cos(x) / std::sqrt(x); }, 0.0, 1.0, {true, false})
                  .value,
              golden::cos_over_sqrt)
          < 1e-12);
    CHECK(rel(integrate_endpoint_invsqrt([](double x) { return 1.0 / std::sqrt(x * (1.0 - x)); }, 0.0, 1.0,
                                         {true, true})
                  .value,
              M_PI)
          < 1e-12);
}

TEST_CASE("band integral equals pi over sqrt(1 - v^2) for every velocity")
{
    for (double w0 : {0.03, 1.0, 7.5})
        for (int i = 0; i <= 9; ++i) {
            const double v = 0.1 * i;
            const double lo = -w0 / (1.0 + v);
            const double hi = w0 / (1.0 - v);
            const QuadratureResult r = integrate_endpoint_invsqrt(
                [=](double p) { return 1.0 / std::sqrt((v * v - 1.0) * p * p + 2.0 * w0 * v * p + w0 * w0); }, lo, hi,
                {true, true});
            CHECK(rel(r.value, M_PI / std::sqrt(1.0 - v * v)) < 1e-8);
        }
}

TEST_CASE("edge-distance form of the endpoint rule")
{
    const double width = 2e-3;
    const QuadratureResult r = integrate_endpoint_invsqrt_span(
        [](double, double a, double b) { return 1.0 / std::sqrt(a * b); }, 1e6, width, {true, true});
    CHECK(rel(r.value, M_PI) < 1e-12);
}

TEST_CASE("principal values")
{
    CHECK(std::abs(cauchy_pv([](double) { return 1.0; }, 0.0, -1.0, 1.0).value) < 1e-15);
    CHECK(rel(cauchy_pv([](double) { return 1.0; }, 0.0, -1.0, 2.0).value, std::log(2.0)) < 1e-14);
    CHECK(rel(cauchy_pv([](double x) { return std::exp(x); }, 1.0, 0.0, 2.0).value, golden::pv_exp_over_xm1) < 1e-11);
    CHECK(rel(cauchy_pv([](double x) { return 1.0 / (x + 2.0); }, 0.0, -1.0, 3.0).value, golden::pv_inv_x_xp2)
          < 1e-11);
    const QuadratureResult spec
        = integrate({[](double x) { return std::exp(x); }, 0.0, 2.0, {SimplePole{1.0}}});
    CHECK(rel(spec.value, golden::pv_exp_over_xm1) < 1e-11);
}

TEST_CASE("principal value with an endpoint singularity on one side")
{
    // PV int_0^1 x^(-1/2) / (x - 1/4) dx = -2 ln 3.
    const QuadratureResult r
        = cauchy_pv([](double x) { return 1.0 / std::sqrt(x); }, 0.25, 0.0, 1.0, {}, {true, false});
    CHECK(rel(r.value, -2.0 * std::log(3.0)) < 1e-10);
}

TEST_CASE("fold rule for a pole of unknown residue")
{
    auto f = [](double x) { return std::exp(x) / (x - 1.0); };
    const QuadratureResult r = fold_pv(f, 1.0, 1.0);
    CHECK(rel(r.value, golden::pv_exp_over_xm1) < 1e-11);
    CHECK(std::abs(r.value - golden::pv_exp_over_xm1) <= 10.0 * r.abs_error + 1e-15);
    auto g = [](double x) { return std::cos(x) / (x - 0.3); };
    // PV int_0^0.6 cos(x)/(x - 0.3) dx via the known-residue route.
    const double ref = cauchy_pv([](double x) { return std::cos(x); }, 0.3, 0.0, 0.6).value;
    CHECK(std::abs(fold_pv(g, 0.3, 0.3).value - ref) < 1e-11);
}

TEST_CASE("tanh-sinh tolerates endpoint singularities")
{
    CHECK(rel(integrate_tanh_sinh([](double x) { return std::log(x) / std::sqrt(x); }, 0.0, 1.0).value, -4.0) < 1e-10);
    CHECK(rel(integrate_tanh_sinh([](double x) { return 1.0 / std::sqrt(-x); }, -1.0, 0.0).value, 2.0) < 1e-10);
}

TEST_CASE("vector rule agrees with the scalar rule component by component")
{
    const VectorQuadratureResult r = integrate_adaptive_vector(
        [](double x, std::span<double> out) {
            for (std::size_t k = 0; k < out.size(); ++k)
                out[k] = std::cos(static_cast<double>(k) * x) * std::exp(-x);
        },
        8, 0.0, 10.0, {1e-12, 0.0, 20000});
    for (std::size_t k = 0; k < 8; ++k) {
        const double kk = static_cast<double>(k);
        const double exact = (1.0 - std::exp(-10.0) * (std::cos(10.0 * kk) - kk * std::sin(10.0 * kk))) / (1.0 + kk * kk);
        CHECK(std::abs(r.value[k] - exact) < 1e-11);
    }
}

TEST_CASE("error reporting")
{
    SUBCASE("subdivision budget exhausted carries the best estimate")
    {
        try {
            integrate_adaptive([](double x) { return std::sin(1.0 / x); }, 1e-6, 1.0, {1e-14, 0.0, 5});
            FAIL("expected MaxSubdivisionsExceeded");
        } catch (const QuadratureError& e) {
            CHECK(e.kind() == ErrorKind::MaxSubdivisionsExceeded);
            CHECK(std::isfinite(e.best().value));
            CHECK(e.best().abs_error > 0.0);
        }
    }
    SUBCASE("non-finite integrand reports its location")
    {
        try {
            integrate_adaptive([](double x) { return x > 0.5 ? std::numeric_limits<double>::quiet_NaN() : 1.0; }, 0.0,
                               1.0);
            FAIL("expected NonFiniteIntegrand");
        } catch (const QuadratureError& e) {
            CHECK(e.kind() == ErrorKind::NonFiniteIntegrand);
            CHECK(e.location() > 0.5);
        }
    }
    SUBCASE("pole policy")
    {
        try {
            cauchy_pv([](double) { return 1.0; }, 1e-13, 0.0, 1.0);
            FAIL("expected PoleTooCloseToEndpoint");
        } catch (const QuadratureError& e) {
            CHECK(e.kind() == ErrorKind::PoleTooCloseToEndpoint);
        }
        try {
            cauchy_pv([](double) { return 1.0; }, 2.0, 0.0, 1.0);
            FAIL("expected PoleOutsideInterval");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::PoleOutsideInterval);
        }
        CHECK_NOTHROW(cauchy_pv([](double) { return 1.0; }, 2e-12, 0.0, 1.0));
    }
    SUBCASE("invalid specifications")
    {
        CHECK_THROWS_AS(integrate({nullptr, 0.0, 1.0, {}}), Error);
        CHECK_THROWS_AS(integrate({[](double) { return 1.0; }, 1.0, 0.0, {}}), Error);
        CHECK_THROWS_AS(integrate({[](double) { return 1.0; }, 0.0, 1.0, {SimplePole{0.2}, SimplePole{0.5}}}), Error);
    }
}

TEST_CASE("reported error estimates are honest on a battery")
{
    struct Case {
        IntegrandSpec spec;
        double exact;
    };
    const double e = std::exp(1.0);
    const std::vector<Case> battery = {
        {{[](double x) { return x * x; }, 0.0, 1.0, {}}, 1.0 / 3.0},
        {{[](double x) { return std::exp(x); }, 0.0, 1.0, {}}, e - 1.0},
        {{[](double x) { return std::sin(x); }, 0.0, M_PI, {}}, 2.0},
        {{[](double x) { return 1.0 / (1.0 + x * x); }, 0.0, 1.0, {}}, M_PI / 4.0},
        {{[](double x) { return std::sqrt(x); }, 0.0, 1.0, {}}, 2.0 / 3.0},
        {{[](double x) { return std::log(x); }, 0.0, 1.0, {}}, -1.0},
        {{[](double x) { return std::cos(30.0 * x); }, 0.0, 1.0, {}}, std::sin(30.0) / 30.0},
        {{[](double x) { return std::exp(-x * x); }, -3.0, 3.0, {}}, std::sqrt(M_PI) * std::erf(3.0)},
        {{[](double x) { return 1.0 / (1.0 + 25.0 * x * x); }, -1.0, 1.0, {}}, 2.0 * std::atan(5.0) / 5.0},
        {{[](double x) { return x * std::sin(10.0 * x); }, 0.0, 2.0 * M_PI, {}}, -M_PI / 5.0},
        {{[](double x) { return std::abs(x - 1.0 / 3.0); }, 0.0, 1.0, {}}, 5.0 / 18.0},
        {{[](double x) { return 1.0 / ((x - 0.3) * (x - 0.3) + 1e-4); }, 0.0, 1.0, {}},
         100.0 * (std::atan(70.0) + std::atan(30.0))},
        {{[](double x) { return std::sin(50.0 * x) / (1.0 + x); }, 0.0, 1.0, {}}, golden::osc_sin50_over_1px},
        {{[](double x) { return 1.0 / std::sqrt(x); }, 0.0, 1.0, {EndpointInvSqrt{true, false}}}, 2.0},
        {{[](double x) { return 1.0 / std::sqrt(1.0 - x * x); }, -1.0, 1.0, {EndpointInvSqrt{true, true}}}, M_PI},
        {{[](double x) { return std::cos(x) / std::sqrt(x); }, 0.0, 1.0, {EndpointInvSqrt{true, false}}},
         golden::cos_over_sqrt},
        {{[](double x) { return std::exp(x); }, 0.0, 2.0, {SimplePole{1.0}}}, golden::pv_exp_over_xm1},
        {{[](double x) { return 1.0 / (x + 2.0); }, -1.0, 3.0, {SimplePole{0.0}}}, golden::pv_inv_x_xp2},
        {{[](double) { return 1.0; }, -1.0, 2.0, {SimplePole{0.0}}}, std::log(2.0)},
        {{[](double x) { return std::exp(-x) * std::cos(5.0 * x); }, 0.0, 20.0, {}},
         (1.0 - std::exp(-20.0) * (std::cos(100.0) - 5.0 * std::sin(100.0))) / 26.0},
    };
    std::size_t honest = 0;
    for (const Case& c : battery) {
        const QuadratureResult r = integrate(c.spec);
        // The reference itself is only known to the last couple of ulps.
        const double floor = 4.0 * std::numeric_limits<double>::epsilon() * std::abs(c.exact);
        if (std::abs(r.value - c.exact) <= std::max(10.0 * r.abs_error, floor))
            ++honest;
    }
    CHECK(static_cast<double>(honest) >= 0.95 * static_cast<double>(battery.size()));
}
