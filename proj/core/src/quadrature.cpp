#include "qfric/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>

namespace qfric {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr double kTiny = std::numeric_limits<double>::min();

constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000,
};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
};

double quadpack_error(double diff, double resasc, double resabs)
{
    double err = std::abs(diff);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    if (resabs > kTiny / (50.0 * kEps))
        err = std::max(50.0 * kEps * resabs, err);
    return err;
}

std::string where(double x)
{
    std::ostringstream os;
    os.precision(17);
    os << "integrand not finite at x = " << x;
    return os.str();
}

struct Panel {
    double a;
    double b;
    double val;
    double err;
};

bool by_error(const Panel& x, const Panel& y) { return x.err < y.err; }

Panel gk15(const Integrand& f, double a, double b, std::size_t& evals)
{
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    std::array<double, 15> fv{};
    for (int j = 0; j < 7; ++j) {
        const double dx = h * kXgk[j];
        fv[2 * j] = f(c - dx);
        fv[2 * j + 1] = f(c + dx);
    }
    fv[14] = f(c);
    evals += 15;
    for (int j = 0; j < 15; ++j) {
        if (!std::isfinite(fv[j])) {
            const double x = j == 14 ? c : (j % 2 == 0 ? c - h * kXgk[j / 2] : c + h * kXgk[j / 2]);
            throw QuadratureError(ErrorKind::NonFiniteIntegrand, where(x), {0.0, std::numeric_limits<double>::infinity(), evals}, x);
        }
    }
    double resk = fv[14] * kWgk[7];
    double resg = fv[14] * kWg[3];
    double resabs = std::abs(resk);
    for (int j = 0; j < 7; ++j) {
        const double s = fv[2 * j] + fv[2 * j + 1];
        resk += kWgk[j] * s;
        resabs += kWgk[j] * (std::abs(fv[2 * j]) + std::abs(fv[2 * j + 1]));
        if (j % 2 == 1)
            resg += kWg[j / 2] * s;
    }
    const double mean = 0.5 * resk;
    double resasc = kWgk[7] * std::abs(fv[14] - mean);
    for (int j = 0; j < 7; ++j)
        resasc += kWgk[j] * (std::abs(fv[2 * j] - mean) + std::abs(fv[2 * j + 1] - mean));
    const double ah = std::abs(h);
    return {a, b, resk * h, quadpack_error((resk - resg) * h, resasc * ah, resabs * ah)};
}

bool splittable(double a, double b)
{
    const double m = 0.5 * (a + b);
    return a < m && m < b && std::abs(b - a) > 8.0 * kEps * std::max(std::abs(a), std::abs(b));
}

double target(const Tolerance& tol, double value) { return std::max(tol.abs, tol.rel * std::abs(value)); }

QuadratureResult gk_adaptive(const Integrand& f, double lo, double hi, const Tolerance& tol)
{
    std::size_t evals = 0;
    std::vector<Panel> heap;
    heap.push_back(gk15(f, lo, hi, evals));
    double total = heap.front().val;
    double err = heap.front().err;
    std::size_t splits = 0;
    while (true) {
        if (err <= target(tol, total)) {
            total = 0.0;
            err = 0.0;
            for (const Panel& p : heap) {
                total += p.val;
                err += p.err;
            }
            if (err <= target(tol, total))
                break;
        }
        const Panel worst = heap.front();
        if (splits >= tol.max_subdivisions || !splittable(worst.a, worst.b)) {
            throw QuadratureError(ErrorKind::MaxSubdivisionsExceeded,
                                  splits >= tol.max_subdivisions ? "subdivision budget exhausted"
                                                                 : "panel width reached round-off",
                                  {total, err, evals}, 0.5 * (worst.a + worst.b));
        }
        std::pop_heap(heap.begin(), heap.end(), by_error);
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        const Panel l = gk15(f, worst.a, m, evals);
        const Panel r = gk15(f, m, worst.b, evals);
        total += l.val + r.val - worst.val;
        err += l.err + r.err - worst.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), by_error);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), by_error);
        ++splits;
    }
    return {total, err, evals};
}

QuadratureResult add(QuadratureResult x, const QuadratureResult& y)
{
    x.value += y.value;
    x.abs_error += y.abs_error;
    x.n_evals += y.n_evals;
    return x;
}

}

QuadratureResult integrate_adaptive(const Integrand& f, double lo, double hi, const Tolerance& tol)
{
    if (lo == hi)
        return {};
    if (lo > hi) {
        QuadratureResult r = gk_adaptive(f, hi, lo, tol);
        r.value = -r.value;
        return r;
    }
    return gk_adaptive(f, lo, hi, tol);
}

QuadratureResult integrate_tanh_sinh(const Integrand& f, double lo, double hi, const Tolerance& tol)
{
    const double c = 0.5 * (lo + hi);
    const double r = 0.5 * (hi - lo);
    const double half_pi = 0.5 * M_PI;
    std::size_t evals = 0;
    auto term = [&](double t) {
        const double s = half_pi * std::sinh(std::abs(t));
        const double ch = std::cosh(s);
        const double d = r / (std::exp(s) * ch);
        const double w = r * half_pi * std::cosh(t) / (ch * ch);
        const double x = t < 0 ? lo + d : hi - d;
        if (d == 0.0 || x <= lo || x >= hi || w == 0.0)
            return 0.0;
        const double fx = f(x);
        ++evals;
        if (!std::isfinite(fx))
            throw QuadratureError(ErrorKind::NonFiniteIntegrand, where(x), {0.0, std::numeric_limits<double>::infinity(), evals}, x);
        return w * fx;
    };
    const double t_max = 6.5;
    double h = 1.0;
    double sum = term(0.0);
    for (double t = h; t <= t_max; t += h)
        sum += term(t) + term(-t);
    double estimate = h * sum;
    double err = std::numeric_limits<double>::infinity();
    for (int level = 1; level <= 12; ++level) {
        h *= 0.5;
        double add_sum = 0.0;
        for (double t = h; t <= t_max; t += 2.0 * h)
            add_sum += term(t) + term(-t);
        sum += add_sum;
        const double next = h * sum;
        err = std::abs(next - estimate);
        estimate = next;
        if (level >= 3 && err <= target(tol, estimate))
            return {estimate, err, evals};
    }
    throw QuadratureError(ErrorKind::MaxSubdivisionsExceeded, "tanh-sinh levels exhausted", {estimate, err, evals}, c);
}

QuadratureResult integrate_endpoint_invsqrt_span(const EdgeIntegrand& f, double lo, double width, EndpointInvSqrt ends,
                                                 const Tolerance& tol)
{
    if (!(width > 0.0) || !std::isfinite(width))
        throw Error(ErrorKind::InvalidIntegrand, "integration width must be positive and finite");
    const double hi = lo + width;
    if (!ends.at_lo && !ends.at_hi)
        return gk_adaptive([&](double d) { return f(lo + d, d, width - d); }, 0.0, width, tol);
    auto from_lo = [&](double span) {
        return gk_adaptive(
            [&](double u) {
                const double d = u * u;
                return 2.0 * u * f(lo + d, d, width - d);
            },
            0.0, std::sqrt(span), tol);
    };
    auto from_hi = [&](double span) {
        return gk_adaptive(
            [&](double u) {
                const double d = u * u;
                return 2.0 * u * f(hi - d, width - d, d);
            },
            0.0, std::sqrt(span), tol);
    };
    try {
        if (ends.at_lo && ends.at_hi)
            return add(from_lo(0.5 * width), from_hi(0.5 * width));
        return ends.at_lo ? from_lo(width) : from_hi(width);
    } catch (const QuadratureError& e) {
        if (e.kind() != ErrorKind::MaxSubdivisionsExceeded)
            throw;
        try {
            return integrate_tanh_sinh([&](double x) { return f(x, x - lo, hi - x); }, lo, hi, tol);
        } catch (const QuadratureError&) {
            throw e;
        }
    }
}

QuadratureResult integrate_endpoint_invsqrt(const EdgeIntegrand& f, double lo, double hi, EndpointInvSqrt ends,
                                            const Tolerance& tol)
{
    if (!(lo < hi))
        throw Error(ErrorKind::InvalidIntegrand, "endpoint-singular integral needs lo < hi");
    return integrate_endpoint_invsqrt_span(f, lo, hi - lo, ends, tol);
}

QuadratureResult integrate_endpoint_invsqrt(const Integrand& f, double lo, double hi, EndpointInvSqrt ends,
                                            const Tolerance& tol)
{
    if (!ends.at_lo && !ends.at_hi)
        return integrate_adaptive(f, lo, hi, tol);
    return integrate_endpoint_invsqrt(EdgeIntegrand([&](double x, double, double) { return f(x); }), lo, hi, ends, tol);
}

QuadratureResult cauchy_pv_span(const EdgeIntegrand& h, double lo, double left, double right, const Tolerance& tol,
                                EndpointInvSqrt ends)
{
    if (!std::isfinite(lo) || !std::isfinite(left) || !std::isfinite(right))
        throw Error(ErrorKind::InvalidIntegrand, "principal value needs finite limits");
    if (!(left > 0.0) || !(right > 0.0))
        throw Error(ErrorKind::PoleOutsideInterval, "principal value needs lo < pole < hi");
    const double pole = lo + left;
    if (std::min(left, right) < 1e-12 * (left + right)) {
        std::ostringstream os;
        os.precision(17);
        os << "pole " << pole << " within 1e-12 of an endpoint of [" << lo << ", " << pole + right << "]";
        throw QuadratureError(ErrorKind::PoleTooCloseToEndpoint, os.str(), {}, pole);
    }
    const double hp = h(pole, left, right);
    if (!std::isfinite(hp))
        throw QuadratureError(ErrorKind::NonFiniteIntegrand, where(pole), {}, pole);
    QuadratureResult r = add(
        integrate_endpoint_invsqrt_span(
            [&](double x, double a, double b) { return (h(x, a, b + right) - hp) / -b; }, lo, left,
            {ends.at_lo, true}, tol),
        integrate_endpoint_invsqrt_span(
            [&](double x, double a, double b) { return (h(x, a + left, b) - hp) / a; }, pole, right,
            {true, ends.at_hi}, tol));
    r.value += hp * std::log(right / left);
    r.n_evals += 1;
    return r;
}

QuadratureResult cauchy_pv(const EdgeIntegrand& h, double pole, double lo, double hi, const Tolerance& tol,
                           EndpointInvSqrt ends)
{
    if (!(lo < hi))
        throw Error(ErrorKind::InvalidIntegrand, "principal value needs lo < hi");
    if (!(pole > lo && pole < hi))
        throw Error(ErrorKind::PoleOutsideInterval, "principal value needs lo < pole < hi");
    return cauchy_pv_span(h, lo, pole - lo, hi - pole, tol, ends);
}

QuadratureResult cauchy_pv(const Integrand& h, double pole, double lo, double hi, const Tolerance& tol,
                           EndpointInvSqrt ends)
{
    return cauchy_pv(EdgeIntegrand([&](double x, double, double) { return h(x); }), pole, lo, hi, tol, ends);
}

QuadratureResult fold_pv(const Integrand& f, double centre, double half_width, const Tolerance& tol)
{
    if (!(half_width > 0.0))
        throw Error(ErrorKind::InvalidIntegrand, "fold needs a positive half width");
    return gk_adaptive(
        [&](double w) {
            const double u = (centre + w * w) - centre;
            if (u == 0.0)
                return 0.0;
            return 2.0 * w * (f(centre + u) + f(centre - u));
        },
        0.0, std::sqrt(half_width), tol);
}

QuadratureResult integrate(const IntegrandSpec& spec, const Tolerance& tol)
{
    if (!spec.f)
        throw Error(ErrorKind::InvalidIntegrand, "empty integrand");
    if (!std::isfinite(spec.lo) || !std::isfinite(spec.hi) || !(spec.lo < spec.hi))
        throw Error(ErrorKind::InvalidIntegrand, "integration limits must be finite with lo < hi");
    EndpointInvSqrt ends;
    const SimplePole* pole = nullptr;
    for (const Singularity& s : spec.singularities) {
        if (const auto* e = std::get_if<EndpointInvSqrt>(&s)) {
            ends.at_lo = ends.at_lo || e->at_lo;
            ends.at_hi = ends.at_hi || e->at_hi;
        } else {
            if (pole)
                throw Error(ErrorKind::InvalidIntegrand, "at most one simple pole is supported");
            pole = &std::get<SimplePole>(s);
        }
    }
    if (pole)
        return cauchy_pv(spec.f, pole->location, spec.lo, spec.hi, tol, ends);
    return integrate_endpoint_invsqrt(spec.f, spec.lo, spec.hi, ends, tol);
}

namespace {

struct VectorPanel {
    double a;
    double b;
    double err;
    std::size_t slot;
};

bool by_vector_error(const VectorPanel& x, const VectorPanel& y) { return x.err < y.err; }

}

VectorQuadratureResult integrate_adaptive_vector(const VectorIntegrand& f, std::size_t dim, double lo, double hi,
                                                 const Tolerance& tol)
{
    VectorQuadratureResult out;
    out.value.assign(dim, 0.0);
    if (lo == hi || dim == 0)
        return out;
    if (lo > hi)
        throw Error(ErrorKind::InvalidIntegrand, "vector integral needs lo <= hi");

    std::vector<double> store;
    std::vector<std::size_t> free_slots;
    std::vector<double> fv(15 * dim);
    std::vector<double> resk(dim);
    auto alloc = [&]() {
        if (!free_slots.empty()) {
            const std::size_t s = free_slots.back();
            free_slots.pop_back();
            return s;
        }
        store.resize(store.size() + dim);
        return store.size() / dim - 1;
    };
    auto eval_panel = [&](double a, double b) {
        const double c = 0.5 * (a + b);
        const double h = 0.5 * (b - a);
        for (int j = 0; j < 7; ++j) {
            f(c - h * kXgk[j], std::span<double>(fv.data() + (2 * j) * dim, dim));
            f(c + h * kXgk[j], std::span<double>(fv.data() + (2 * j + 1) * dim, dim));
        }
        f(c, std::span<double>(fv.data() + 14 * dim, dim));
        out.n_evals += 15;
        const std::size_t slot = alloc();
        double worst = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            double rk = fv[14 * dim + k] * kWgk[7];
            double rg = fv[14 * dim + k] * kWg[3];
            double ra = std::abs(rk);
            for (int j = 0; j < 7; ++j) {
                const double x1 = fv[(2 * j) * dim + k];
                const double x2 = fv[(2 * j + 1) * dim + k];
                rk += kWgk[j] * (x1 + x2);
                ra += kWgk[j] * (std::abs(x1) + std::abs(x2));
                if (j % 2 == 1)
                    rg += kWg[j / 2] * (x1 + x2);
            }
            const double mean = 0.5 * rk;
            double rasc = kWgk[7] * std::abs(fv[14 * dim + k] - mean);
            for (int j = 0; j < 7; ++j)
                rasc += kWgk[j] * (std::abs(fv[(2 * j) * dim + k] - mean) + std::abs(fv[(2 * j + 1) * dim + k] - mean));
            if (!std::isfinite(rk))
                throw QuadratureError(ErrorKind::NonFiniteIntegrand, where(c), {}, c);
            store[slot * dim + k] = rk * h;
            worst = std::max(worst, quadpack_error((rk - rg) * h, rasc * std::abs(h), ra * std::abs(h)));
        }
        return VectorPanel{a, b, worst, slot};
    };
    auto scale = [&]() {
        double m = 0.0;
        for (double x : out.value)
            m = std::max(m, std::abs(x));
        return m;
    };

    std::vector<VectorPanel> heap;
    heap.push_back(eval_panel(lo, hi));
    std::copy_n(store.begin(), dim, out.value.begin());
    double err = heap.front().err;
    std::size_t splits = 0;
    while (true) {
        if (err <= target(tol, scale())) {
            std::fill(out.value.begin(), out.value.end(), 0.0);
            err = 0.0;
            for (const VectorPanel& p : heap) {
                for (std::size_t k = 0; k < dim; ++k)
                    out.value[k] += store[p.slot * dim + k];
                err += p.err;
            }
            if (err <= target(tol, scale()))
                break;
        }
        const VectorPanel worst = heap.front();
        if (splits >= tol.max_subdivisions || !splittable(worst.a, worst.b)) {
            out.abs_error = err;
            throw QuadratureError(ErrorKind::MaxSubdivisionsExceeded, "vector subdivision budget exhausted",
                                  {scale(), err, out.n_evals}, 0.5 * (worst.a + worst.b));
        }
        std::pop_heap(heap.begin(), heap.end(), by_vector_error);
        heap.pop_back();
        const double m = 0.5 * (worst.a + worst.b);
        const VectorPanel l = eval_panel(worst.a, m);
        const VectorPanel r = eval_panel(m, worst.b);
        for (std::size_t k = 0; k < dim; ++k)
            out.value[k] += store[l.slot * dim + k] + store[r.slot * dim + k] - store[worst.slot * dim + k];
        free_slots.push_back(worst.slot);
        err += l.err + r.err - worst.err;
        heap.push_back(l);
        std::push_heap(heap.begin(), heap.end(), by_vector_error);
        heap.push_back(r);
        std::push_heap(heap.begin(), heap.end(), by_vector_error);
        ++splits;
    }
    out.abs_error = err;
    return out;
}

}
