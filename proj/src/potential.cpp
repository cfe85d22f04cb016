#include "qgraph/potential.hpp"

#include "qgraph/error.hpp"

#include <algorithm>
#include <array>
#include <boost/numeric/odeint.hpp>

namespace qgraph {

PotentialSpec PotentialSpec::constant(double v) {
    PotentialSpec p;
    p.kind = Kind::PiecewiseConstant;
    p.breakpoints = {0.0};
    p.values = {v};
    return p;
}

PotentialSpec PotentialSpec::piecewise(std::vector<double> breaks, std::vector<double> vals) {
    if (breaks.empty() || breaks.front() != 0.0 || breaks.size() != vals.size())
        throw InputError("piecewise potential: breakpoints must start at 0 and pair with values");
    if (!std::is_sorted(breaks.begin(), breaks.end()))
        throw InputError("piecewise potential: breakpoints must be increasing");
    PotentialSpec p;
    p.kind = Kind::PiecewiseConstant;
    p.breakpoints = std::move(breaks);
    p.values = std::move(vals);
    return p;
}

PotentialSpec PotentialSpec::polynomial(std::vector<double> c) {
    PotentialSpec p;
    p.kind = Kind::Polynomial;
    p.coeffs = std::move(c);
    return p;
}

bool PotentialSpec::is_zero() const {
    switch (kind) {
    case Kind::Zero: return true;
    case Kind::PiecewiseConstant:
        return std::all_of(values.begin(), values.end(), [](double v) { return v == 0.0; });
    case Kind::Polynomial:
        return std::all_of(coeffs.begin(), coeffs.end(), [](double c) { return c == 0.0; });
    }
    return false;
}

double PotentialSpec::eval(double x) const {
    switch (kind) {
    case Kind::Zero: return 0.0;
    case Kind::PiecewiseConstant: {
        auto it = std::upper_bound(breakpoints.begin(), breakpoints.end(), x);
        std::size_t i = (it == breakpoints.begin()) ? 0 : std::size_t(it - breakpoints.begin() - 1);
        return values[i];
    }
    case Kind::Polynomial: {
        double acc = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
        return acc;
    }
    }
    return 0.0;
}

PotentialSpec PotentialSpec::mirrored(double l) const {
    switch (kind) {
    case Kind::Zero: return *this;
    case Kind::PiecewiseConstant: {
        PotentialSpec p;
        p.kind = Kind::PiecewiseConstant;
        // segment [b_i, b_{i+1}) of value v_i maps to [l - b_{i+1}, l - b_i)
        std::vector<double> ends(breakpoints.begin() + 1, breakpoints.end());
        ends.push_back(l);
        for (std::size_t i = values.size(); i-- > 0;) {
            p.breakpoints.push_back(l - ends[i]);
            p.values.push_back(values[i]);
        }
        p.breakpoints.front() = 0.0;
        return p;
    }
    case Kind::Polynomial: {
        // substitute x -> l - x
        std::vector<double> c(coeffs.size(), 0.0);
        std::vector<double> binom(coeffs.size(), 0.0);
        for (std::size_t n = 0; n < coeffs.size(); ++n) {
            // (l - x)^n expansion
            double pw = 1.0;
            std::vector<double> row(n + 1);
            // compute binomial coefficients iteratively
            row[0] = 1.0;
            for (std::size_t k = 1; k <= n; ++k) row[k] = row[k - 1] * double(n - k + 1) / double(k);
            for (std::size_t k = 0; k <= n; ++k) {
                double lp = std::pow(l, double(n - k));
                c[k] += coeffs[n] * row[k] * lp * ((k % 2) ? -1.0 : 1.0);
            }
            (void)pw;
        }
        return polynomial(std::move(c));
    }
    }
    return *this;
}

PotentialSpec PotentialSpec::shifted(double c) const {
    PotentialSpec p = *this;
    switch (kind) {
    case Kind::Zero:
        return constant(c);
    case Kind::PiecewiseConstant:
        for (auto& v : p.values) v += c;
        return p;
    case Kind::Polynomial:
        if (p.coeffs.empty()) p.coeffs.push_back(0.0);
        p.coeffs[0] += c;
        return p;
    }
    return p;
}

namespace {

// Exact propagator over a segment of constant potential v and width d:
// (u, u') at the far end in terms of (u, u') at the near end, for
// gamma*u - u'' + v*u = 0, i.e. u'' = (gamma + v) u.
Eigen::Matrix2cd segment_propagator(cplx gamma_plus_v, double d) {
    cplx s = std::sqrt(gamma_plus_v);
    Eigen::Matrix2cd T;
    if (std::abs(s) * d < 1e-8) {
        // series around s = 0; sinh(sd)/s -> d
        cplx s2 = gamma_plus_v;
        T(0, 0) = 1.0 + s2 * d * d / 2.0;
        T(0, 1) = d + s2 * d * d * d / 6.0;
        T(1, 0) = s2 * d + s2 * s2 * d * d * d / 6.0;
        T(1, 1) = 1.0 + s2 * d * d / 2.0;
    } else {
        cplx ch = std::cosh(s * d), sh = std::sinh(s * d);
        T(0, 0) = ch;
        T(0, 1) = sh / s;
        T(1, 0) = s * sh;
        T(1, 1) = ch;
    }
    return T;
}

using OdeState = std::array<cplx, 4>;

} // namespace

Eigen::Matrix2cd fundamental_matrix(const PotentialSpec& pot, double length, cplx gamma, double x) {
    if (x < 0.0 || x > length + 1e-12) throw InputError("fundamental_matrix: position outside bond");
    x = std::min(x, length);
    switch (pot.kind) {
    case PotentialSpec::Kind::Zero:
        return segment_propagator(gamma, x);
    case PotentialSpec::Kind::PiecewiseConstant: {
        Eigen::Matrix2cd T = Eigen::Matrix2cd::Identity();
        for (std::size_t i = 0; i < pot.values.size(); ++i) {
            double a = pot.breakpoints[i];
            double b = (i + 1 < pot.breakpoints.size()) ? pot.breakpoints[i + 1] : length;
            b = std::min(b, x);
            if (b <= a) break;
            T = segment_propagator(gamma + pot.values[i], b - a) * T;
        }
        return T;
    }
    case PotentialSpec::Kind::Polynomial: {
        namespace ode = boost::numeric::odeint;
        OdeState y{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
        if (x > 0.0) {
            auto rhs = [&](const OdeState& s, OdeState& dsdt, double t) {
                cplx q = gamma + pot.eval(t);
                dsdt[0] = s[1];
                dsdt[1] = q * s[0];
                dsdt[2] = s[3];
                dsdt[3] = q * s[2];
            };
            auto stepper = ode::make_controlled(1e-13, 1e-13, ode::runge_kutta_fehlberg78<OdeState>());
            try {
                ode::integrate_adaptive(stepper, rhs, y, 0.0, x, x / 64.0);
            } catch (const std::exception& e) {
                throw NumericalError(std::string("ODE integration failed on bond: ") + e.what());
            }
        }
        Eigen::Matrix2cd T;
        T(0, 0) = y[0];
        T(1, 0) = y[1];
        T(0, 1) = y[2];
        T(1, 1) = y[3];
        return T;
    }
    }
    return Eigen::Matrix2cd::Identity();
}

} // namespace qgraph
