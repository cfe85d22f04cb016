#pragma once

#include "qgraph/spectral_param.hpp"

#include <Eigen/Dense>
#include <vector>

namespace qgraph {

/// Potential on a bond, defined on (0, l) in the bond's reference orientation.
/// The reversed arc sees the mirrored potential V(l - x).
struct PotentialSpec {
    enum class Kind { Zero, PiecewiseConstant, Polynomial };

    Kind kind = Kind::Zero;
    // PiecewiseConstant: values[i] on [breakpoints[i], breakpoints[i+1]),
    // breakpoints[0] == 0, last segment extends to the bond length.
    std::vector<double> breakpoints;
    std::vector<double> values;
    // Polynomial: coeffs[0] + coeffs[1] x + ...
    std::vector<double> coeffs;

    static PotentialSpec zero() { return {}; }
    static PotentialSpec constant(double v);
    static PotentialSpec piecewise(std::vector<double> breaks, std::vector<double> vals);
    static PotentialSpec polynomial(std::vector<double> c);

    bool is_zero() const;
    double eval(double x) const;
    /// Same potential seen from the other end of a bond of length l.
    PotentialSpec mirrored(double l) const;
    /// V + c (shift property: basis data at gamma equals V's at gamma + c).
    PotentialSpec shifted(double c) const;
};

/// Fundamental system of gamma*u - u'' + V(x)*u = 0 on [0, x]:
/// columns are (u1, u1') and (u2, u2') with u1(0)=1, u1'(0)=0, u2(0)=0,
/// u2'(0)=1. The Wronskian u1*u2' - u1'*u2 is identically 1.
Eigen::Matrix2cd fundamental_matrix(const PotentialSpec& pot, double length, cplx gamma, double x);

inline Eigen::Matrix2cd fundamental_matrix(const PotentialSpec& pot, double length, cplx gamma) {
    return fundamental_matrix(pot, length, gamma, length);
}

} // namespace qgraph
