#pragma once

#include "zpgd/inviscid.hpp"
#include "zpgd/radial_core.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace zpgd {

/**
 * A discontinuity r = s(t) of the inviscid solution carrying the point mass e(t).
 * The "minus" traces are taken on the inner side (r < s), "plus" on the outer side.
 */
struct ShockFront {
    int n = 1;
    std::vector<double> times;
    std::vector<double> s;
    std::vector<double> e;  // P(s+) - P(s-)
    std::vector<double> q_plus, q_minus;
    std::vector<double> p_plus, p_minus;
};

struct FrontDetection {
    /// Minimum jump in q between neighbouring samples, relative to sup |q| on the slice.
    double threshold = 1e-3;
    /// Offset of the one-sided traces from the located front, relative to max(s, 1).
    double trace_offset = 1e-6;
};

struct DetectedFronts {
    std::vector<ShockFront> fronts;
    std::vector<std::string> notes;  // merges and other events
};

/**
 * Finds jumps of q on each time slice of an inviscid panel, pins each one down
 * by bisection on the solution itself and links them across slices.
 */
DetectedFronts detect_fronts(const InviscidProblem& problem, const RadialField& panel,
                             const FrontDetection& opts = {});

/// Tracks one front through the given times, starting from a bracket [r_lo, r_hi] at times.front().
ShockFront track_front(const InviscidProblem& problem, const std::vector<double>& times, double r_lo, double r_hi,
                       const FrontDetection& opts = {});

/// Jump across the front, taken inner minus outer: [f] = f(s-) - f(s+).
inline double jump(double inner, double outer) { return inner - outer; }

struct RhResidual1d {
    std::vector<double> s_dot, e_dot;
    std::vector<double> res_speed;  // ds/dt - (q+ + q-)/2
    std::vector<double> res_mass;   // de/dt - ([qp] - [p] ds/dt)
};

/// Central differences in time (one-sided at the ends); needs at least 3 samples.
RhResidual1d rh_residual_1d(const ShockFront& front);

struct RhResidualMultid {
    std::vector<double> speed;        // S_t + u_delta . grad S
    std::vector<double> mass;         // d e_hat/dt + surface divergence - flux term, per unit area
    std::vector<double> mass_scaled;  // mass * s^(n-1), comparable with the 1-D residual
};

/// Generalized conditions for the sphere S = r - s(t) in R^n with e_hat = e / s^(n-1).
RhResidualMultid rh_residual_multid(const ShockFront& front);

/// Mean curvature of the sphere of radius r in R^n: -(n-1)/(2r).
double mean_curvature(int n, double r);
/// -1/2 div(x/|x|) at |x| = r by centred differences of step h.
double mean_curvature_fd(int n, double r, double h = 1e-4);

/// CSV: t,s,e,q_plus,q_minus,p_plus,p_minus,res_speed,res_mass,res_multid.
void write_front_csv(std::ostream& os, const ShockFront& front);

}  // namespace zpgd
