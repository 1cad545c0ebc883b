#pragma once

#include "zpgd/bounded_green.hpp"
#include "zpgd/inviscid.hpp"
#include "zpgd/radial_core.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace zpgd::oracle {

// ---------------------------------------------------------------------------
// Finite-difference viscous solver

/**
 * Radial adhesion system on [r_in, r_out] for the finite-difference solver.
 * Velocities at both ends are prescribed (Dirichlet). With r_in = 0 the
 * inner row is the symmetry condition q = 0.
 */
struct FdProblem {
    int n = 3;
    double epsilon = 0.1;
    double r_in = 0.0, r_out = 1.0;
    ScalarProfile q0;
    ScalarProfile rho0;
    std::function<double(double)> q_in;   // of t; ignored when r_in == 0
    std::function<double(double)> q_out;  // of t
    // Densities carried in through an inflow end.
    std::function<double(double)> rho_in, rho_out;

    static FdProblem from_bounded(const BoundedProblem& b);
};

struct FDSolverConfig {
    int cells = 400;
    /// Fixed step; 0 picks cfl * dr / max|q| (further capped by max_dt).
    double dt = 0.0;
    double cfl = 0.4;
    double max_dt = 1e-2;
    std::vector<double> output_times;
};

struct FdSolution {
    RadialField field;          // nodes r_i, q at nodes, p interpolated from cells
    std::vector<double> mass;   // omega * sum p dr at each output time
    std::vector<double> outflow;  // omega * (upwind flux at r_out - at r_in), so dm/dt = -outflow
    std::vector<double> steps;  // number of steps taken up to each output time
};

/**
 * Crank-Nicolson in the linear diffusion operator, second-order Adams-Bashforth
 * for centred advection, first-order upwind finite volumes for p.
 * Throws DataError before stepping if a fixed dt breaks the advective CFL bound.
 */
FdSolution fd_viscous_solve(const FdProblem& problem, const FDSolverConfig& config);

// ---------------------------------------------------------------------------
// Exhaustive path minimisation

struct BruteForceResult {
    double value = 0.0;
    Branch branch = Branch::Interior;
    double r0 = 0.0, t1 = 0.0, t2 = 0.0;
};

/**
 * Minimum of the interior and boundary path costs over the tensor grid
 * r0 in [0, r + t sup|q0|] (grid_density + 1 points) and t1 <= t2 on the
 * grid t k / grid_density, 0 <= k < grid_density. The interior branch is
 * searched on the same r0 grid. Doubling grid_density refines both grids.
 */
BruteForceResult brute_force_Q(const InviscidProblem& problem, double r, double t, int grid_density);

/**
 * brute_force_Q on a tensor panel. The grids are shared by all points:
 * t-grid of spacing t_max / grid_density, r0-grid of spacing r0_max / grid_density.
 * Returns values time-major, like RadialField.
 */
std::vector<BruteForceResult> brute_force_panel(const InviscidProblem& problem, const std::vector<double>& r,
                                                const std::vector<double>& t, int grid_density, int threads = 1);

// ---------------------------------------------------------------------------
// Sticky particles

struct Particle {
    double r = 0.0;
    double m = 0.0;
    double v = 0.0;
};

struct ParticleSnapshot {
    double t = 0.0;
    std::vector<Particle> particles;
    double absorbed = 0.0;  // mass removed at the origin so far
};

struct StickyOptions {
    /// Velocity and total mass at the origin; particles enter while q_B > 0.
    std::optional<ScalarProfile> q_B, p_B;
    double omega = 1.0;
    /// Spacing of injection times.
    double injection_interval = 1e-3;
};

/// Equal-width cells on [a, b]: mass int p0 over the cell, placed at the cell centre with velocity q0 there.
std::vector<Particle> particles_from_profile(const ScalarProfile& q0, const ScalarProfile& p0, double a, double b,
                                             int count);

/**
 * Free flight with perfectly inelastic collisions (momentum-weighted merge).
 * Particles reaching r = 0 with negative velocity are absorbed.
 * Returns one snapshot per requested time (times ascending, >= 0).
 */
std::vector<ParticleSnapshot> sticky_particle_run(std::vector<Particle> initial, const std::vector<double>& times,
                                                  const StickyOptions& opts = {});

/// Heaviest particle of a snapshot (the delta cluster in Riemann runs).
Particle heaviest(const ParticleSnapshot& s);

/// Kernel-averaged (q, p) on r_grid with a hat kernel of half-width h.
RadialField reconstruct(const ParticleSnapshot& s, const std::vector<double>& r_grid, double h, int n);

/// CSV: t,index,r,m,v.
void write_particle_csv(std::ostream& os, const std::vector<ParticleSnapshot>& run);

}  // namespace zpgd::oracle
