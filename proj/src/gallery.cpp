#include "zpgd/gallery.hpp"

namespace zpgd {

namespace {

std::vector<GalleryEntry> build()
{
    std::vector<GalleryEntry> g;
    const auto add = [&](std::string name, std::string description, std::string yaml) {
        g.push_back({std::move(name), std::move(description), std::move(yaml)});
    };

    // Free space ---------------------------------------------------------------
    for (int n : {1, 2, 3}) {
        const auto d = std::to_string(n);
        add("freespace-bounded-" + d + "d", "Compressive bounded velocity in R^" + d + ": velocity bound",
            "name: freespace-bounded-" + d + R"(d
mode: freespace
description: bounded q0 that steepens into a viscous shock
problem:
  n: )" + d + R"(
  epsilon: 0.1
  q0: {table: [[0, 0], [0.5, 0.8], [1.5, -0.3], [3, 0]]}
  rho0: {step: {breaks: [0, 2], values: [1, 0]}}
grid:
  r: {from: 0.1, to: 4.0, count: 14}
  t: [0.5, 1, 2, 5]
density: false
checks: [velocity-bound]
)");
    }
    for (int n : {1, 3}) {
        const auto d = std::to_string(n);
        add("freespace-mass-" + d + "d", "Expanding flow in R^" + d + ": total mass conservation",
            "name: freespace-mass-" + d + R"(d
mode: freespace
problem:
  n: )" + d + R"(
  epsilon: 0.1
  q0: {table: [[0, 0], [1, 0.5], [2, 0.5]]}
  rho0: {step: {breaks: [0, 2], values: [1, 0]}}
grid:
  r: {from: 0.1, to: 3.0, count: 8}
  t: [0.5, 2, 5]
mass_panels: 8
checks: [velocity-bound, mass]
)");
    }
    add("freespace-linear-1d", "q0 = r on the line: exact solution r / (1 + t)",
        R"(name: freespace-linear-1d
mode: freespace
problem:
  n: 1
  epsilon: 0.1
  q0: {poly: {breaks: [0], coeffs: [[0, 1]]}}
  rho0: {step: {breaks: [0, 1], values: [1, 0]}}
grid:
  r: {from: 0.25, to: 5.0, count: 20}
  t: [0.1, 0.5, 1, 2, 5, 10]
density: false
reference: {slope: 1}
checks: [closed-form, mass]
)");
    add("freespace-decay-3d", "Compactly supported velocity decays at large times",
        R"(name: freespace-decay-3d
mode: freespace
problem:
  n: 3
  epsilon: 0.1
  q0: {table: [[0, 0], [0.5, -0.6], [1, 0.4], [1.5, 0]]}
  rho0: {step: {breaks: [0, 1], values: [1, 0]}}
grid:
  r: {from: 0.2, to: 3.0, count: 8}
  t: [1, 10, 100]
density: false
decay: {t_ref: 1, t_late: 1000, r: {from: 0.1, to: 3.0, count: 30}}
checks: [velocity-bound, decay]
)");

    // Eigenvalues ----------------------------------------------------------------
    add("eigen-ball2d", "Ball2D, q_B = 0: zeros of J1",
        R"(name: eigen-ball2d
mode: eigen
problem: {kind: Ball2D, R: 1.0, epsilon: 0.1, q_B: 0.0}
count: 5
)");
    add("eigen-ball3d", "Ball3D with outflow",
        R"(name: eigen-ball3d
mode: eigen
problem: {kind: Ball3D, R: 1.0, epsilon: 0.1, q_B: 0.05}
count: 8
)");
    add("eigen-annulus2d", "Annulus2D with outflow at both walls",
        R"(name: eigen-annulus2d
mode: eigen
problem: {kind: Annulus2D, R1: 0.5, R2: 1.0, epsilon: 0.1, q1: -0.05, q2: 0.03}
count: 8
)");
    add("eigen-annulus3d", "Annulus3D with outflow at both walls",
        R"(name: eigen-annulus3d
mode: eigen
problem: {kind: Annulus3D, R1: 0.5, R2: 1.0, epsilon: 0.1, q1: -0.05, q2: 0.03}
count: 8
)");

    // Bounded domains: the four Green's cases -----------------------------------
    add("ball2d-inflow", "Ball2D, mass entering through the wall",
        R"(name: ball2d-inflow
mode: ball
problem:
  kind: Ball2D
  R: 1.0
  epsilon: 0.1
  q0: {poly: {breaks: [0], coeffs: [[0, -0.2]]}}
  rho0: 1.0
  q_B: -0.2
  rho_B: 1.0
grid:
  r: {from: 0.1, to: 0.9, count: 9}
  t: [0.5, 1, 2]
density: false
)");
    add("ball3d-outflow", "Ball3D, mass leaving through the wall",
        R"(name: ball3d-outflow
mode: ball
problem:
  kind: Ball3D
  R: 1.0
  epsilon: 0.1
  q0: {poly: {breaks: [0], coeffs: [[0, 0.3]]}}
  rho0: {table: [[0, 1], [1, 2]]}
  q_B: 0.3
grid:
  r: {from: 0.1, to: 0.9, count: 9}
  t: [0.5, 1, 2]
)");
    add("annulus2d-through", "Annulus2D, inflow at the inner wall and outflow at the outer",
        R"(name: annulus2d-through
mode: annulus
problem:
  kind: Annulus2D
  R1: 0.5
  R2: 1.0
  epsilon: 0.1
  q0: {poly: {breaks: [0.5], coeffs: [[0.1, 0.2]]}}
  rho0: 1.0
  q1: 0.1
  q2: 0.2
  rho1: 1.0
grid:
  r: {from: 0.55, to: 0.95, count: 9}
  t: [0.5, 1, 2]
density: false
)");
    add("annulus3d-closed", "Annulus3D with impermeable walls",
        R"(name: annulus3d-closed
mode: annulus
problem:
  kind: Annulus3D
  R1: 0.5
  R2: 1.0
  epsilon: 0.1
  q0: {table: [[0.5, 0], [0.75, 0.2], [1.0, 0]]}
  rho0: 1.0
  q1: 0.0
  q2: 0.0
grid:
  r: {from: 0.55, to: 0.95, count: 9}
  t: [0.5, 1, 2]
)");

    // Series against finite differences ---------------------------------------
    add("fd-ball3d", "Series velocity against the finite-difference oracle in a ball",
        R"(name: fd-ball3d
mode: oracle-compare
oracle: fd
problem:
  kind: Ball3D
  R: 1.0
  epsilon: 0.1
  q0: {poly: {breaks: [0], coeffs: [[0, -0.2]]}}
  rho0: 1.0
  q_B: -0.2
  rho_B: 1.0
grid:
  t: [0.1, 0.5, 1, 2]
fd: {cells: 400}
window: [0.1, 0.9]
)");
    add("fd-annulus2d", "Series velocity against the finite-difference oracle in an annulus",
        R"(name: fd-annulus2d
mode: oracle-compare
oracle: fd
problem:
  kind: Annulus2D
  R1: 0.5
  R2: 1.0
  epsilon: 0.1
  q0: {poly: {breaks: [0.5], coeffs: [[0.1, 0.2]]}}
  rho0: 1.0
  q1: 0.1
  q2: 0.2
  rho1: 1.0
grid:
  t: [0.1, 0.5, 1, 2]
fd: {cells: 400}
window: [0.1, 0.9]
)");

    // Inviscid: path minimisation and the origin boundary ----------------------
    const std::string inflow = R"(
  n: 3
  q0: 0.0
  p0: {poly: {breaks: [0, 2], coeffs: [[0, 0, 1], [0]]}}
  q_B: 1.0
  p_B: {poly: {breaks: [0], coeffs: [[33.51032163829112, 2.0]]}}
)";
    const std::string signchange = R"(
  n: 2
  q0: {table: [[0, 0], [1, -0.4], [2, 0]]}
  p0: {poly: {breaks: [0, 2], coeffs: [[0, 1], [0]]}}
  q_B: {step: {breaks: [0, 0.5, 1.0], values: [0.8, -0.5, 0.6]}}
  p_B: {poly: {breaks: [0], coeffs: [[12.566370614359172, 1.0]]}}
)";
    const std::string outflow = R"(
  n: 1
  q0: {table: [[0, -1], [1, 0.5], [3, 0.5]]}
  p0: {step: {breaks: [0, 3], values: [1, 0]}}
  q_B: 0.0
  p_B: 0.0
)";
    add("inviscid-inflow", "Mass injected at the origin into a gas at rest",
        "name: inviscid-inflow\nmode: inviscid\nproblem:" + inflow +
            "grid:\n  r: {from: 0.05, to: 2.0, count: 12}\n  t: [0.25, 0.5, 1.0, 1.5]\n");
    add("inviscid-signchange", "Origin switching between inflow and absorption",
        "name: inviscid-signchange\nmode: inviscid\nproblem:" + signchange +
            "grid:\n  r: {from: 0.05, to: 2.0, count: 12}\n  t: [0.25, 0.45, 0.75, 0.95, 1.25, 1.5]\n");
    add("inviscid-absorbing", "Gas falling into an absorbing origin",
        "name: inviscid-absorbing\nmode: inviscid\nproblem:" + outflow +
            "grid:\n  r: {from: 0.05, to: 3.0, count: 12}\n  t: [0.25, 0.5, 1.0, 2.0]\n");
    add("brute-inflow", "Path minimum against exhaustive search, constant inflow",
        "name: brute-inflow\nmode: oracle-compare\noracle: brute-force\nproblem:" + inflow +
            "grid:\n  r: {from: 0.05, to: 2.0, count: 10}\n  t: {from: 0.2, to: 2.0, count: 10}\ngrid_density: 2000\n");
    add("brute-signchange", "Path minimum against exhaustive search, sign-changing boundary velocity",
        "name: brute-signchange\nmode: oracle-compare\noracle: brute-force\nproblem:" + signchange +
            "grid:\n  r: {from: 0.05, to: 2.0, count: 10}\n  t: {from: 0.2, to: 2.0, count: 10}\ngrid_density: 2000\n");
    add("brute-absorbing", "Path minimum against exhaustive search, no boundary credit",
        "name: brute-absorbing\nmode: oracle-compare\noracle: brute-force\nproblem:" + outflow +
            "grid:\n  r: {from: 0.05, to: 3.0, count: 10}\n  t: {from: 0.2, to: 2.0, count: 10}\ngrid_density: 2000\n");

    // Delta shocks ----------------------------------------------------------------
    const auto riemann = [](int n) {
        const std::string p0 = n == 1 ? "{step: {breaks: [0, 3], values: [1, 0]}}"
                               : n == 2 ? "{poly: {breaks: [0, 3], coeffs: [[0, 1], [0]]}}"
                                        : "{poly: {breaks: [0, 3], coeffs: [[0, 0, 1], [0]]}}";
        return "\n  n: " + std::to_string(n) + "\n  q0: {step: {breaks: [0, 1], values: [1, -0.5]}}\n  p0: " + p0 + "\n";
    };
    for (int n : {1, 2, 3}) {
        const auto d = std::to_string(n);
        add("riemann-" + d + "d", "Delta-shock Riemann problem in R^" + d + ": detection and Rankine-Hugoniot checks",
            "name: riemann-" + d + "d\nmode: verify-rh\nproblem:" + riemann(n) +
                "grid:\n  r: {from: 0.05, to: 2.5, count: 50}\n  t: {from: 0, to: 1.25, count: 6}\n"
                "expected_fronts: 1\n"
                "track:\n  bracket: [0.9, 1.1]\n  times: {from: 0.05, to: 1.25, count: 49}\n");
    }
    add("sticky-riemann-1d", "Sticky particles against the tracked delta shock",
        "name: sticky-riemann-1d\nmode: oracle-compare\noracle: sticky\nproblem:" + riemann(1) +
            "particles: {count: 10000, from: 0, to: 3}\n"
            "track:\n  bracket: [0.9, 1.1]\n  times: {from: 0.05, to: 1.25, count: 25}\n");
    add("viscosity-sweep-1d", "Vanishing viscosity at continuity points of a shocked solution",
        R"(name: viscosity-sweep-1d
mode: oracle-compare
oracle: viscosity-sweep
description: q0 = 2r - r^2 on [0, 2] steepens into a shock at t = 1/2; points lie in the smooth region
problem:
  n: 1
  q0: {poly: {breaks: [0, 2], coeffs: [[0, 2, -1], [0]]}}
  rho0: {step: {breaks: [0, 3], values: [1, 0]}}
epsilons: [0.1, 0.05, 0.025]
time: 1.0
points: {from: 0.3, to: 1.5, count: 20}
)");
    return g;
}

}  // namespace

const std::vector<GalleryEntry>& scenario_gallery()
{
    static const std::vector<GalleryEntry> g = build();
    return g;
}

const GalleryEntry* find_scenario(const std::string& name)
{
    for (const auto& e : scenario_gallery())
        if (e.name == name) return &e;
    return nullptr;
}

}  // namespace zpgd
