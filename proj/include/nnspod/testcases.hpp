#pragma once

#include "nnspod/snapshot.hpp"

namespace nnspod {

/// Travelling Gaussian pulse f(x; t) = alpha * exp(-(x-t)^2 / (2 sigma^2))
/// on an equidistant 1D grid, parameterized by the mean t. Default means are
/// kept clear of the domain boundary so every pulse is fully visible.
struct GaussianWaveSpec {
    double alpha = 1.0;
    double sigma = 0.25;
    double x_min = 0.0;
    double x_max = 10.25;
    int n_nodes = 256;
    double t_first = 1.65;
    double t_step = 0.4;
    int n_params = 20;
};

SnapshotSet gen_gaussian(const GaussianWaveSpec& spec);

/// Isentropic vortex density field advected by the freestream: the analytic
/// profile centered at (x0 + u_inf t, y0 + v_inf t) sampled on cell centers.
struct VortexSpec {
    double b = 0.5;             // vortex strength
    double gamma = 1.4;
    double u_inf = 0.1;
    double v_inf = 0.0;
    double center_x = 5.0;
    double center_y = 10.0;
    double domain_x = 40.0;
    double domain_y = 20.0;
    int nx = 240;
    int ny = 120;
    double dt = 0.625;
    int n_snapshots = 100;      // times dt, 2*dt, ..., n*dt
};

SnapshotSet gen_vortex_density(const VortexSpec& spec);

/// Density of the vortex profile at radius r from the moving center.
double vortex_density_at(const VortexSpec& spec, double r);

/// Smoothed moving interface 0.5*(1 + tanh((h(t) - y) / sharpness)) on a 1D
/// grid over [0,1]; h sweeps linearly between h_first and h_last.
struct StepInterfaceSpec {
    double h_first = 0.2;
    double h_last = 0.8;
    int n_params = 40;
    double sharpness = 0.02;
    int n_nodes = 200;
};

SnapshotSet gen_step_interface(const StepInterfaceSpec& spec);

} // namespace nnspod
