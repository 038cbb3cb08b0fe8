#pragma once

#include "levy/grid.hpp"
#include "levy/spectral.hpp"

namespace levy {

/// Discrete L_p norm with cell-volume weighting, (sum |f_i|^p dx^d)^{1/p}.
double lp_norm(const Field& f, double p);

/// Mixed space-time norm { int_0^T |f(t)|_p^p dt }^{1/p} (trapezoid in t).
double lp_norm(const SpaceTimeField& f, double p);

/// Bessel-potential norm |f|_{beta,p} = |F^{-1}[(1+|xi|^2)^{beta/2} F f]|_p.
double sobolev_norm(const Field& f, double beta, double p);

/// Time-mixed Bessel norm on a trajectory.
double sobolev_norm(const SpaceTimeField& f, double beta, double p);

/// The Bessel multiplier applied in place, (1+|xi|^2)^{beta/2}.
Field bessel_multiplier(const Field& f, double beta);

}  // namespace levy
