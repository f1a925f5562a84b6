#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

namespace shockfit {

/// A C1 function carried as a value closure plus its exact derivative closure.
struct C1Fn {
  std::function<double(double)> value;
  std::function<double(double)> slope;
};

C1Fn constant_fn(double c);
C1Fn add(C1Fn f, C1Fn g);
C1Fn offset(C1Fn f, double c);  // f + c

// Built-in perturbation shapes. `width` scales x, `amplitude` scales the value.
C1Fn sech_bump(double amplitude, double width, double center);
C1Fn gaussian_bump(double amplitude, double width, double center);
C1Fn sine_wave(double amplitude, double width, double center);

/// Piecewise cubic Hermite through (xs, ys) with node slopes ms; constant
/// (with zero slope) outside [xs.front(), xs.back()]. Requires ms.front() and
/// ms.back() to be 0 for global C1 regularity; the builder enforces it.
C1Fn hermite_spline(std::vector<double> xs, std::vector<double> ys, std::vector<double> ms);

/// Random C1 spline on [lo, hi] with values in [-amplitude, amplitude],
/// clamped flat outside. Deterministic for a given engine state.
C1Fn random_spline(std::mt19937_64& rng, double lo, double hi, int n_nodes, double amplitude);

}  // namespace shockfit
