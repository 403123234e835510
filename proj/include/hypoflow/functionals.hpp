#pragma once

#include "hypoflow/grid.hpp"
#include "hypoflow/phi.hpp"

namespace hypoflow {

/// Non-normalised phi-entropy of a nonnegative field w against the grid's
/// Gaussian measure:
///
///   E[w] = int phi(w) dgamma - phi( int w dgamma ).
///
/// For a unit-mass field the second term vanishes; keeping it makes the
/// functional insensitive to quadrature mass defects.
double phi_entropy(const GaussianGrid& g, const PhiFamily& fam, const std::vector<double>& w);

/// Fisher information I[w] = int phi''(w) |grad w|^2 dgamma.
/// A positivity floor of 1e-14 is applied inside phi'' (p<2 is singular at 0).
double fisher_information(const GaussianGrid& g, const PhiFamily& fam,
                          const std::vector<double>& w, int stencil_order = 4);

/// int |grad_axis f|^2 dgamma for one axis.
double grad_sq_axis(const GaussianGrid& g, const std::vector<double>& f, int axis,
                    int stencil_order = 4);

/// int grad_a f . grad_b f dgamma (cross term between two axes).
double grad_cross(const GaussianGrid& g, const std::vector<double>& f, int axis_a, int axis_b,
                  int stencil_order = 4);

/// L^q norm against dgamma, q >= 1.
double lq_norm(const GaussianGrid& g, const std::vector<double>& f, double q);

}  // namespace hypoflow
