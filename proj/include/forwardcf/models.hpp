#pragma once

#include "forwardcf/scm.hpp"

namespace forwardcf::models {

/// X = U_X, Z = U_Z, Y = X + Z + U_Y with U_X, U_Z ~ Bern(1/2) and
/// U_Y ~ Uniform{0, 1, 2}.
Scm welfare_example();

/// The four observed units (X, Z, Y): (0,0,1), (0,0,2), (1,0,1), (1,0,2).
Sample welfare_example_units();

/// Z = U_Z, Y = Z + U_Y with U_Z ~ N(mu_z, sigma_z^2), U_Y ~ N(0, noise_variance).
Scm two_step(double mu_z = 0.0, double sigma_z = 1.0, double noise_variance = 1.0);

}  // namespace forwardcf::models
