#include "forwardcf/models.hpp"

namespace forwardcf::models {

Scm welfare_example() {
  return Scm({
      Variable{{"X", {}, additive_linear({})}, NoiseSpec("U_X", Bernoulli{0.5})},
      Variable{{"Z", {}, additive_linear({})}, NoiseSpec("U_Z", Bernoulli{0.5})},
      Variable{{"Y", {"X", "Z"}, additive_linear({1.0, 1.0})},
               NoiseSpec("U_Y", DiscreteUniform{{0.0, 1.0, 2.0}})},
  });
}

Sample welfare_example_units() {
  return Sample{Table({"X", "Z", "Y"}, {{0, 0, 1, 1}, {0, 0, 0, 0}, {1, 2, 1, 2}}), std::nullopt};
}

Scm two_step(double mu_z, double sigma_z, double noise_variance) {
  return Scm({
      Variable{{"Z", {}, additive_linear({})}, NoiseSpec("U_Z", Normal{mu_z, sigma_z * sigma_z})},
      Variable{{"Y", {"Z"}, additive_linear({1.0})}, NoiseSpec("U_Y", Normal{0.0, noise_variance})},
  });
}

}  // namespace forwardcf::models
