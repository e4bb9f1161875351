#include "hstumor/model.hpp"

#include "hstumor/errors.hpp"

namespace hst {

void ModelParams::validate() const {
  if (!(g0 >= 0.0)) throw ConfigError("G0 must be non-negative");
  if (!(lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(c_b > 0.0)) throw ConfigError("c_B must be positive");
  if (!(n_c > 0.0 && n_c <= 1.0)) throw ConfigError("n_c must lie in (0, 1]");
  if (law == GrowthLaw::Threshold && !(c_bar > 0.0 && c_bar < c_b)) throw ConfigError("c_bar must lie in (0, c_B)");
}

}  // namespace hst
