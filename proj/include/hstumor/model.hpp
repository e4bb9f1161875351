#pragma once

namespace hst {

enum class GrowthLaw { Linear, Threshold };

// G(c) = G0 c (linear) or G0 (c - c_bar) (threshold).
struct ModelParams {
  double g0 = 1.0;
  double lambda = 1.0;
  double c_b = 10.0;
  double c_bar = 5.0;
  double n_c = 1e-3;
  GrowthLaw law = GrowthLaw::Threshold;

  void validate() const;
  double growth(double c) const { return law == GrowthLaw::Linear ? g0 * c : g0 * (c - c_bar); }
};

}  // namespace hst
