#pragma once

namespace qdyn {

// Dimensional constants for a run. Defaults give the natural unit system
// hbar = m = Q = c = 1; all four must stay strictly positive.
struct Constants {
  double hbar{1.0};
  double mass{1.0};
  double charge{1.0};
  double c_light{1.0};

  void validate() const;
};

}  // namespace qdyn
