#pragma once

namespace popdyn {

struct Tolerances {
  /// Relative width of the Collatz-Wielandt bracket at which power
  /// iteration stops.
  double spec = 1e-12;
  long max_iterations = 200000;
  /// Most negative entry of a computed (I - T)^-1 that is clamped to zero.
  double neg = 1e-10;
  /// Band around 1 for the growth/decline classification.
  double cls = 1e-9;
  /// Residual allowed when checking that a rescaled model hits its target
  /// growth rate.
  double stab = 1e-8;
  /// Successive-iterate distance at which a normalized trajectory is
  /// considered settled.
  double dyn = 1e-9;
  long max_steps = 1000000;
  /// Entries of a computed matrix at or below this fraction of its largest
  /// entry are treated as structural zeros.
  double pattern = 1e-12;
};

}  // namespace popdyn
