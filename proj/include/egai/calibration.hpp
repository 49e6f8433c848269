#pragma once

#include <functional>

#include "egai/evidence.hpp"

namespace egai {

/// Log-densities of the null and alternative conditional laws at one
/// time step. Both must be finite on the support the caller evaluates;
/// the alternative must integrate to 1 (caller contract).
struct DensityPair {
  std::function<double(double)> null_logdensity;
  std::function<double(double)> alt_logdensity;
};

/// Likelihood-ratio e-value exp(alt_logdensity(x) - null_logdensity(x)).
/// Throws "evidence overflow" if the ratio is not finite, which signals
/// a degenerate density pair.
Evidence lr_evalue(double x, const DensityPair& densities);

/// Power calibrator eta * p^(eta-1) for eta in (0,1). p must be in
/// (0,1]; p = 0 is rejected ("calibrator singularity").
Evidence p_to_e(const Evidence& p, double eta);

/// min(1/e, 1); e = 0 maps to p = 1.
Evidence e_to_p(const Evidence& e);

/// 1{p <= level}/level, the e-value that makes a p-value rejection rule
/// exactly reproducible on the e-value side. level must be in (0,1].
Evidence indicator_evalue(const Evidence& p, double level);

/// A p-to-e calibrator: a decreasing function on (0,1] integrating to 1.
/// The power family is built in; custom decreasing functions are
/// accepted after a quadrature check of the normalization.
class PToECalibrator {
public:
  static PToECalibrator power(double eta);

  /// Validates that fn is decreasing on a grid and integrates to 1 over
  /// (0,1) within tolerance (endpoint singularities are handled by a
  /// power-of-ten substitution). Throws on failure.
  static PToECalibrator custom(std::function<double(double)> fn,
                               double tolerance = 1e-6);

  Evidence operator()(const Evidence& p) const;

private:
  explicit PToECalibrator(std::function<double(double)> fn);
  std::function<double(double)> fn_;
};

/// Composite Gauss-Legendre quadrature of f over [0,1] after the
/// substitution s = u^10, which tames integrable endpoint singularities
/// like s^(eta-1). Shared by the calibrator normalization check.
double calibrator_integral(const std::function<double(double)>& fn);

} // namespace egai
