#include "egai/calibration.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace egai {

Evidence lr_evalue(double x, const DensityPair& densities) {
  if (!densities.null_logdensity || !densities.alt_logdensity)
    throw std::invalid_argument("density pair must supply both log-densities");
  const double log_null = densities.null_logdensity(x);
  const double log_alt = densities.alt_logdensity(x);
  if (!std::isfinite(log_null))
    throw std::invalid_argument("null log-density not finite at observation");
  const double e = std::exp(log_alt - log_null);
  if (!std::isfinite(e)) throw std::domain_error("evidence overflow");
  return Evidence::e(e);
}

Evidence p_to_e(const Evidence& p, double eta) {
  if (!p.is_p()) throw EvidenceMismatchError("p_to_e expects a p-value");
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("eta must lie in (0,1)");
  if (p.value() == 0.0) throw std::domain_error("calibrator singularity");
  const double e = eta * std::pow(p.value(), eta - 1.0);
  if (!std::isfinite(e)) throw std::domain_error("evidence overflow");
  return Evidence::e(e);
}

Evidence e_to_p(const Evidence& e) {
  if (!e.is_e()) throw EvidenceMismatchError("e_to_p expects an e-value");
  if (e.value() == 0.0) return Evidence::p(1.0);
  return Evidence::p(std::min(1.0 / e.value(), 1.0));
}

Evidence indicator_evalue(const Evidence& p, double level) {
  if (!p.is_p())
    throw EvidenceMismatchError("indicator_evalue expects a p-value");
  if (level == 0.0) throw std::domain_error("degenerate level");
  if (!(level > 0.0 && level <= 1.0))
    throw std::invalid_argument("level must lie in (0,1]");
  return Evidence::e(p.value() <= level ? 1.0 / level : 0.0);
}

namespace {

// 16-point Gauss-Legendre nodes/weights on [-1,1].
constexpr std::array<double, 8> kNodes = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr std::array<double, 8> kWeights = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

double gauss16(const std::function<double(double)>& g, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double acc = 0.0;
  for (std::size_t i = 0; i < kNodes.size(); ++i)
    acc += kWeights[i] * (g(mid - half * kNodes[i]) + g(mid + half * kNodes[i]));
  return acc * half;
}

} // namespace

double calibrator_integral(const std::function<double(double)>& fn) {
  // s = u^10 maps the singular end into a polynomially flat one; panels
  // refine dyadically toward u = 0 to absorb what remains.
  const auto g = [&fn](double u) {
    const double u2 = u * u;
    const double u4 = u2 * u2;
    const double u9 = u4 * u4 * u;
    return fn(u9 * u) * 10.0 * u9;
  };
  double total = 0.0;
  double right = 1.0;
  for (int panel = 0; panel < 60 && right > 1e-30; ++panel) {
    const double left = right * 0.5;
    total += gauss16(g, left, right);
    right = left;
  }
  return total;
}

PToECalibrator::PToECalibrator(std::function<double(double)> fn)
    : fn_(std::move(fn)) {}

PToECalibrator PToECalibrator::power(double eta) {
  if (!(eta > 0.0 && eta < 1.0))
    throw std::invalid_argument("eta must lie in (0,1)");
  return PToECalibrator(
      [eta](double s) { return eta * std::pow(s, eta - 1.0); });
}

PToECalibrator PToECalibrator::custom(std::function<double(double)> fn,
                                      double tolerance) {
  if (!fn) throw std::invalid_argument("calibrator must be callable");
  double prev = fn(1e-6);
  for (int i = 1; i <= 200; ++i) {
    const double s = 1e-6 + (1.0 - 1e-6) * i / 200.0;
    const double v = fn(s);
    if (v > prev * (1.0 + 1e-12) + 1e-15)
      throw std::invalid_argument("calibrator must be decreasing");
    prev = v;
  }
  const double integral = calibrator_integral(fn);
  if (std::abs(integral - 1.0) > tolerance)
    throw std::invalid_argument("calibrator does not integrate to 1");
  return PToECalibrator(std::move(fn));
}

Evidence PToECalibrator::operator()(const Evidence& p) const {
  if (!p.is_p()) throw EvidenceMismatchError("calibrator expects a p-value");
  if (p.value() == 0.0) throw std::domain_error("calibrator singularity");
  const double e = fn_(p.value());
  if (!std::isfinite(e) || e < 0.0)
    throw std::domain_error("evidence overflow");
  return Evidence::e(e);
}

} // namespace egai
