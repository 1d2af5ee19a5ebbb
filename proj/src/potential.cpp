#include "nlsb/potential.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

namespace nlsb {

namespace {
constexpr double kDropTol = 0.0;  // keep all supplied coefficients
}

Potential::Potential(double half_period) : l_(half_period) {
  if (!(l_ > 0.0)) throw ConfigError("half period must be positive");
}

Potential::Potential(double half_period, std::map<int, cplx> coeffs)
    : l_(half_period), coeffs_(std::move(coeffs)) {
  if (!(l_ > 0.0)) throw ConfigError("half period must be positive");
  for (auto it = coeffs_.begin(); it != coeffs_.end();) {
    if (std::abs(it->second) <= kDropTol)
      it = coeffs_.erase(it);
    else
      ++it;
  }
}

Potential Potential::plane_wave(cplx C, int n, double half_period) {
  std::map<int, cplx> c;
  if (C != cplx(0.0)) c[n] = C;
  return Potential(half_period, std::move(c));
}

cplx Potential::eval(double x) const {
  cplx s = 0.0;
  const double base = std::numbers::pi * x / l_;
  for (const auto& [k, c] : coeffs_) s += c * std::polar(1.0, base * k);
  return s;
}

cplx Potential::derivative(double x) const {
  cplx s = 0.0;
  const double base = std::numbers::pi * x / l_;
  for (const auto& [k, c] : coeffs_) {
    const double freq = std::numbers::pi * k / l_;
    s += c * cplx(0.0, freq) * std::polar(1.0, base * k);
  }
  return s;
}

Potential Potential::translated(double a) const {
  std::map<int, cplx> c;
  for (const auto& [k, ck] : coeffs_)
    c[k] = ck * std::polar(1.0, std::numbers::pi * k * a / l_);
  return Potential(l_, std::move(c));
}

int Potential::max_mode() const {
  int m = 0;
  for (const auto& [k, c] : coeffs_) m = std::max(m, std::abs(k));
  return m;
}

Potential::Conserved Potential::conserved_quantities(std::size_t n) const {
  // Uniform trapezoid over one period == rectangle rule on the circle,
  // spectrally accurate for the (band-limited) integrands here.
  const double h = 2.0 * l_ / static_cast<double>(n);
  double h1 = 0.0, h3 = 0.0;
  cplx h2 = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = -l_ + h * static_cast<double>(j);
    const cplx p = eval(x);
    const cplx dp = derivative(x);
    const double a2 = std::norm(p);
    h1 += a2;
    h2 += p * std::conj(dp);
    h3 += std::norm(dp) + a2 * a2;
  }
  h1 *= 0.5 * h;
  h3 *= 0.5 * h;
  const cplx h2c = h2 * h / cplx(0.0, 2.0);
  return Conserved{h1, h2c.real(), h3};
}

Potential Potential::from_json_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("potential JSON parse error: ") + e.what());
  }
  if (!j.contains("l")) throw ConfigError("potential descriptor missing \"l\"");
  const double l = j.at("l").get<double>();
  std::map<int, cplx> coeffs;
  if (j.contains("coeffs")) {
    for (const auto& item : j.at("coeffs")) {
      const int k = item.at("k").get<int>();
      const double re = item.value("re", 0.0);
      const double im = item.value("im", 0.0);
      coeffs[k] += cplx(re, im);
    }
  }
  return Potential(l, std::move(coeffs));
}

std::string Potential::to_json_text() const {
  nlohmann::json j;
  j["l"] = l_;
  j["coeffs"] = nlohmann::json::array();
  for (const auto& [k, c] : coeffs_)
    j["coeffs"].push_back({{"k", k}, {"re", c.real()}, {"im", c.imag()}});
  return j.dump();
}

}  // namespace nlsb
