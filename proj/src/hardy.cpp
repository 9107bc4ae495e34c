#include "stripdirac/hardy.hpp"

#include <cmath>
#include <complex>

#include <nlohmann/json.hpp>

#include "stripdirac/quadrature.hpp"

namespace sd::hardy {

void StripHardyElement::validate() const {
  if (delta <= 0.0) throw ConfigError("hardy: delta must be positive");
  int n = static_cast<int>(xi.size());
  if (n < 8) throw ConfigError("hardy: need at least 8 grid nodes");
  if (w.size() != n || uhat.size() != n)
    throw ConfigError("hardy: grid/weight/sample sizes disagree");
  double edge = std::abs(xi[n - 1]);
  if (!(edge > 0.0) || std::abs(xi[0] + edge) > 1e-12 * edge)
    throw ConfigError("hardy: grid must be symmetric about 0");
}

double StripHardyElement::weighted_mass() const {
  double s = 0.0;
  for (int j = 0; j < xi.size(); ++j)
    s += w[j] * std::exp(2.0 * delta * std::abs(xi[j])) * std::norm(uhat[j]);
  return s;
}

double StripHardyElement::decay_certificate() const {
  double edge = std::abs(xi[xi.size() - 1]);
  double cut = 0.9 * edge;
  double s = 0.0;
  for (int j = 0; j < xi.size(); ++j)
    if (std::abs(xi[j]) >= cut)
      s += w[j] * std::exp(2.0 * delta * std::abs(xi[j])) * std::norm(uhat[j]);
  return s;
}

StripHardyElement make_element(double delta, double xi_max, int n,
                               const std::function<cplx(double)>& uhat_fn) {
  if (xi_max <= 0.0) throw ConfigError("hardy: xi_max must be positive");
  Quadrature q = gauss_legendre(n, -xi_max, xi_max);
  StripHardyElement u;
  u.delta = delta;
  u.xi = q.x;
  u.w = q.w;
  u.uhat = CVec(n);
  for (int j = 0; j < n; ++j) u.uhat[j] = uhat_fn(q.x[j]);
  u.validate();
  return u;
}

StripHardyElement combine(const StripHardyElement& u,
                          const StripHardyElement& v, cplx a, cplx b) {
  u.validate();
  v.validate();
  if (u.delta != v.delta || u.xi.size() != v.xi.size() ||
      (u.xi - v.xi).cwiseAbs().maxCoeff() > 1e-14 * (1.0 + u.xi.cwiseAbs().maxCoeff()))
    throw ConfigError("hardy: combine requires a common grid");
  StripHardyElement s = u;
  s.uhat = a * u.uhat + b * v.uhat;
  return s;
}

namespace {

void require_decay(const StripHardyElement& u, double decay_tol) {
  u.validate();
  double total = u.weighted_mass();
  if (u.decay_certificate() > decay_tol * (total + 1e-300))
    throw AssumptionError(
        "hardy: insufficient spectral decay at the grid edge");
}

// delta * (e^{z} - e^{-z}) / z at z = 2 delta xi, series below |z| = 1e-3.
double sinh_kernel(double delta, double xi) {
  double z = 2.0 * delta * xi;
  if (std::abs(z) < 1e-3) {
    double z2 = z * z;
    return delta * 2.0 * (1.0 + z2 / 6.0 + z2 * z2 / 120.0);
  }
  return delta * (std::exp(z) - std::exp(-z)) / z;
}

}  // namespace

double trace_norm(const StripHardyElement& u, double decay_tol) {
  require_decay(u, decay_tol);
  double s = 0.0;
  for (int j = 0; j < u.xi.size(); ++j) {
    double z = 2.0 * u.delta * u.xi[j];
    s += u.w[j] * (std::exp(z) + std::exp(-z)) * std::norm(u.uhat[j]);
  }
  return std::sqrt(s);
}

double interior_norm(const StripHardyElement& u, double decay_tol) {
  require_decay(u, decay_tol);
  double s = 0.0;
  for (int j = 0; j < u.xi.size(); ++j)
    s += u.w[j] * sinh_kernel(u.delta, u.xi[j]) * std::norm(u.uhat[j]);
  return std::sqrt(s);
}

double m_norm(const StripHardyElement& u, double decay_tol) {
  require_decay(u, decay_tol);
  double sp = 0.0, sm = 0.0;
  for (int j = 0; j < u.xi.size(); ++j) {
    double z = 2.0 * u.delta * u.xi[j];
    double a = u.w[j] * std::norm(u.uhat[j]);
    sp += a * std::exp(z);
    sm += a * std::exp(-z);
  }
  return std::sqrt(std::max(sp, sm));
}

cplx evaluate(const StripHardyElement& u, cplx z0, int k) {
  u.validate();
  if (k < 0) throw ConfigError("hardy: derivative order must be >= 0");
  double x0 = z0.real(), y0 = z0.imag();
  if (std::abs(y0) >= u.delta)
    throw ConfigError("hardy: evaluation point outside the open strip");
  cplx s = 0.0;
  for (int j = 0; j < u.xi.size(); ++j) {
    double xij = u.xi[j];
    double pk = (k == 0) ? 1.0 : std::pow(xij, k);
    s += u.w[j] * pk * std::exp(-y0 * xij) * u.uhat[j] *
         std::exp(cplx(0.0, xij * x0));
  }
  cplx ik = std::pow(cplx(0.0, 1.0), k);
  return ik * s / std::sqrt(2.0 * kPi);
}

double cauchy_constant(int k) {
  if (k < 0) throw ConfigError("hardy: derivative order must be >= 0");
  double fact = 1.0;
  for (int j = 2; j <= 2 * k; ++j) fact *= j;
  return std::sqrt(fact / (std::pow(2.0, 2 * k + 1) * kPi));
}

StripHardyElement dilate(const StripHardyElement& u, double eps) {
  u.validate();
  if (eps < 0.0 || eps >= 1.0)
    throw ConfigError("hardy: dilation parameter must lie in [0, 1)");
  if (eps == 0.0) return u;
  double c = 1.0 - eps;
  StripHardyElement v = u;
  v.xi = c * u.xi;
  v.w = c * u.w;
  v.uhat = u.uhat / c;
  return v;
}

std::string to_json_string(const StripHardyElement& u) {
  nlohmann::json j;
  j["delta"] = u.delta;
  j["xi"] = std::vector<double>(u.xi.data(), u.xi.data() + u.xi.size());
  j["w"] = std::vector<double>(u.w.data(), u.w.data() + u.w.size());
  std::vector<double> re(u.uhat.size()), im(u.uhat.size());
  for (int k = 0; k < u.uhat.size(); ++k) {
    re[k] = u.uhat[k].real();
    im[k] = u.uhat[k].imag();
  }
  j["uhat_re"] = re;
  j["uhat_im"] = im;
  return j.dump();
}

StripHardyElement element_from_json(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  StripHardyElement u;
  u.delta = j.at("delta").get<double>();
  auto xi = j.at("xi").get<std::vector<double>>();
  auto w = j.at("w").get<std::vector<double>>();
  auto re = j.at("uhat_re").get<std::vector<double>>();
  auto im = j.at("uhat_im").get<std::vector<double>>();
  if (w.size() != xi.size() || re.size() != xi.size() ||
      im.size() != xi.size())
    throw ConfigError("hardy: inconsistent JSON arrays");
  int n = static_cast<int>(xi.size());
  u.xi = Eigen::Map<const Vec>(xi.data(), n);
  u.w = Eigen::Map<const Vec>(w.data(), n);
  u.uhat = CVec(n);
  for (int k = 0; k < n; ++k) u.uhat[k] = cplx(re[k], im[k]);
  u.validate();
  return u;
}

}  // namespace sd::hardy
