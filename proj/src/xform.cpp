#include "cloakspec/xform.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

#include "cloakspec/errors.hpp"

namespace cloakspec {
namespace {

constexpr double kOuterRadius = 2.0;
constexpr double kRadiusSlack = 1e-9;

struct RadialProfile {
  std::function<double(double)> f;       // r -> rho
  std::function<double(double)> fprime;  // d rho / dr
  std::function<double(double)> finv;    // rho -> r
};

// x -> f(|x|) x/|x|, DF = f' Pi + (f/r)(I - Pi) with Pi = x x^T / |x|^2.
DiffeoSpec radial_map(std::string name, RadialProfile p,
                      std::function<bool(double)> r_ok,
                      std::function<bool(double)> rho_ok) {
  auto prof = std::make_shared<RadialProfile>(std::move(p));
  DiffeoSpec d;
  d.name = std::move(name);
  d.in_domain = [r_ok](const Vec2& x) { return r_ok(x.norm()); };
  d.in_range = [rho_ok](const Vec2& y) { return rho_ok(y.norm()); };
  d.map = [prof, n = d.name](const Vec2& x) -> Vec2 {
    const double r = x.norm();
    if (r == 0.0) throw DomainError(n + ": map evaluated at the origin");
    return x * (prof->f(r) / r);
  };
  d.jacobian = [prof, n = d.name](const Vec2& x) -> Mat2 {
    const double r = x.norm();
    if (r == 0.0) throw DomainError(n + ": jacobian evaluated at the origin");
    const Mat2 pi = x * x.transpose() / (r * r);
    return prof->fprime(r) * pi + (prof->f(r) / r) * (Mat2::Identity() - pi);
  };
  d.inverse = [prof, n = d.name](const Vec2& y) -> Vec2 {
    const double rho = y.norm();
    if (rho == 0.0) throw DomainError(n + ": inverse evaluated at the origin");
    return y * (prof->finv(rho) / rho);
  };
  return d;
}

Mat2 symmetrised(const Mat2& a) { return 0.5 * (a + a.transpose()); }

// Deterministic uniform in [-1, 1) independent of the standard library's
// distribution implementations.
double uniform_pm1(std::mt19937_64& gen) {
  return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0;
}

struct Bump {
  // b_i(x) = chi(x) * sum_k c[i][k] mono_k(x), monomials 1, x, y, x^2, xy, y^2
  double coef[2][6] = {};
  double support = kBumpSupport;

  static std::array<double, 6> monomials(const Vec2& x) {
    return {1.0, x.x(), x.y(), x.x() * x.x(), x.x() * x.y(), x.y() * x.y()};
  }
  static std::array<Vec2, 6> monomial_grads(const Vec2& x) {
    return {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(2 * x.x(), 0),
            Vec2(x.y(), x.x()), Vec2(0, 2 * x.y())};
  }
  Vec2 value(const Vec2& x) const {
    const double s2 = support * support;
    const double u = 1.0 - x.squaredNorm() / s2;
    if (u <= 0.0) return Vec2::Zero();
    const double chi = u * u * u;
    const auto mono = monomials(x);
    Vec2 p = Vec2::Zero();
    for (int k = 0; k < 6; ++k) p += Vec2(coef[0][k], coef[1][k]) * mono[k];
    return chi * p;
  }
  Mat2 jacobian(const Vec2& x) const {
    const double s2 = support * support;
    const double u = 1.0 - x.squaredNorm() / s2;
    if (u <= 0.0) return Mat2::Zero();
    const double chi = u * u * u;
    const Vec2 dchi = 3.0 * u * u * (-2.0 / s2) * x;
    const auto mono = monomials(x);
    const auto grads = monomial_grads(x);
    Vec2 p = Vec2::Zero();
    Mat2 dp = Mat2::Zero();
    for (int k = 0; k < 6; ++k) {
      const Vec2 c(coef[0][k], coef[1][k]);
      p += c * mono[k];
      dp += c * grads[k].transpose();
    }
    return p * dchi.transpose() + chi * dp;
  }
};

double spectral_norm(const Mat2& a) {
  Eigen::SelfAdjointEigenSolver<Mat2> es(a.transpose() * a);
  return std::sqrt(std::max(0.0, es.eigenvalues()(1)));
}

}  // namespace

MaterialField isotropic_medium(double g_scale, double q_value) {
  MaterialField m;
  m.g = [g_scale](const Vec2&) -> Mat2 { return g_scale * Mat2::Identity(); };
  m.q = [q_value](const Vec2&) { return q_value; };
  m.lower_ellipticity = std::min(g_scale, q_value);
  m.upper_ellipticity = std::max(g_scale, q_value);
  return m;
}

MaterialField diagonal_medium(double gxx, double gyy, double q_value) {
  MaterialField m;
  m.g = [gxx, gyy](const Vec2&) -> Mat2 { return Vec2(gxx, gyy).asDiagonal(); };
  m.q = [q_value](const Vec2&) { return q_value; };
  m.lower_ellipticity = std::min({gxx, gyy, q_value});
  m.upper_ellipticity = std::max({gxx, gyy, q_value});
  return m;
}

MaterialField laplace_medium() {
  MaterialField m = isotropic_medium(1.0, 0.0);
  m.lower_ellipticity = 0.0;
  m.upper_ellipticity = 1.0;
  return m;
}

MaterialField push_forward(const DiffeoSpec& f, const MaterialField& m) {
  auto fp = std::make_shared<DiffeoSpec>(f);
  auto mp = std::make_shared<MaterialField>(m);
  MaterialField out;
  out.g = [fp, mp](const Vec2& y) -> Mat2 {
    if (!fp->in_range(y)) {
      throw DomainError(fp->name + ": push-forward evaluated outside the range");
    }
    const Vec2 x = fp->inverse(y);
    const Mat2 df = fp->jacobian(x);
    const double det = std::abs(df.determinant());
    return symmetrised(df * mp->g(x) * df.transpose() / det);
  };
  out.q = [fp, mp](const Vec2& y) {
    if (!fp->in_range(y)) {
      throw DomainError(fp->name + ": push-forward evaluated outside the range");
    }
    const Vec2 x = fp->inverse(y);
    return mp->q(x) / std::abs(fp->jacobian(x).determinant());
  };
  return out;
}

DiffeoSpec identity_map() {
  DiffeoSpec d;
  d.name = "identity";
  d.map = [](const Vec2& x) { return x; };
  d.jacobian = [](const Vec2&) -> Mat2 { return Mat2::Identity(); };
  d.inverse = [](const Vec2& y) { return y; };
  d.in_domain = [](const Vec2&) { return true; };
  d.in_range = [](const Vec2&) { return true; };
  return d;
}

DiffeoSpec cloak_map() {
  RadialProfile p{[](double r) { return 1.0 + 0.5 * r; },
                  [](double) { return 0.5; },
                  [](double rho) { return 2.0 * (rho - 1.0); }};
  return radial_map(
      "cloak", std::move(p),
      [](double r) { return r > 0.0 && r <= kOuterRadius + kRadiusSlack; },
      [](double rho) { return rho > 1.0 && rho <= kOuterRadius + kRadiusSlack; });
}

DiffeoSpec reg_cloak_map(double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) {
    throw ParameterError("regcloak: eps must lie in (0, 1]");
  }
  const double offset = 2.0 * (1.0 - eps) / (2.0 - eps);
  const double slope = 1.0 / (2.0 - eps);
  RadialProfile p{[=](double r) { return offset + slope * r; },
                  [=](double) { return slope; },
                  [=](double rho) { return (rho - offset) / slope; }};
  std::ostringstream name;
  name << "regcloak:" << eps;
  return radial_map(
      name.str(), std::move(p),
      [](double r) { return r > 0.0 && r <= kOuterRadius + kRadiusSlack; },
      [=](double rho) { return rho > offset && rho <= kOuterRadius + kRadiusSlack; });
}

DiffeoSpec inversion_map() {
  DiffeoSpec d;
  d.name = "inversion";
  d.in_domain = [](const Vec2& x) { return x.squaredNorm() > 0.0; };
  d.in_range = d.in_domain;
  d.map = [](const Vec2& x) -> Vec2 {
    const double r2 = x.squaredNorm();
    if (r2 == 0.0) throw DomainError("inversion: origin");
    return Vec2(x.x(), -x.y()) / r2;
  };
  d.inverse = d.map;
  d.jacobian = [](const Vec2& x) -> Mat2 {
    const double r2 = x.squaredNorm();
    if (r2 == 0.0) throw DomainError("inversion: origin");
    const double r4 = r2 * r2;
    const double a = (x.y() * x.y() - x.x() * x.x()) / r4;
    const double b = 2.0 * x.x() * x.y() / r4;
    Mat2 j;
    j << a, -b, b, a;
    return j;
  };
  return d;
}

DiffeoSpec compose(const DiffeoSpec& g, const DiffeoSpec& f) {
  auto gp = std::make_shared<DiffeoSpec>(g);
  auto fp = std::make_shared<DiffeoSpec>(f);
  DiffeoSpec d;
  d.name = g.name + "*" + f.name;
  d.in_domain = [gp, fp](const Vec2& x) {
    return fp->in_domain(x) && gp->in_domain(fp->map(x));
  };
  d.in_range = [gp, fp](const Vec2& y) {
    return gp->in_range(y) && fp->in_range(gp->inverse(y));
  };
  d.map = [gp, fp, n = d.name](const Vec2& x) {
    const Vec2 mid = fp->map(x);
    if (!gp->in_domain(mid)) throw DomainError(n + ": intermediate point outside outer map's domain");
    return gp->map(mid);
  };
  d.jacobian = [gp, fp](const Vec2& x) -> Mat2 {
    return gp->jacobian(fp->map(x)) * fp->jacobian(x);
  };
  d.inverse = [gp, fp, n = d.name](const Vec2& y) {
    const Vec2 mid = gp->inverse(y);
    if (!fp->in_range(mid)) throw DomainError(n + ": intermediate point outside inner map's range");
    return fp->inverse(mid);
  };
  return d;
}

DiffeoSpec dilate_conjugate(const DiffeoSpec& f, double s) {
  if (!(s > 0.0)) throw ParameterError("dilate_conjugate: scale must be positive");
  auto fp = std::make_shared<DiffeoSpec>(f);
  DiffeoSpec d;
  std::ostringstream name;
  name << f.name << "@" << s;
  d.name = name.str();
  d.map = [fp, s](const Vec2& x) -> Vec2 { return fp->map(s * x) / s; };
  d.jacobian = [fp, s](const Vec2& x) -> Mat2 { return fp->jacobian(s * x); };
  d.inverse = [fp, s](const Vec2& y) -> Vec2 { return fp->inverse(s * y) / s; };
  d.in_domain = [fp, s](const Vec2& x) { return fp->in_domain(s * x); };
  d.in_range = [fp, s](const Vec2& y) { return fp->in_range(s * y); };
  return d;
}

DiffeoSpec bump_diffeo(double t, unsigned long long seed) {
  if (!(std::abs(t) <= 0.2)) throw ParameterError("bump: |t| must not exceed 0.2");
  auto bump = std::make_shared<Bump>();
  std::mt19937_64 gen(seed);
  for (auto& row : bump->coef) {
    for (double& c : row) c = uniform_pm1(gen);
  }
  // normalise sup |Db| on a fine grid
  double sup = 0.0;
  constexpr int n = 161;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x(-kBumpSupport + 2.0 * kBumpSupport * i / (n - 1),
                   -kBumpSupport + 2.0 * kBumpSupport * j / (n - 1));
      sup = std::max(sup, spectral_norm(bump->jacobian(x)));
    }
  }
  const double scale = kBumpJacobianBound / sup;
  for (auto& row : bump->coef) {
    for (double& c : row) c *= scale;
  }

  DiffeoSpec d;
  std::ostringstream name;
  name << "bump:" << t << ":" << seed;
  d.name = name.str();
  d.map = [bump, t](const Vec2& x) -> Vec2 { return x + t * bump->value(x); };
  d.jacobian = [bump, t](const Vec2& x) -> Mat2 {
    return Mat2::Identity() + t * bump->jacobian(x);
  };
  d.inverse = [bump, t, n = d.name](const Vec2& y) -> Vec2 {
    Vec2 x = y;
    for (int it = 0; it < 60; ++it) {
      const Vec2 res = x + t * bump->value(x) - y;
      const Mat2 jac = Mat2::Identity() + t * bump->jacobian(x);
      const Vec2 step = jac.partialPivLu().solve(res);
      x -= step;
      if (step.norm() <= 1e-16 * (1.0 + x.norm())) return x;
    }
    if ((x + t * bump->value(x) - y).norm() > 1e-12) {
      throw InternalError(n + ": inverse iteration did not converge");
    }
    return x;
  };
  d.in_domain = [](const Vec2&) { return true; };
  d.in_range = [](const Vec2&) { return true; };
  return d;
}

DiffeoSpec diffeo_from_name(const std::string& name) {
  auto fields = [&] {
    std::vector<std::string> parts;
    std::stringstream ss(name);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    return parts;
  }();
  auto number = [&](const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) throw ParameterError("bad number '" + s + "' in map name '" + name + "'");
    return v;
  };
  if (fields.empty()) throw ParameterError("empty map name");
  const std::string& head = fields[0];
  if (head == "identity" && fields.size() == 1) return identity_map();
  if (head == "cloak" && fields.size() == 1) return cloak_map();
  if (head == "inversion" && fields.size() == 1) return inversion_map();
  if (head == "regcloak" && fields.size() == 2) return reg_cloak_map(number(fields[1]));
  if (head == "bump" && fields.size() == 3) {
    const double seed = number(fields[2]);
    if (seed < 0 || seed != std::floor(seed)) throw ParameterError("bump seed must be a non-negative integer");
    return bump_diffeo(number(fields[1]), static_cast<unsigned long long>(seed));
  }
  throw ParameterError("unknown map name '" + name + "'");
}

MaterialField cloak_shell_medium(double eps) {
  MaterialField m = push_forward(reg_cloak_map(eps), isotropic_medium(1.0, 1.0));
  // radial eigenvalue r/(2(1-eps)+r), tangential its inverse, q = (2-eps)^2 r/(2(1-eps)+r)
  m.lower_ellipticity = std::min(eps / (2.0 - eps), eps * (2.0 - eps));
  m.upper_ellipticity = (2.0 - eps) / eps;
  return m;
}

}  // namespace cloakspec
