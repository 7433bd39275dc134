#pragma once

// Ray intersections for the occluder primitives, in canonical object space:
//   sphere   unit radius
//   cube     [-1,1]^3
//   cylinder radius 1, z in [-1,1], capped
//   cone     base radius 1 at z=-1, apex at z=+1, capped base
//   torus    major radius 1, minor radius 1/4, axis z
// Rays are intersected with unnormalized directions so the parameter t is
// preserved across the object's affine transform.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "sidar/geometry.hpp"
#include "sidar/scene.hpp"

namespace sidar {

namespace detail {

inline int solve_quadratic(double a, double b, double c, double out[2]) {
  if (std::abs(a) < 1e-300) {
    if (std::abs(b) < 1e-300) return 0;
    out[0] = -c / b;
    return 1;
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return 0;
  const double s = std::sqrt(disc);
  const double q = b < 0.0 ? -0.5 * (b - s) : -0.5 * (b + s);
  out[0] = q / a;
  out[1] = std::abs(q) > 1e-300 ? c / q : out[0];
  if (out[0] > out[1]) std::swap(out[0], out[1]);
  return disc == 0.0 ? 1 : 2;
}

// Real roots of t^3 + a t^2 + b t + c = 0.
inline int solve_cubic(double a, double b, double c, double out[3]) {
  const double q = (a * a - 3.0 * b) / 9.0;
  const double r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
  const double q3 = q * q * q;
  if (r * r < q3) {
    const double theta = std::acos(std::clamp(r / std::sqrt(q3), -1.0, 1.0));
    const double m = -2.0 * std::sqrt(q);
    out[0] = m * std::cos(theta / 3.0) - a / 3.0;
    out[1] = m * std::cos((theta + 2.0 * std::numbers::pi) / 3.0) - a / 3.0;
    out[2] = m * std::cos((theta - 2.0 * std::numbers::pi) / 3.0) - a / 3.0;
    return 3;
  }
  const double e = -std::copysign(std::cbrt(std::abs(r) + std::sqrt(r * r - q3)), r);
  const double f = std::abs(e) > 1e-300 ? q / e : 0.0;
  out[0] = e + f - a / 3.0;
  return 1;
}

// Real roots of x^4 + a x^3 + b x^2 + c x + d = 0 (Ferrari), Newton-polished.
inline int solve_quartic(double a, double b, double c, double d, double out[4]) {
  // Depressed form y^4 + p y^2 + q y + r with x = y - a/4.
  const double a2 = a * a;
  const double p = b - 3.0 / 8.0 * a2;
  const double q = c - 0.5 * a * b + a2 * a / 8.0;
  const double r = d - 0.25 * a * c + a2 * b / 16.0 - 3.0 * a2 * a2 / 256.0;

  int n = 0;
  double ys[4];
  if (std::abs(q) < 1e-12) {
    // Biquadratic.
    double z[2];
    const int nz = solve_quadratic(1.0, p, r, z);
    for (int i = 0; i < nz; ++i) {
      if (z[i] < 0.0) continue;
      const double s = std::sqrt(z[i]);
      ys[n++] = s;
      ys[n++] = -s;
    }
  } else {
    // Resolvent cubic 8m^3 + 8pm^2 + (2p^2-8r)m - q^2 = 0; any real root
    // with m > 0 splits the quartic into two quadratics.
    double m_roots[3];
    const int nm = solve_cubic(p, (p * p - 4.0 * r) / 4.0, -q * q / 8.0, m_roots);
    double m = -1.0;
    for (int i = 0; i < nm; ++i) m = std::max(m, m_roots[i]);
    if (m <= 0.0) return 0;
    const double s = std::sqrt(2.0 * m);
    const double t0 = p / 2.0 + m;
    double ts[2];
    int nq = solve_quadratic(1.0, -s, t0 + q / (2.0 * s), ts);
    for (int i = 0; i < nq; ++i) ys[n++] = ts[i];
    nq = solve_quadratic(1.0, s, t0 - q / (2.0 * s), ts);
    for (int i = 0; i < nq; ++i) ys[n++] = ts[i];
  }

  for (int i = 0; i < n; ++i) {
    double x = ys[i] - a / 4.0;
    // Two Newton steps against the original quartic.
    for (int it = 0; it < 2; ++it) {
      const double f = (((x + a) * x + b) * x + c) * x + d;
      const double df = ((4.0 * x + 3.0 * a) * x + 2.0 * b) * x + c;
      if (std::abs(df) > 1e-300) x -= f / df;
    }
    out[i] = x;
  }
  std::sort(out, out + n);
  return n;
}

}  // namespace detail

// All ray-surface crossings of a canonical primitive, unsorted validity
// filtering left to the caller. Returns the count (up to 4) and fills ts.
inline int primitive_all_hits(GeometryKind kind, const Vec3& o, const Vec3& d, double ts[4]) {
  switch (kind) {
    case GeometryKind::Sphere: {
      double roots[2];
      const int n = detail::solve_quadratic(d.dot(d), 2.0 * o.dot(d), o.dot(o) - 1.0, roots);
      for (int i = 0; i < n; ++i) ts[i] = roots[i];
      return n;
    }
    case GeometryKind::Cube: {
      double tnear = -std::numeric_limits<double>::infinity();
      double tfar = std::numeric_limits<double>::infinity();
      for (int ax = 0; ax < 3; ++ax) {
        if (std::abs(d[ax]) < 1e-300) {
          if (o[ax] < -1.0 || o[ax] > 1.0) return 0;
          continue;
        }
        double t0 = (-1.0 - o[ax]) / d[ax];
        double t1 = (1.0 - o[ax]) / d[ax];
        if (t0 > t1) std::swap(t0, t1);
        tnear = std::max(tnear, t0);
        tfar = std::min(tfar, t1);
        if (tnear > tfar) return 0;
      }
      ts[0] = tnear;
      ts[1] = tfar;
      return 2;
    }
    case GeometryKind::Cylinder: {
      int n = 0;
      double roots[2];
      const int nl = detail::solve_quadratic(d.x() * d.x() + d.y() * d.y(),
                                             2.0 * (o.x() * d.x() + o.y() * d.y()),
                                             o.x() * o.x() + o.y() * o.y() - 1.0, roots);
      for (int i = 0; i < nl; ++i) {
        const double z = o.z() + roots[i] * d.z();
        if (z >= -1.0 && z <= 1.0) ts[n++] = roots[i];
      }
      if (std::abs(d.z()) > 1e-300) {
        for (const double zc : {-1.0, 1.0}) {
          const double t = (zc - o.z()) / d.z();
          const double x = o.x() + t * d.x();
          const double y = o.y() + t * d.y();
          if (x * x + y * y <= 1.0) ts[n++] = t;
        }
      }
      std::sort(ts, ts + n);
      return n;
    }
    case GeometryKind::Cone: {
      // Lateral surface x^2 + y^2 = ((1-z)/2)^2, z in [-1,1].
      int n = 0;
      const double a = d.x() * d.x() + d.y() * d.y() - d.z() * d.z() / 4.0;
      const double b = 2.0 * (o.x() * d.x() + o.y() * d.y()) + d.z() * (1.0 - o.z()) / 2.0;
      const double c = o.x() * o.x() + o.y() * o.y() - (1.0 - o.z()) * (1.0 - o.z()) / 4.0;
      double roots[2];
      const int nl = detail::solve_quadratic(a, b, c, roots);
      for (int i = 0; i < nl; ++i) {
        const double z = o.z() + roots[i] * d.z();
        if (z >= -1.0 && z <= 1.0) ts[n++] = roots[i];
      }
      if (std::abs(d.z()) > 1e-300) {
        const double t = (-1.0 - o.z()) / d.z();
        const double x = o.x() + t * d.x();
        const double y = o.y() + t * d.y();
        if (x * x + y * y <= 1.0) ts[n++] = t;
      }
      std::sort(ts, ts + n);
      return n;
    }
    case GeometryKind::Torus: {
      constexpr double rr = 1.0;    // major
      constexpr double sr = 0.25;   // minor
      const double m = d.dot(d);
      const double nn = o.dot(d);
      const double k = o.dot(o) + rr * rr - sr * sr;
      const double a3 = 4.0 * m * nn;
      const double a2 = 2.0 * m * k + 4.0 * nn * nn - 4.0 * rr * rr * (d.x() * d.x() + d.y() * d.y());
      const double a1 = 4.0 * nn * k - 8.0 * rr * rr * (o.x() * d.x() + o.y() * d.y());
      const double a0 = k * k - 4.0 * rr * rr * (o.x() * o.x() + o.y() * o.y());
      const double inv = 1.0 / (m * m);
      return detail::solve_quartic(a3 * inv, a2 * inv, a1 * inv, a0 * inv, ts);
    }
  }
  return 0;
}

// Outward geometric normal at local point p on the canonical primitive.
inline Vec3 primitive_normal(GeometryKind kind, const Vec3& p) {
  switch (kind) {
    case GeometryKind::Sphere:
      return p;
    case GeometryKind::Cube: {
      Vec3 a = p.cwiseAbs();
      if (a.x() >= a.y() && a.x() >= a.z()) return Vec3(std::copysign(1.0, p.x()), 0, 0);
      if (a.y() >= a.z()) return Vec3(0, std::copysign(1.0, p.y()), 0);
      return Vec3(0, 0, std::copysign(1.0, p.z()));
    }
    case GeometryKind::Cylinder: {
      if (p.z() > 1.0 - 1e-9) return Vec3(0, 0, 1);
      if (p.z() < -1.0 + 1e-9) return Vec3(0, 0, -1);
      return Vec3(p.x(), p.y(), 0);
    }
    case GeometryKind::Cone: {
      if (p.z() < -1.0 + 1e-9) return Vec3(0, 0, -1);
      // Gradient of x^2 + y^2 - (1-z)^2/4.
      return Vec3(2.0 * p.x(), 2.0 * p.y(), (1.0 - p.z()) / 2.0);
    }
    case GeometryKind::Torus: {
      constexpr double rr = 1.0, sr = 0.25;
      const double k = p.dot(p) + rr * rr - sr * sr;
      return Vec3(4.0 * k * p.x() - 8.0 * rr * rr * p.x(),
                  4.0 * k * p.y() - 8.0 * rr * rr * p.y(),
                  4.0 * k * p.z());
    }
  }
  return Vec3(0, 0, 1);
}

// An occluder with its world transform factored for ray tests:
// p_world = position + R * diag(scale) * p_local (R = Rz Ry Rx).
class OccluderGeom {
 public:
  explicit OccluderGeom(const OccluderSpec& spec) : spec_(spec) {
    const double cx = std::cos(spec.rotation_euler.x()), sx = std::sin(spec.rotation_euler.x());
    const double cy = std::cos(spec.rotation_euler.y()), sy = std::sin(spec.rotation_euler.y());
    const double cz = std::cos(spec.rotation_euler.z()), sz = std::sin(spec.rotation_euler.z());
    Mat3 rx, ry, rz;
    rx << 1, 0, 0, 0, cx, -sx, 0, sx, cx;
    ry << cy, 0, sy, 0, 1, 0, -sy, 0, cy;
    rz << cz, -sz, 0, sz, cz, 0, 0, 0, 1;
    rot_ = rz * ry * rx;
    inv_scale_ = spec.scale.cwiseInverse();
  }

  const OccluderSpec& spec() const { return spec_; }

  // Up to four parametric hits with t shared between world and local rays.
  int all_hits(const Vec3& ro, const Vec3& rd, double ts[4]) const {
    const Vec3 lo = inv_scale_.cwiseProduct(rot_.transpose() * (ro - spec_.position));
    const Vec3 ld = inv_scale_.cwiseProduct(rot_.transpose() * rd);
    return primitive_all_hits(spec_.geometry, lo, ld, ts);
  }

  Vec3 world_normal(const Vec3& world_point) const {
    const Vec3 lp = inv_scale_.cwiseProduct(rot_.transpose() * (world_point - spec_.position));
    const Vec3 ln = primitive_normal(spec_.geometry, lp);
    return (rot_ * inv_scale_.cwiseProduct(ln)).normalized();
  }

 private:
  OccluderSpec spec_;
  Mat3 rot_;
  Vec3 inv_scale_;
};

}  // namespace sidar
