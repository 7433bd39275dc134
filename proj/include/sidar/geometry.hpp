#pragma once

// Projective geometry core: pinhole projection, plane-induced homographies by
// two independent constructions (pose/plane and DLT), composition, and the
// determinant-normalized homography distance.
//
// Conventions, fixed once for the whole pipeline:
//   - world: the textured plane is z = 0, centered at the origin, facing +z;
//     cameras live at z > 0.
//   - camera frame: x right, y down, z forward (into the scene); a pose maps
//     world to camera, X_cam = R X + t.
//   - pixels: the calibration matrix maps the sensor rectangle onto
//     [0,W] x [0,H]; pixel (i,j) has its center at (i+0.5, j+0.5).

#include <Eigen/Dense>

#include <array>
#include <cmath>

#include "sidar/error.hpp"

namespace sidar {

using Mat3 = Eigen::Matrix3d;
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Vec9 = Eigen::Matrix<double, 9, 1>;
using Mat89 = Eigen::Matrix<double, 8, 9>;

inline constexpr double kSingularDetEps = 1e-12;
inline constexpr double kDltDegenerateRatio = 1e-10;

// The textured canonical plane: width w, height h, on z = 0.
struct PlaneSpec {
  double width = 2.0;
  double height = 2.0;

  // Corner order: (+w/2,+h/2), (-w/2,+h/2), (+w/2,-h/2), (-w/2,-h/2).
  std::array<Vec3, 4> corners() const {
    const double x = width / 2.0, y = height / 2.0;
    return {Vec3(x, y, 0), Vec3(-x, y, 0), Vec3(x, -y, 0), Vec3(-x, -y, 0)};
  }

  // Plane sized to the texture's aspect ratio, longest side = max_dim.
  static PlaneSpec from_texture(int tex_w, int tex_h, double max_dim = 2.0) {
    if (tex_w <= 0 || tex_h <= 0) raise(errc::invalid_dimension, "empty texture");
    PlaneSpec p;
    if (tex_w >= tex_h) {
      p.width = max_dim;
      p.height = max_dim * static_cast<double>(tex_h) / static_cast<double>(tex_w);
    } else {
      p.height = max_dim;
      p.width = max_dim * static_cast<double>(tex_w) / static_cast<double>(tex_h);
    }
    return p;
  }
};

struct CameraIntrinsics {
  double sensor_width = 1.0;       // w', world units
  double sensor_height = 1.0;      // h'
  double principal_distance = 1.0; // f, world units
  int res_x = 1;
  int res_y = 1;
  Vec2 principal_point = Vec2(0.5, 0.5);  // pixels

  void validate() const {
    if (sensor_width <= 0 || sensor_height <= 0 || principal_distance <= 0 ||
        res_x <= 0 || res_y <= 0)
      raise(errc::invalid_dimension, "camera intrinsics must be positive");
  }

  // Upper-triangular K with positive diagonal; K(2,2) = 1 so the third
  // coordinate of K [R|t] X is the camera-frame depth.
  Mat3 matrix() const {
    Mat3 k = Mat3::Zero();
    k(0, 0) = principal_distance * res_x / sensor_width;
    k(1, 1) = principal_distance * res_y / sensor_height;
    k(0, 2) = principal_point.x();
    k(1, 2) = principal_point.y();
    k(2, 2) = 1.0;
    return k;
  }
};

struct CameraPose {
  Mat3 rotation = Mat3::Identity();  // world -> camera
  Vec3 translation = Vec3::Zero();

  Vec3 center() const { return -rotation.transpose() * translation; }

  bool is_orthonormal(double tol = 1e-9) const {
    return (rotation.transpose() * rotation - Mat3::Identity()).norm() <= tol &&
           std::abs(rotation.determinant() - 1.0) <= tol;
  }
};

struct Camera {
  CameraIntrinsics intrinsics;
  CameraPose pose;
};

// n^T X + d = 0, |n| = 1.
struct Plane3D {
  Vec3 normal = Vec3(0, 0, 1);
  double offset = 0.0;

  static Plane3D xy() { return {}; }
};

namespace detail {

inline Mat3 canonicalize_homography(const Mat3& m) {
  const double det = m.determinant();
  if (std::abs(det) < kSingularDetEps) raise(errc::singular_homography, "matrix is rank deficient");
  Mat3 h = m / std::cbrt(std::abs(det));
  // |det| is now 1; resolve the remaining sign so the representative is
  // unique: the largest-magnitude entry (first in row-major order on ties)
  // must be positive.
  double best = 0.0;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c)
      if (std::abs(h(r, c)) > std::abs(best)) best = h(r, c);
  if (best < 0.0) h = -h;
  return h;
}

}  // namespace detail

// 3x3 projective map between two images, held in canonical form:
// |det| = 1 and the largest-magnitude entry positive.
class Homography {
 public:
  Homography() : m_(Mat3::Identity()) {}
  explicit Homography(const Mat3& m) : m_(detail::canonicalize_homography(m)) {}

  static Homography identity() { return Homography(); }

  const Mat3& matrix() const { return m_; }
  double operator()(int r, int c) const { return m_(r, c); }

  // Map a pixel (inhomogeneous in, inhomogeneous out).
  Vec2 apply(const Vec2& p) const {
    const Vec3 q = m_ * Vec3(p.x(), p.y(), 1.0);
    return q.head<2>() / q.z();
  }

 private:
  Mat3 m_;
};

// x = K [R|t] (X,1); the third coordinate is the camera-frame depth.
inline Vec3 project(const CameraIntrinsics& intr, const CameraPose& pose, const Vec3& x_world) {
  const Vec3 x_cam = pose.rotation * x_world + pose.translation;
  if (std::abs(x_cam.z()) < 1e-12)
    raise(errc::degenerate_projection, "point on the principal plane of the camera");
  return intr.matrix() * x_cam;
}

inline Vec2 project_px(const CameraIntrinsics& intr, const CameraPose& pose, const Vec3& x_world) {
  const Vec3 x = project(intr, pose, x_world);
  return x.head<2>() / x.z();
}

inline Vec2 project_px(const Camera& cam, const Vec3& x_world) {
  return project_px(cam.intrinsics, cam.pose, x_world);
}

// Intercept theorem: f / d = w' / w. Matched aspect ratios make the same f
// optimal for the vertical axis.
inline double aligned_focal_length(double distance, double image_width, double sensor_width) {
  if (distance <= 0 || image_width <= 0 || sensor_width <= 0)
    raise(errc::invalid_dimension, "aligned_focal_length requires positive inputs");
  return distance * sensor_width / image_width;
}

// H_ij = K_j (R - t n^T / d) K_i^{-1}, with camera j's pose and the plane
// first re-expressed in the frame whose origin is camera i's projection
// center. Maps pixels of image i to pixels of image j.
inline Homography homography_from_pose_plane(const CameraIntrinsics& intr_i,
                                             const CameraPose& pose_i,
                                             const CameraIntrinsics& intr_j,
                                             const CameraPose& pose_j,
                                             const Plane3D& plane) {
  const Mat3 k_i = intr_i.matrix();
  if (std::abs(k_i.determinant()) < kSingularDetEps)
    raise(errc::singular_calibration, "K_i is not invertible");

  // Relative pose of camera j in camera i's frame.
  const Mat3 rel_r = pose_j.rotation * pose_i.rotation.transpose();
  const Vec3 rel_t = pose_j.translation - rel_r * pose_i.translation;

  // Plane in camera i's frame: n_c^T X_c + d_c = 0.
  const Vec3 n_c = pose_i.rotation * plane.normal;
  const double d_c = plane.offset - n_c.dot(pose_i.translation);
  if (std::abs(d_c) < 1e-9)
    raise(errc::plane_through_center, "plane passes through the projection center of camera i");

  const Mat3 h = intr_j.matrix() * (rel_r - (rel_t * n_c.transpose()) / d_c) * k_i.inverse();
  return Homography(h);
}

namespace detail {

struct NullspaceResult {
  Vec9 vector;       // unit right-singular vector for the smallest singular value
  double sigma_max;  // sigma_1
  double sigma_min;  // sigma_8
};

inline NullspaceResult svd_nullspace(const Mat89& a) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 8, 9>> svd(a, Eigen::ComputeFullV);
  NullspaceResult r;
  r.vector = svd.matrixV().col(8);
  r.sigma_max = svd.singularValues()(0);
  r.sigma_min = svd.singularValues()(7);
  return r;
}

// Similarity moving the points to centroid 0 and mean distance sqrt(2).
inline Mat3 hartley_normalization(const std::array<Vec2, 4>& pts) {
  Vec2 centroid = Vec2::Zero();
  for (const auto& p : pts) centroid += p;
  centroid /= 4.0;
  double mean_dist = 0.0;
  for (const auto& p : pts) mean_dist += (p - centroid).norm();
  mean_dist /= 4.0;
  const double s = mean_dist > 0.0 ? std::sqrt(2.0) / mean_dist : 1.0;
  Mat3 t = Mat3::Identity();
  t(0, 0) = s;
  t(1, 1) = s;
  t(0, 2) = -s * centroid.x();
  t(1, 2) = -s * centroid.y();
  return t;
}

// Two rows of the DLT design matrix for one correspondence (w = w' = 1),
// h = vec(H) row-major.
inline void dlt_rows(const Vec2& x, const Vec2& xp, Eigen::Matrix<double, 2, 9>& block) {
  const Vec3 xh(x.x(), x.y(), 1.0);
  block.row(0) << 0, 0, 0, -xh.x(), -xh.y(), -xh.z(), xp.y() * xh.x(), xp.y() * xh.y(), xp.y() * xh.z();
  block.row(1) << -xh.x(), -xh.y(), -xh.z(), 0, 0, 0, xp.x() * xh.x(), xp.x() * xh.y(), xp.x() * xh.z();
}

}  // namespace detail

// Unit-norm v minimizing ||A v||, via the SVD of the stacked design matrix.
inline Vec9 nullspace_last_singular_vector(const Mat89& a) {
  return detail::svd_nullspace(a).vector;
}

// Four-point DLT. Coordinates are Hartley-normalized before the design
// matrix is assembled, and the similarity transforms are undone afterwards;
// bare pixel-scale DLT is too ill-conditioned for the 1e-9 residual contract.
inline Homography dlt_homography(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst) {
  const Mat3 t_src = detail::hartley_normalization(src);
  const Mat3 t_dst = detail::hartley_normalization(dst);

  auto apply = [](const Mat3& t, const Vec2& p) {
    return Vec2(t(0, 0) * p.x() + t(0, 2), t(1, 1) * p.y() + t(1, 2));
  };

  Mat89 a;
  for (int k = 0; k < 4; ++k) {
    Eigen::Matrix<double, 2, 9> block;
    detail::dlt_rows(apply(t_src, src[k]), apply(t_dst, dst[k]), block);
    a.block<2, 9>(2 * k, 0) = block;
  }

  const auto ns = detail::svd_nullspace(a);
  if (ns.sigma_max <= 0.0 || ns.sigma_min / ns.sigma_max < kDltDegenerateRatio)
    raise(errc::degenerate_configuration, "DLT design matrix is rank deficient");

  Mat3 h_norm;
  h_norm << ns.vector(0), ns.vector(1), ns.vector(2),
            ns.vector(3), ns.vector(4), ns.vector(5),
            ns.vector(6), ns.vector(7), ns.vector(8);

  const Mat3 h = t_dst.inverse() * h_norm * t_src;
  // Collinear points in only one image keep A at rank 8 but produce a
  // rank-deficient map; that is still a degenerate configuration.
  if (std::abs(h.determinant()) < kSingularDetEps)
    raise(errc::degenerate_configuration, "DLT solution is rank deficient");
  return Homography(h);
}

// compose(H_ij, H_jk) -> H_ik (x_k = H_jk H_ij x_i).
inline Homography compose(const Homography& h_ij, const Homography& h_jk) {
  return Homography(h_jk.matrix() * h_ij.matrix());
}

inline Homography invert(const Homography& h) {
  if (std::abs(h.matrix().determinant()) < kSingularDetEps)
    raise(errc::singular_homography, "cannot invert a singular homography");
  return Homography(h.matrix().inverse());
}

// || A/cbrt(det A) - B/cbrt(det B) ||_F with the real signed cube root, so
// both normalized determinants are exactly one.
inline double homography_distance(const Mat3& a, const Mat3& b) {
  const double det_a = a.determinant();
  const double det_b = b.determinant();
  if (std::abs(det_a) < kSingularDetEps || std::abs(det_b) < kSingularDetEps)
    raise(errc::singular_homography, "homography_distance needs nonzero determinants");
  return (a / std::cbrt(det_a) - b / std::cbrt(det_b)).norm();
}

inline double homography_distance(const Homography& a, const Homography& b) {
  return homography_distance(a.matrix(), b.matrix());
}

}  // namespace sidar
