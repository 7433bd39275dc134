// Geometry core tests: projection, the two homography constructions and
// their cross-agreement, DLT residuals, composition, and the
// determinant-normalized distance.

#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <array>
#include <cmath>

#include <sidar/geometry.hpp>
#include <sidar/rng.hpp>
#include <sidar/sampling.hpp>

using namespace sidar;

namespace {

CameraIntrinsics identity_intrinsics() {
  CameraIntrinsics k;
  k.sensor_width = 1.0;
  k.sensor_height = 1.0;
  k.principal_distance = 1.0;
  k.res_x = 1;
  k.res_y = 1;
  k.principal_point = Vec2(0.0, 0.0);
  return k;
}

SceneConfig default_config() {
  SceneConfig cfg;
  return cfg;
}

std::vector<Camera> random_cameras(int n, std::uint64_t seed) {
  SceneConfig cfg = default_config();
  Pcg32 rng(seed);
  return sample_cameras(n, rng, cfg);
}

// Raw (unnormalized) DLT design matrix straight from the two-row block
// definition; kept independent of the library's Hartley-normalized path.
Mat89 raw_design_matrix(const std::array<Vec2, 4>& src, const std::array<Vec2, 4>& dst) {
  Mat89 a;
  for (int k = 0; k < 4; ++k) {
    const Vec3 x(src[static_cast<std::size_t>(k)].x(), src[static_cast<std::size_t>(k)].y(), 1.0);
    const double xp = dst[static_cast<std::size_t>(k)].x();
    const double yp = dst[static_cast<std::size_t>(k)].y();
    a.row(2 * k) << 0, 0, 0, -x.x(), -x.y(), -x.z(), yp * x.x(), yp * x.y(), yp * x.z();
    a.row(2 * k + 1) << -x.x(), -x.y(), -x.z(), 0, 0, 0, xp * x.x(), xp * x.y(), xp * x.z();
  }
  return a;
}

std::array<Vec2, 4> project_corners(const Camera& cam, const PlaneSpec& plane) {
  std::array<Vec2, 4> px;
  const auto corners = plane.corners();
  for (std::size_t k = 0; k < 4; ++k) px[k] = project_px(cam, corners[k]);
  return px;
}

}  // namespace

// ---------------------------------------------------------------------------
// project
// ---------------------------------------------------------------------------

TEST(Project, IdentityCameraOnAxis) {
  const CameraIntrinsics k = identity_intrinsics();
  const CameraPose pose;  // R = I, t = 0
  const Vec3 x = project(k, pose, Vec3(0, 0, 1));
  EXPECT_NEAR(x.x(), 0.0, 1e-15);
  EXPECT_NEAR(x.y(), 0.0, 1e-15);
  EXPECT_NEAR(x.z(), 1.0, 1e-15);
}

TEST(Project, DirectSubstitution) {
  const CameraIntrinsics k = identity_intrinsics();
  CameraPose pose;
  pose.translation = Vec3(0, 0, 2);
  const Vec3 x = project(k, pose, Vec3(1, 1, 0));
  EXPECT_NEAR(x.x(), 1.0, 1e-15);
  EXPECT_NEAR(x.y(), 1.0, 1e-15);
  EXPECT_NEAR(x.z(), 2.0, 1e-15);
  EXPECT_NEAR(x.x() / x.z(), 0.5, 1e-15);
  EXPECT_NEAR(x.y() / x.z(), 0.5, 1e-15);
}

TEST(Project, ThirdCoordinateIsDepth) {
  const auto cams = random_cameras(20, 11);
  for (const auto& cam : cams) {
    const Vec3 x_world(0.3, -0.2, 0.0);
    const Vec3 x = project(cam.intrinsics, cam.pose, x_world);
    const Vec3 x_cam = cam.pose.rotation * x_world + cam.pose.translation;
    EXPECT_DOUBLE_EQ(x.z(), x_cam.z());
    EXPECT_GT(x.z(), 0.0);
  }
}

TEST(Project, DegenerateDepthThrows) {
  const CameraIntrinsics k = identity_intrinsics();
  const CameraPose pose;
  try {
    project(k, pose, Vec3(1, 1, 0));  // depth 0 for the identity pose
    FAIL() << "expected DegenerateProjection";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_projection);
  }
}

// Cross-oracle: a projected plane corner matches the plane-induced
// homography applied to the same corner seen from a second camera.
TEST(Project, AgreesWithPlaneInducedHomography) {
  const PlaneSpec plane{2.0, 1.5};
  const auto cams = random_cameras(40, 23);
  for (std::size_t i = 0; i + 1 < cams.size(); i += 2) {
    const Camera& a = cams[i];
    const Camera& b = cams[i + 1];
    const Homography h = homography_from_pose_plane(a.intrinsics, a.pose, b.intrinsics, b.pose,
                                                    Plane3D::xy());
    for (const auto& corner : plane.corners()) {
      const Vec2 mapped = h.apply(project_px(a, corner));
      const Vec2 direct = project_px(b, corner);
      EXPECT_LT((mapped - direct).norm(), 1e-9);
    }
  }
}

// ---------------------------------------------------------------------------
// aligned_focal_length
// ---------------------------------------------------------------------------

TEST(AlignedFocalLength, EqualWidths) { EXPECT_DOUBLE_EQ(aligned_focal_length(1, 5, 5), 1.0); }

TEST(AlignedFocalLength, DirectSubstitution) {
  EXPECT_DOUBLE_EQ(aligned_focal_length(2, 4, 1), 0.5);
}

TEST(AlignedFocalLength, RejectsNonPositive) {
  for (const auto& args : {std::array<double, 3>{0, 1, 1}, {1, 0, 1}, {1, 1, 0}, {-1, 1, 1}}) {
    try {
      aligned_focal_length(args[0], args[1], args[2]);
      FAIL() << "expected InvalidDimension";
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), errc::invalid_dimension);
    }
  }
}

// ---------------------------------------------------------------------------
// homography_from_pose_plane
// ---------------------------------------------------------------------------

TEST(PosePlaneHomography, IdenticalCamerasGiveIdentity) {
  const auto cams = random_cameras(5, 31);
  for (const auto& cam : cams) {
    const Homography h = homography_from_pose_plane(cam.intrinsics, cam.pose, cam.intrinsics,
                                                    cam.pose, Plane3D::xy());
    EXPECT_LT((h.matrix() - Mat3::Identity()).norm(), 1e-12);
  }
}

TEST(PosePlaneHomography, PureRotationIgnoresPlane) {
  // Both cameras at the origin; any plane not through the origin gives
  // H = K_j R K_i^-1.
  CameraIntrinsics k = identity_intrinsics();
  CameraPose pose_i;  // identity
  CameraPose pose_j;
  pose_j.rotation = Eigen::AngleAxisd(0.4, Vec3(0.2, 1.0, 0.1).normalized()).toRotationMatrix();

  const Plane3D plane_a{Vec3(0, 0, 1), 1.0};
  const Plane3D plane_b{Vec3(0.3, 0.1, 1).normalized(), 2.5};
  const Homography h_a = homography_from_pose_plane(k, pose_i, k, pose_j, plane_a);
  const Homography h_b = homography_from_pose_plane(k, pose_i, k, pose_j, plane_b);
  EXPECT_LT((h_a.matrix() - h_b.matrix()).norm(), 1e-12);

  const Homography expected(pose_j.rotation);
  EXPECT_LT((h_a.matrix() - expected.matrix()).norm(), 1e-12);
}

TEST(PosePlaneHomography, PlaneThroughCenterThrows) {
  CameraPose pose;
  pose.rotation = look_at_rotation(Vec3(1, 1, 0), Vec3(0, 0, -1));
  pose.translation = -pose.rotation * Vec3(1, 1, 0);  // center on z = 0
  const CameraIntrinsics k = identity_intrinsics();
  try {
    homography_from_pose_plane(k, pose, k, CameraPose{}, Plane3D::xy());
    FAIL() << "expected PlaneThroughCenter";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::plane_through_center);
  }
}

TEST(PosePlaneHomography, SingularCalibrationThrows) {
  CameraIntrinsics k = identity_intrinsics();
  k.principal_distance = 1e-13;
  CameraPose pose;
  pose.translation = Vec3(0, 0, 2);
  try {
    homography_from_pose_plane(k, pose, identity_intrinsics(), pose, Plane3D::xy());
    FAIL() << "expected SingularCalibration";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::singular_calibration);
  }
}

// The central dual-construction check: analytic vs DLT over random pairs.
TEST(PosePlaneHomography, AgreesWithDltOnRandomPairs) {
  const PlaneSpec plane{2.0, 1.4};
  const auto cams = random_cameras(400, 47);
  for (std::size_t i = 0; i + 1 < cams.size(); i += 2) {
    const Camera& a = cams[i];
    const Camera& b = cams[i + 1];
    const Homography analytic = homography_from_pose_plane(a.intrinsics, a.pose, b.intrinsics,
                                                           b.pose, Plane3D::xy());
    const Homography dlt = dlt_homography(project_corners(a, plane), project_corners(b, plane));
    EXPECT_LT((analytic.matrix() - dlt.matrix()).norm(), 1e-6);
  }
}

// ---------------------------------------------------------------------------
// dlt_homography / nullspace
// ---------------------------------------------------------------------------

TEST(Dlt, UnitSquareIdentity) {
  const std::array<Vec2, 4> square = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  const Homography h = dlt_homography(square, square);
  EXPECT_LT((h.matrix() - Mat3::Identity()).norm(), 1e-12);
}

TEST(Dlt, PureTranslation) {
  const std::array<Vec2, 4> square = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  std::array<Vec2, 4> shifted;
  for (std::size_t k = 0; k < 4; ++k) shifted[k] = square[k] + Vec2(1, 2);
  const Homography h = dlt_homography(square, shifted);
  Mat3 expected;
  expected << 1, 0, 1, 0, 1, 2, 0, 0, 1;
  EXPECT_LT((h.matrix() - detail::canonicalize_homography(expected)).norm(), 1e-12);
}

TEST(Dlt, RandomPairsReproject) {
  Pcg32 rng(101);
  for (int trial = 0; trial < 50; ++trial) {
    Mat3 truth;
    do {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) truth(r, c) = rng.uniform(-1.0, 1.0);
      truth(2, 2) = rng.uniform(1.0, 2.0);
    } while (std::abs(truth.determinant()) < 0.05);

    const std::array<Vec2, 4> src = {Vec2(rng.uniform(0, 100), rng.uniform(0, 100)),
                                     Vec2(rng.uniform(100, 200), rng.uniform(0, 100)),
                                     Vec2(rng.uniform(100, 200), rng.uniform(100, 200)),
                                     Vec2(rng.uniform(0, 100), rng.uniform(100, 200))};
    std::array<Vec2, 4> dst;
    bool ok = true;
    for (std::size_t k = 0; k < 4; ++k) {
      const Vec3 q = truth * Vec3(src[k].x(), src[k].y(), 1.0);
      if (std::abs(q.z()) < 1e-3) ok = false;
      dst[k] = q.head<2>() / q.z();
    }
    if (!ok) continue;

    const Homography h = dlt_homography(src, dst);
    for (std::size_t k = 0; k < 4; ++k)
      EXPECT_LT((h.apply(src[k]) - dst[k]).norm(), 1e-9);
  }
}

TEST(Dlt, ResidualBound) {
  const PlaneSpec plane{2.0, 1.2};
  const auto cams = random_cameras(60, 59);
  for (std::size_t i = 0; i + 1 < cams.size(); i += 2) {
    const auto src = project_corners(cams[i], plane);
    const auto dst = project_corners(cams[i + 1], plane);
    const Homography h = dlt_homography(src, dst);

    const Mat89 a = raw_design_matrix(src, dst);
    Vec9 hv;
    hv << h(0, 0), h(0, 1), h(0, 2), h(1, 0), h(1, 1), h(1, 2), h(2, 0), h(2, 1), h(2, 2);
    hv.normalize();
    EXPECT_LE((a * hv).norm(), 1e-9 * a.norm());
  }
}

TEST(Dlt, CollinearPointsDegenerate) {
  // Collinear in both images: rank-deficient design matrix, non-unique H.
  const std::array<Vec2, 4> collinear = {Vec2(0, 0), Vec2(1, 1), Vec2(2, 2), Vec2(0, 1)};
  try {
    dlt_homography(collinear, collinear);
    FAIL() << "expected DegenerateConfiguration";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_configuration);
  }

  // Collinear in the source only: the least-squares map collapses to a line.
  const std::array<Vec2, 4> square = {Vec2(0, 0), Vec2(1, 0), Vec2(1, 1), Vec2(0, 1)};
  try {
    dlt_homography(collinear, square);
    FAIL() << "expected DegenerateConfiguration";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::degenerate_configuration);
  }
}

TEST(Nullspace, ExplicitNullspace) {
  Mat89 a = Mat89::Zero();
  for (int i = 0; i < 8; ++i) a(i, i) = 1.0;
  const Vec9 v = nullspace_last_singular_vector(a);
  EXPECT_NEAR(std::abs(v(8)), 1.0, 1e-12);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
}

TEST(Nullspace, ZeroMatrix) {
  const Mat89 a = Mat89::Zero();
  const Vec9 v = nullspace_last_singular_vector(a);
  EXPECT_NEAR(v.norm(), 1.0, 1e-12);
  EXPECT_EQ((a * v).norm(), 0.0);
}

// ---------------------------------------------------------------------------
// compose / invert
// ---------------------------------------------------------------------------

TEST(Compose, InverseRoundTrip) {
  const auto cams = random_cameras(10, 71);
  for (std::size_t i = 0; i + 1 < cams.size(); i += 2) {
    const Homography h = homography_from_pose_plane(
        cams[i].intrinsics, cams[i].pose, cams[i + 1].intrinsics, cams[i + 1].pose, Plane3D::xy());
    const Homography round = compose(h, invert(h));
    EXPECT_LT((round.matrix() - Mat3::Identity()).norm(), 1e-9);
  }
}

TEST(Compose, IdentityIsNeutral) {
  const auto cams = random_cameras(2, 73);
  const Homography h = homography_from_pose_plane(
      cams[0].intrinsics, cams[0].pose, cams[1].intrinsics, cams[1].pose, Plane3D::xy());
  EXPECT_LT((compose(Homography::identity(), h).matrix() - h.matrix()).norm(), 1e-12);
  EXPECT_LT((compose(h, Homography::identity()).matrix() - h.matrix()).norm(), 1e-12);
}

TEST(Compose, CocycleOverCameraTriples) {
  const auto cams = random_cameras(90, 79);
  for (std::size_t i = 0; i + 2 < cams.size(); i += 3) {
    auto h = [&](std::size_t a, std::size_t b) {
      return homography_from_pose_plane(cams[a].intrinsics, cams[a].pose, cams[b].intrinsics,
                                        cams[b].pose, Plane3D::xy());
    };
    const Homography h12 = h(i, i + 1);
    const Homography h23 = h(i + 1, i + 2);
    const Homography h13 = h(i, i + 2);
    EXPECT_LT(homography_distance(compose(h12, h23), h13), 1e-6);
    EXPECT_LT(homography_distance(invert(h12).matrix(), h(i + 1, i).matrix()), 1e-6);
  }
}

// ---------------------------------------------------------------------------
// canonical form
// ---------------------------------------------------------------------------

TEST(Canonical, ScaleQuotientAndIdempotence) {
  Pcg32 rng(83);
  for (int trial = 0; trial < 100; ++trial) {
    Mat3 m;
    do {
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = rng.uniform(-2.0, 2.0);
    } while (std::abs(m.determinant()) < 0.05);

    const Mat3 canon = detail::canonicalize_homography(m);
    EXPECT_NEAR(std::abs(canon.determinant()), 1.0, 1e-12);

    double best = 0.0;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c)
        if (std::abs(canon(r, c)) > std::abs(best)) best = canon(r, c);
    EXPECT_GT(best, 0.0);

    // Idempotent up to the one extra rescale by cbrt(1 +/- eps).
    const Mat3 twice = detail::canonicalize_homography(canon);
    EXPECT_LT((twice - canon).norm(), 1e-14);

    for (const double c : {-7.0, -0.25, 0.5, 3.0}) {
      const Mat3 scaled = detail::canonicalize_homography(Mat3(c * m));
      EXPECT_LT((scaled - canon).norm(), 1e-12);
    }
  }
}

TEST(Canonical, SingularThrows) {
  Mat3 m = Mat3::Zero();
  m(0, 0) = 1.0;
  try {
    Homography h(m);
    FAIL() << "expected SingularHomography";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::singular_homography);
  }
}

// ---------------------------------------------------------------------------
// homography_distance
// ---------------------------------------------------------------------------

TEST(Distance, IdenticalIsExactlyZero) {
  const auto cams = random_cameras(2, 89);
  const Homography h = homography_from_pose_plane(
      cams[0].intrinsics, cams[0].pose, cams[1].intrinsics, cams[1].pose, Plane3D::xy());
  EXPECT_EQ(homography_distance(h, h), 0.0);
}

TEST(Distance, ScaleInvariance) {
  Mat3 h;
  h << 1.3, 0.2, -0.4, 0.1, 0.9, 0.5, -0.2, 0.05, 1.0;
  for (const double c : {5.0, -3.0, 0.5, 7.0})
    EXPECT_LT(homography_distance(h, Mat3(c * h)), 1e-12);
}

TEST(Distance, ArithmeticOracle) {
  // Independent scalar recomputation: det(diag(1,1,8)) = 8, cbrt = 2,
  // normalized diag(0.5,0.5,4); distance to I is sqrt(0.5^2+0.5^2+3^2).
  const Mat3 a = Mat3::Identity();
  Mat3 b = Mat3::Identity();
  b(2, 2) = 8.0;
  const double expected = std::sqrt(0.5 * 0.5 + 0.5 * 0.5 + 3.0 * 3.0);
  EXPECT_NEAR(homography_distance(a, b), expected, 1e-12);
}

TEST(Distance, SingularThrows) {
  try {
    homography_distance(Mat3::Identity(), Mat3::Zero());
    FAIL() << "expected SingularHomography";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), errc::singular_homography);
  }
}

// Corner transport invariant at full precision.
TEST(Invariants, CornerTransport) {
  const PlaneSpec plane{2.0, 1.6};
  const auto cams = random_cameras(60, 97);
  for (std::size_t i = 0; i + 1 < cams.size(); i += 2) {
    const Homography h = homography_from_pose_plane(
        cams[i].intrinsics, cams[i].pose, cams[i + 1].intrinsics, cams[i + 1].pose, Plane3D::xy());
    for (const auto& corner : plane.corners()) {
      const Vec2 err = h.apply(project_px(cams[i], corner)) - project_px(cams[i + 1], corner);
      EXPECT_LT(err.norm(), 1e-8);
    }
  }
}
