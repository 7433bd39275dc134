#pragma once

// Seeded randomized scene construction: cameras, lights, and occluding
// primitives. Every sampler is a pure function of (rng stream, config);
// sample_scene derives one stream per frame and category so categories can
// be reconfigured independently without disturbing each other.

#include <cmath>
#include <numbers>
#include <vector>

#include "sidar/geometry.hpp"
#include "sidar/rng.hpp"
#include "sidar/scene.hpp"

namespace sidar {

// Rotation taking unit vector `from` onto unit vector `to` about their
// common normal (Rodrigues). Inputs must not be antiparallel.
inline Mat3 rotation_between(const Vec3& from, const Vec3& to) {
  const Vec3 axis = from.cross(to);
  const double s2 = axis.squaredNorm();
  const double c = from.dot(to);
  if (s2 < 1e-30) {
    if (c > 0.0) return Mat3::Identity();
    raise(errc::invalid_config, "rotation_between: antiparallel axes");
  }
  Mat3 k = Mat3::Zero();
  k(0, 1) = -axis.z(); k(0, 2) = axis.y();
  k(1, 0) = axis.z();  k(1, 2) = -axis.x();
  k(2, 0) = -axis.y(); k(2, 1) = axis.x();
  return Mat3::Identity() + k + k * k * ((1.0 - c) / s2);
}

// World-to-camera rotation for a camera at `position` looking at `target`
// (x right, y down, z forward). Up is world +y, falling back to +x when the
// optical axis is within 1e-6 of +/-y.
inline Mat3 look_at_rotation(const Vec3& position, const Vec3& target) {
  const Vec3 forward = (target - position).normalized();
  Vec3 up(0, 1, 0);
  if (std::abs(forward.dot(up)) > 1.0 - 1e-6) up = Vec3(1, 0, 0);
  const Vec3 right = forward.cross(up).normalized();
  const Vec3 down = forward.cross(right);
  Mat3 r;
  r.row(0) = right;
  r.row(1) = down;
  r.row(2) = forward;
  return r;
}

// HSV -> RGB, hue in [0,1), s in [0,1], v in [0,1]. Result is used directly
// as a linear emission tint.
inline Vec3 hsv_to_rgb(double h, double s, double v) {
  h -= std::floor(h);
  const double c = v * s;
  const double hp = h * 6.0;
  const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
  double r = 0, g = 0, b = 0;
  switch (static_cast<int>(hp) % 6) {
    case 0: r = c; g = x; break;
    case 1: r = x; g = c; break;
    case 2: g = c; b = x; break;
    case 3: g = x; b = c; break;
    case 4: r = x; b = c; break;
    default: r = c; b = x; break;
  }
  const double m = v - c;
  return Vec3(r + m, g + m, b + m);
}

inline std::vector<LightSpec> sample_lights(int n, Pcg32& rng, const SceneConfig& cfg) {
  if (n < 0) raise(errc::invalid_config, "sample_lights: n must be >= 0");
  cfg.validate();
  std::vector<LightSpec> lights;
  lights.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    LightSpec l;
    switch (rng.uniform_int(0, kLightKindCount - 1)) {
      case 0: l.kind = LightKind::Spot; break;
      case 1: l.kind = LightKind::Point; break;
      default: l.kind = LightKind::Area; break;
    }
    l.intensity = rng.uniform(cfg.light_intensity.lo, cfg.light_intensity.hi);
    l.position = Vec3(rng.uniform(cfg.light_x.lo, cfg.light_x.hi),
                      rng.uniform(cfg.light_y.lo, cfg.light_y.hi),
                      rng.uniform(cfg.light_z.lo, cfg.light_z.hi));
    const double h = rng.next_double();
    const double s = rng.uniform(0.0, cfg.saturation_eps);
    l.color_hsv = Vec3(h, s, 1.0);
    l.color = hsv_to_rgb(h, s, 1.0);
    // Center the emission axis on the plane center: rotate the default
    // axis (0,0,-1) onto -position/|position|.
    l.orientation = rotation_between(Vec3(0, 0, -1), (-l.position).normalized());
    l.spot_angle_deg = cfg.spot_angle_deg;
    l.area_size = cfg.area_light_size;
    lights.push_back(l);
  }
  return lights;
}

inline std::vector<OccluderSpec> sample_occluders(int n, Pcg32& rng, const SceneConfig& cfg) {
  if (n < 0) raise(errc::invalid_config, "sample_occluders: n must be >= 0");
  cfg.validate();
  constexpr double two_pi = 2.0 * std::numbers::pi;
  std::vector<OccluderSpec> occluders;
  occluders.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    OccluderSpec o;
    switch (rng.uniform_int(0, kGeometryKindCount - 1)) {
      case 0: o.geometry = GeometryKind::Sphere; break;
      case 1: o.geometry = GeometryKind::Cube; break;
      case 2: o.geometry = GeometryKind::Cylinder; break;
      case 3: o.geometry = GeometryKind::Cone; break;
      default: o.geometry = GeometryKind::Torus; break;
    }
    o.position = Vec3(rng.uniform(cfg.occluder_x.lo, cfg.occluder_x.hi),
                      rng.uniform(cfg.occluder_y.lo, cfg.occluder_y.hi),
                      rng.uniform(cfg.occluder_z.lo, cfg.occluder_z.hi));
    o.rotation_euler = Vec3(rng.uniform(0.0, two_pi) , rng.uniform(0.0, two_pi),
                            rng.uniform(0.0, two_pi));
    o.scale = Vec3(rng.uniform(cfg.occluder_scale.lo, cfg.occluder_scale.hi),
                   rng.uniform(cfg.occluder_scale.lo, cfg.occluder_scale.hi),
                   rng.uniform(cfg.occluder_scale.lo, cfg.occluder_scale.hi));
    MaterialSpec m;
    switch (rng.uniform_int(0, kMaterialKindCount - 1)) {
      case 0: m.kind = MaterialKind::Diffuse; break;
      case 1: m.kind = MaterialKind::Glossy; break;
      case 2: m.kind = MaterialKind::Metallic; break;
      case 3: m.kind = MaterialKind::Refraction; break;
      default: m.kind = MaterialKind::Transparent; break;
    }
    // All material fields are drawn regardless of kind so the stream layout
    // per occluder is fixed.
    m.base_color = Vec3(rng.next_double(), rng.next_double(), rng.next_double());
    m.roughness = rng.next_double();
    m.index_of_refraction = rng.uniform(1.05, 2.5);
    m.transmission = rng.uniform(0.3, 1.0);
    o.material = m;
    occluders.push_back(o);
  }
  return occluders;
}

// Aligned camera: at (0,0,distance) on the plane normal, principal distance
// from the intercept theorem, sensor aspect equal to the plane aspect. The
// plane corners land exactly on the sensor corners.
inline Camera build_aligned_camera(const PlaneSpec& plane, double distance, double sensor_width,
                                   int res_x, int res_y) {
  if (distance <= 0.0) raise(errc::invalid_dimension, "aligned camera distance must be positive");
  Camera cam;
  cam.intrinsics.sensor_width = sensor_width;
  cam.intrinsics.sensor_height = sensor_width * plane.height / plane.width;
  cam.intrinsics.principal_distance = aligned_focal_length(distance, plane.width, sensor_width);
  cam.intrinsics.res_x = res_x;
  cam.intrinsics.res_y = res_y;
  cam.intrinsics.principal_point = Vec2(res_x / 2.0, res_y / 2.0);
  cam.intrinsics.validate();
  const Vec3 position(0, 0, distance);
  cam.pose.rotation = look_at_rotation(position, Vec3::Zero());
  cam.pose.translation = -cam.pose.rotation * position;
  return cam;
}

inline std::vector<Camera> sample_cameras(int n, Pcg32& rng, const SceneConfig& cfg) {
  if (n < 0) raise(errc::invalid_config, "sample_cameras: n must be >= 0");
  cfg.validate();
  std::vector<Camera> cameras;
  cameras.reserve(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const Vec3 position(rng.uniform(cfg.camera_x.lo, cfg.camera_x.hi),
                        rng.uniform(cfg.camera_y.lo, cfg.camera_y.hi),
                        rng.uniform(cfg.camera_distance.lo, cfg.camera_distance.hi));
    const double fov = rng.uniform(cfg.fov_deg.lo, cfg.fov_deg.hi) * std::numbers::pi / 180.0;
    Camera cam;
    cam.intrinsics.sensor_width = cfg.sensor_width;
    cam.intrinsics.sensor_height = cfg.sensor_width * cfg.res_y / cfg.res_x;
    cam.intrinsics.principal_distance = (cfg.sensor_width / 2.0) / std::tan(fov / 2.0);
    cam.intrinsics.res_x = cfg.res_x;
    cam.intrinsics.res_y = cfg.res_y;
    cam.intrinsics.principal_point = Vec2(cfg.res_x / 2.0, cfg.res_y / 2.0);
    cam.pose.rotation = look_at_rotation(position, Vec3::Zero());
    cam.pose.translation = -cam.pose.rotation * position;
    cameras.push_back(cam);
  }
  return cameras;
}

// Label resolution: configured width, height following the texture aspect.
inline std::pair<int, int> label_resolution(const SceneConfig& cfg, int tex_w, int tex_h) {
  const int w = cfg.res_x;
  const int h = std::max(1, static_cast<int>(std::lround(
                                static_cast<double>(w) * tex_h / tex_w)));
  return {w, h};
}

// Deterministic scene construction. Per-frame streams are derived per
// category, so e.g. the number of lights never shifts the occluder draws.
inline SceneRecord sample_scene(const SceneConfig& cfg, const Image& texture) {
  cfg.validate();
  if (texture.empty()) raise(errc::texture_missing, "sample_scene: empty texture");

  SceneRecord scene;
  scene.seed = cfg.seed;
  scene.mode = cfg.mode;
  scene.plane = PlaneSpec::from_texture(texture.width, texture.height, cfg.plane_max_dim);
  scene.texture.width = texture.width;
  scene.texture.height = texture.height;
  scene.render = RenderSettings{cfg.spp, cfg.max_bounces, cfg.res_x, cfg.res_y,
                                cfg.ambient, cfg.view_ambient};
  scene.texture_image = std::make_shared<Image>(texture);

  const auto [label_w, label_h] = label_resolution(cfg, texture.width, texture.height);
  scene.label_camera = build_aligned_camera(scene.plane, cfg.aligned_distance,
                                            cfg.sensor_width, label_w, label_h);

  scene.frames.reserve(static_cast<std::size_t>(cfg.frames));
  for (int f = 0; f < cfg.frames; ++f) {
    FrameSpec frame;
    if (cfg.mode == SceneMode::Aligned) {
      frame.camera = scene.label_camera;
    } else {
      Pcg32 rng_cam(derive_seed(cfg.seed, stream_tag("cameras"), static_cast<std::uint64_t>(f)));
      frame.camera = sample_cameras(1, rng_cam, cfg).front();
    }
    if (cfg.randomize_lights) {
      Pcg32 rng_lights(derive_seed(cfg.seed, stream_tag("lights"), static_cast<std::uint64_t>(f)));
      const int n = rng_lights.uniform_int(cfg.lights_count.lo, cfg.lights_count.hi);
      frame.lights = sample_lights(n, rng_lights, cfg);
    }
    {
      Pcg32 rng_occ(derive_seed(cfg.seed, stream_tag("occluders"), static_cast<std::uint64_t>(f)));
      const int n = rng_occ.uniform_int(cfg.occluders_count.lo, cfg.occluders_count.hi);
      frame.occluders = sample_occluders(n, rng_occ, cfg);
    }
    scene.frames.push_back(std::move(frame));
  }
  return scene;
}

}  // namespace sidar
