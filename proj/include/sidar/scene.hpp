#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "sidar/error.hpp"
#include "sidar/geometry.hpp"
#include "sidar/image.hpp"

namespace sidar {

enum class LightKind { Spot, Point, Area };
enum class GeometryKind { Sphere, Cube, Cylinder, Cone, Torus };
enum class MaterialKind { Diffuse, Glossy, Metallic, Refraction, Transparent };
enum class SceneMode { Aligned, Misaligned };

inline constexpr int kLightKindCount = 3;
inline constexpr int kGeometryKindCount = 5;
inline constexpr int kMaterialKindCount = 5;

struct MaterialSpec {
  MaterialKind kind = MaterialKind::Diffuse;
  Vec3 base_color = Vec3(0.8, 0.8, 0.8);  // linear RGB in [0,1]
  double roughness = 0.5;                 // [0,1], glossy lobe
  double index_of_refraction = 1.45;      // [1, 2.5], refraction lobe
  double transmission = 0.8;              // [0,1], transparent lobe
};

struct LightSpec {
  LightKind kind = LightKind::Point;
  Vec3 position = Vec3(0, 0, 2);
  double intensity = 10.0;                 // radiant power, arbitrary units
  Vec3 color_hsv = Vec3(0, 0, 1);          // sampled (H, S, V); V is fixed to 1
  Vec3 color = Vec3(1, 1, 1);              // linear RGB derived from color_hsv
  Mat3 orientation = Mat3::Identity();     // takes (0,0,-1) onto the emission axis
  double spot_angle_deg = 45.0;            // full cone angle
  double area_size = 0.5;                  // square side, area lights

  Vec3 emission_axis() const { return orientation * Vec3(0, 0, -1); }
};

struct OccluderSpec {
  GeometryKind geometry = GeometryKind::Sphere;
  Vec3 position = Vec3(0, 0, 0.75);
  Vec3 rotation_euler = Vec3(0, 0, 0);  // (a_x, a_y, a_z) in [0, 2pi); applied x, then y, then z
  Vec3 scale = Vec3(0.2, 0.2, 0.2);
  MaterialSpec material;
};

struct RenderSettings {
  int spp = 64;
  int max_bounces = 6;
  int res_x = 256;
  int res_y = 256;
  double ambient = 1.0;       // environment radiance for label / unlit frames
  double view_ambient = 0.1;  // environment radiance when sampled lights are present
};

struct TextureRef {
  std::string path;  // relative to the corpus root
  int width = 0;
  int height = 0;
  std::string content_hash;
};

// One rendered frame: its camera plus the distortion sources sampled for it.
struct FrameSpec {
  Camera camera;
  std::vector<LightSpec> lights;
  std::vector<OccluderSpec> occluders;
};

// Full serialized scene; a pure function of (seed, config, texture size).
struct SceneRecord {
  std::uint64_t seed = 0;
  SceneMode mode = SceneMode::Misaligned;
  PlaneSpec plane;
  TextureRef texture;
  RenderSettings render;
  Camera label_camera;
  std::vector<FrameSpec> frames;

  // Pixel data backing TextureRef; owned elsewhere, never serialized.
  std::shared_ptr<const Image> texture_image;
};

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct IntRange {
  int lo = 0;
  int hi = 0;
};

struct SceneConfig {
  std::uint64_t seed = 0;
  SceneMode mode = SceneMode::Misaligned;
  int frames = 4;
  int res_x = 256;
  int res_y = 256;
  int spp = 64;
  int max_bounces = 6;
  double ambient = 1.0;
  double view_ambient = 0.1;

  bool randomize_lights = true;
  IntRange lights_count{1, 3};
  Range light_intensity{5.0, 50.0};
  Range light_x{-2.0, 2.0};
  Range light_y{-2.0, 2.0};
  Range light_z{1.5, 3.5};
  double saturation_eps = 0.2;
  double spot_angle_deg = 45.0;
  double area_light_size = 0.5;

  IntRange occluders_count{1, 6};
  Range occluder_x{-1.0, 1.0};
  Range occluder_y{-1.0, 1.0};
  Range occluder_z{0.3, 1.2};
  Range occluder_scale{0.05, 0.4};

  Range camera_distance{1.5, 4.0};
  Range camera_x{-1.5, 1.5};
  Range camera_y{-1.5, 1.5};
  Range fov_deg{30.0, 70.0};
  double aligned_distance = 2.0;
  double sensor_width = 1.0;
  double plane_max_dim = 2.0;

  void validate() const {
    auto nonempty = [](const Range& r) { return r.hi >= r.lo; };
    if (frames < 1) raise(errc::invalid_config, "frames must be >= 1");
    if (res_x <= 0 || res_y <= 0) raise(errc::invalid_config, "resolution must be positive");
    if (spp < 1 || max_bounces < 1) raise(errc::invalid_config, "render budget must be >= 1");
    if (saturation_eps < 0.0 || saturation_eps > 1.0)
      raise(errc::invalid_config, "saturation_eps must be in [0,1]");
    if (!(fov_deg.lo > 10.0 && fov_deg.hi < 120.0 && nonempty(fov_deg)))
      raise(errc::invalid_config, "fov range must lie inside (10, 120) degrees");
    if (lights_count.lo < 0 || lights_count.hi < lights_count.lo)
      raise(errc::invalid_config, "lights count range is empty");
    if (occluders_count.lo < 0 || occluders_count.hi < occluders_count.lo)
      raise(errc::invalid_config, "occluders count range is empty");
    for (const Range* r : {&light_intensity, &light_x, &light_y, &light_z, &occluder_x,
                           &occluder_y, &occluder_z, &occluder_scale, &camera_distance,
                           &camera_x, &camera_y})
      if (!nonempty(*r)) raise(errc::invalid_config, "a sampling range is empty");
    if (light_z.lo <= 0.0) raise(errc::invalid_config, "lights must lie on the camera side, z > 0");
    if (light_intensity.lo < 0.0) raise(errc::invalid_config, "light intensity must be >= 0");
    if (occluder_scale.lo <= 0.0) raise(errc::invalid_config, "occluder scale must be positive");
    if (camera_distance.lo <= 0.0) raise(errc::invalid_config, "camera distance must be positive");
    if (!(occluder_z.lo > 0.0 && occluder_z.hi < camera_distance.lo))
      raise(errc::invalid_config,
            "occluder slab must lie strictly between the plane and the nearest camera");
    if (aligned_distance <= 0.0 || sensor_width <= 0.0 || plane_max_dim <= 0.0)
      raise(errc::invalid_config, "aligned camera parameters must be positive");
    if (ambient < 0.0 || view_ambient < 0.0)
      raise(errc::invalid_config, "ambient intensities must be >= 0");
  }
};

}  // namespace sidar
