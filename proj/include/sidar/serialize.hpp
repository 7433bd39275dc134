#pragma once

// JSON serialization of scene records, configs, homography tables and the
// dataset manifest. Keys are emitted in a fixed order and doubles use the
// shortest round-trip decimal encoding, so regenerating a dataset from the
// same seed reproduces every text artifact byte for byte.

#include <json.hpp>

#include <array>
#include <fstream>
#include <string>
#include <vector>

#include "sidar/error.hpp"
#include "sidar/geometry.hpp"
#include "sidar/scene.hpp"

namespace sidar {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "sidar-forge/1";
inline constexpr const char* kGeneratorVersion = "0.1.0";

// ---- enum <-> string ----

inline std::string to_string(SceneMode m) {
  return m == SceneMode::Aligned ? "aligned" : "misaligned";
}
inline std::string to_string(LightKind k) {
  switch (k) {
    case LightKind::Spot: return "spot";
    case LightKind::Point: return "point";
    case LightKind::Area: return "area";
  }
  return "point";
}
inline std::string to_string(GeometryKind k) {
  switch (k) {
    case GeometryKind::Sphere: return "sphere";
    case GeometryKind::Cube: return "cube";
    case GeometryKind::Cylinder: return "cylinder";
    case GeometryKind::Cone: return "cone";
    case GeometryKind::Torus: return "torus";
  }
  return "sphere";
}
inline std::string to_string(MaterialKind k) {
  switch (k) {
    case MaterialKind::Diffuse: return "diffuse";
    case MaterialKind::Glossy: return "glossy";
    case MaterialKind::Metallic: return "metallic";
    case MaterialKind::Refraction: return "refraction";
    case MaterialKind::Transparent: return "transparent";
  }
  return "diffuse";
}

namespace ser_detail {

template <typename Enum>
Enum enum_from_string(const std::string& s);

template <>
inline SceneMode enum_from_string<SceneMode>(const std::string& s) {
  if (s == "aligned") return SceneMode::Aligned;
  if (s == "misaligned") return SceneMode::Misaligned;
  raise(errc::corrupt_manifest, "unknown scene mode: " + s);
}
template <>
inline LightKind enum_from_string<LightKind>(const std::string& s) {
  if (s == "spot") return LightKind::Spot;
  if (s == "point") return LightKind::Point;
  if (s == "area") return LightKind::Area;
  raise(errc::corrupt_manifest, "unknown light kind: " + s);
}
template <>
inline GeometryKind enum_from_string<GeometryKind>(const std::string& s) {
  if (s == "sphere") return GeometryKind::Sphere;
  if (s == "cube") return GeometryKind::Cube;
  if (s == "cylinder") return GeometryKind::Cylinder;
  if (s == "cone") return GeometryKind::Cone;
  if (s == "torus") return GeometryKind::Torus;
  raise(errc::corrupt_manifest, "unknown geometry kind: " + s);
}
template <>
inline MaterialKind enum_from_string<MaterialKind>(const std::string& s) {
  if (s == "diffuse") return MaterialKind::Diffuse;
  if (s == "glossy") return MaterialKind::Glossy;
  if (s == "metallic") return MaterialKind::Metallic;
  if (s == "refraction") return MaterialKind::Refraction;
  if (s == "transparent") return MaterialKind::Transparent;
  raise(errc::corrupt_manifest, "unknown material kind: " + s);
}

inline Json vec3_json(const Vec3& v) { return Json::array({v.x(), v.y(), v.z()}); }
inline Vec3 vec3_from(const Json& j) { return Vec3(j.at(0), j.at(1), j.at(2)); }
inline Json vec2_json(const Vec2& v) { return Json::array({v.x(), v.y()}); }
inline Vec2 vec2_from(const Json& j) { return Vec2(j.at(0), j.at(1)); }

inline Json mat3_json(const Mat3& m) {
  Json a = Json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(m(r, c));
  return a;
}
inline Mat3 mat3_from(const Json& j) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = j.at(static_cast<std::size_t>(3 * r + c));
  return m;
}

}  // namespace ser_detail

// ---- cameras ----

inline Json to_json(const Camera& cam) {
  Json j;
  j["sensor_width"] = cam.intrinsics.sensor_width;
  j["sensor_height"] = cam.intrinsics.sensor_height;
  j["principal_distance"] = cam.intrinsics.principal_distance;
  j["resolution"] = Json::array({cam.intrinsics.res_x, cam.intrinsics.res_y});
  j["principal_point"] = ser_detail::vec2_json(cam.intrinsics.principal_point);
  j["rotation"] = ser_detail::mat3_json(cam.pose.rotation);
  j["translation"] = ser_detail::vec3_json(cam.pose.translation);
  return j;
}

inline Camera camera_from_json(const Json& j) {
  Camera cam;
  cam.intrinsics.sensor_width = j.at("sensor_width");
  cam.intrinsics.sensor_height = j.at("sensor_height");
  cam.intrinsics.principal_distance = j.at("principal_distance");
  cam.intrinsics.res_x = j.at("resolution").at(0);
  cam.intrinsics.res_y = j.at("resolution").at(1);
  cam.intrinsics.principal_point = ser_detail::vec2_from(j.at("principal_point"));
  cam.pose.rotation = ser_detail::mat3_from(j.at("rotation"));
  cam.pose.translation = ser_detail::vec3_from(j.at("translation"));
  return cam;
}

// ---- scene pieces ----

inline Json to_json(const LightSpec& l) {
  Json j;
  j["kind"] = to_string(l.kind);
  j["position"] = ser_detail::vec3_json(l.position);
  j["intensity"] = l.intensity;
  j["color_hsv"] = ser_detail::vec3_json(l.color_hsv);
  j["color"] = ser_detail::vec3_json(l.color);
  j["orientation"] = ser_detail::mat3_json(l.orientation);
  j["spot_angle_deg"] = l.spot_angle_deg;
  j["area_size"] = l.area_size;
  return j;
}

inline LightSpec light_from_json(const Json& j) {
  LightSpec l;
  l.kind = ser_detail::enum_from_string<LightKind>(j.at("kind"));
  l.position = ser_detail::vec3_from(j.at("position"));
  l.intensity = j.at("intensity");
  l.color_hsv = ser_detail::vec3_from(j.at("color_hsv"));
  l.color = ser_detail::vec3_from(j.at("color"));
  l.orientation = ser_detail::mat3_from(j.at("orientation"));
  l.spot_angle_deg = j.at("spot_angle_deg");
  l.area_size = j.at("area_size");
  return l;
}

inline Json to_json(const MaterialSpec& m) {
  Json j;
  j["kind"] = to_string(m.kind);
  j["base_color"] = ser_detail::vec3_json(m.base_color);
  j["roughness"] = m.roughness;
  j["index_of_refraction"] = m.index_of_refraction;
  j["transmission"] = m.transmission;
  return j;
}

inline MaterialSpec material_from_json(const Json& j) {
  MaterialSpec m;
  m.kind = ser_detail::enum_from_string<MaterialKind>(j.at("kind"));
  m.base_color = ser_detail::vec3_from(j.at("base_color"));
  m.roughness = j.at("roughness");
  m.index_of_refraction = j.at("index_of_refraction");
  m.transmission = j.at("transmission");
  return m;
}

inline Json to_json(const OccluderSpec& o) {
  Json j;
  j["geometry"] = to_string(o.geometry);
  j["position"] = ser_detail::vec3_json(o.position);
  j["rotation_euler"] = ser_detail::vec3_json(o.rotation_euler);
  j["scale"] = ser_detail::vec3_json(o.scale);
  j["material"] = to_json(o.material);
  return j;
}

inline OccluderSpec occluder_from_json(const Json& j) {
  OccluderSpec o;
  o.geometry = ser_detail::enum_from_string<GeometryKind>(j.at("geometry"));
  o.position = ser_detail::vec3_from(j.at("position"));
  o.rotation_euler = ser_detail::vec3_from(j.at("rotation_euler"));
  o.scale = ser_detail::vec3_from(j.at("scale"));
  o.material = material_from_json(j.at("material"));
  return o;
}

inline Json to_json(const SceneRecord& s) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["seed"] = s.seed;
  j["mode"] = to_string(s.mode);
  j["plane"] = Json{{"width", s.plane.width}, {"height", s.plane.height}};
  j["texture"] = Json{{"path", s.texture.path},
                      {"width", s.texture.width},
                      {"height", s.texture.height},
                      {"content_hash", s.texture.content_hash}};
  j["render"] = Json{{"spp", s.render.spp},
                     {"max_bounces", s.render.max_bounces},
                     {"resolution", Json::array({s.render.res_x, s.render.res_y})},
                     {"ambient", s.render.ambient},
                     {"view_ambient", s.render.view_ambient}};
  j["label_camera"] = to_json(s.label_camera);
  Json frames = Json::array();
  for (const auto& f : s.frames) {
    Json jf;
    jf["camera"] = to_json(f.camera);
    Json lights = Json::array();
    for (const auto& l : f.lights) lights.push_back(to_json(l));
    jf["lights"] = std::move(lights);
    Json occluders = Json::array();
    for (const auto& o : f.occluders) occluders.push_back(to_json(o));
    jf["occluders"] = std::move(occluders);
    frames.push_back(std::move(jf));
  }
  j["frames"] = std::move(frames);
  return j;
}

inline SceneRecord scene_from_json(const Json& j) {
  SceneRecord s;
  if (j.at("schema") != kSchemaVersion)
    raise(errc::corrupt_manifest, "unsupported schema: " + j.at("schema").get<std::string>());
  s.seed = j.at("seed");
  s.mode = ser_detail::enum_from_string<SceneMode>(j.at("mode"));
  s.plane.width = j.at("plane").at("width");
  s.plane.height = j.at("plane").at("height");
  s.texture.path = j.at("texture").at("path");
  s.texture.width = j.at("texture").at("width");
  s.texture.height = j.at("texture").at("height");
  s.texture.content_hash = j.at("texture").at("content_hash");
  s.render.spp = j.at("render").at("spp");
  s.render.max_bounces = j.at("render").at("max_bounces");
  s.render.res_x = j.at("render").at("resolution").at(0);
  s.render.res_y = j.at("render").at("resolution").at(1);
  s.render.ambient = j.at("render").at("ambient");
  s.render.view_ambient = j.at("render").at("view_ambient");
  s.label_camera = camera_from_json(j.at("label_camera"));
  for (const auto& jf : j.at("frames")) {
    FrameSpec f;
    f.camera = camera_from_json(jf.at("camera"));
    for (const auto& jl : jf.at("lights")) f.lights.push_back(light_from_json(jl));
    for (const auto& jo : jf.at("occluders")) f.occluders.push_back(occluder_from_json(jo));
    s.frames.push_back(std::move(f));
  }
  return s;
}

// ---- config ----

inline Json to_json(const SceneConfig& c) {
  Json j;
  j["seed"] = c.seed;
  j["mode"] = to_string(c.mode);
  j["frames"] = c.frames;
  j["resolution"] = Json::array({c.res_x, c.res_y});
  j["spp"] = c.spp;
  j["max_bounces"] = c.max_bounces;
  j["ambient"] = c.ambient;
  j["view_ambient"] = c.view_ambient;
  j["randomize_lights"] = c.randomize_lights;
  j["lights_count"] = Json::array({c.lights_count.lo, c.lights_count.hi});
  j["light_intensity"] = Json::array({c.light_intensity.lo, c.light_intensity.hi});
  j["light_x"] = Json::array({c.light_x.lo, c.light_x.hi});
  j["light_y"] = Json::array({c.light_y.lo, c.light_y.hi});
  j["light_z"] = Json::array({c.light_z.lo, c.light_z.hi});
  j["saturation_eps"] = c.saturation_eps;
  j["spot_angle_deg"] = c.spot_angle_deg;
  j["area_light_size"] = c.area_light_size;
  j["occluders_count"] = Json::array({c.occluders_count.lo, c.occluders_count.hi});
  j["occluder_x"] = Json::array({c.occluder_x.lo, c.occluder_x.hi});
  j["occluder_y"] = Json::array({c.occluder_y.lo, c.occluder_y.hi});
  j["occluder_z"] = Json::array({c.occluder_z.lo, c.occluder_z.hi});
  j["occluder_scale"] = Json::array({c.occluder_scale.lo, c.occluder_scale.hi});
  j["camera_distance"] = Json::array({c.camera_distance.lo, c.camera_distance.hi});
  j["camera_x"] = Json::array({c.camera_x.lo, c.camera_x.hi});
  j["camera_y"] = Json::array({c.camera_y.lo, c.camera_y.hi});
  j["fov_deg"] = Json::array({c.fov_deg.lo, c.fov_deg.hi});
  j["aligned_distance"] = c.aligned_distance;
  j["sensor_width"] = c.sensor_width;
  j["plane_max_dim"] = c.plane_max_dim;
  return j;
}

inline SceneConfig config_from_json(const Json& j) {
  SceneConfig c;
  auto range = [&](const char* key, Range def) {
    if (!j.contains(key)) return def;
    return Range{j.at(key).at(0), j.at(key).at(1)};
  };
  auto irange = [&](const char* key, IntRange def) {
    if (!j.contains(key)) return def;
    return IntRange{j.at(key).at(0), j.at(key).at(1)};
  };
  auto get = [&](const char* key, auto def) {
    using T = decltype(def);
    return j.contains(key) ? j.at(key).get<T>() : def;
  };
  c.seed = get("seed", c.seed);
  if (j.contains("mode")) c.mode = ser_detail::enum_from_string<SceneMode>(j.at("mode"));
  c.frames = get("frames", c.frames);
  if (j.contains("resolution")) {
    c.res_x = j.at("resolution").at(0);
    c.res_y = j.at("resolution").at(1);
  }
  c.spp = get("spp", c.spp);
  c.max_bounces = get("max_bounces", c.max_bounces);
  c.ambient = get("ambient", c.ambient);
  c.view_ambient = get("view_ambient", c.view_ambient);
  c.randomize_lights = get("randomize_lights", c.randomize_lights);
  c.lights_count = irange("lights_count", c.lights_count);
  c.light_intensity = range("light_intensity", c.light_intensity);
  c.light_x = range("light_x", c.light_x);
  c.light_y = range("light_y", c.light_y);
  c.light_z = range("light_z", c.light_z);
  c.saturation_eps = get("saturation_eps", c.saturation_eps);
  c.spot_angle_deg = get("spot_angle_deg", c.spot_angle_deg);
  c.area_light_size = get("area_light_size", c.area_light_size);
  c.occluders_count = irange("occluders_count", c.occluders_count);
  c.occluder_x = range("occluder_x", c.occluder_x);
  c.occluder_y = range("occluder_y", c.occluder_y);
  c.occluder_z = range("occluder_z", c.occluder_z);
  c.occluder_scale = range("occluder_scale", c.occluder_scale);
  c.camera_distance = range("camera_distance", c.camera_distance);
  c.camera_x = range("camera_x", c.camera_x);
  c.camera_y = range("camera_y", c.camera_y);
  c.fov_deg = range("fov_deg", c.fov_deg);
  c.aligned_distance = get("aligned_distance", c.aligned_distance);
  c.sensor_width = get("sensor_width", c.sensor_width);
  c.plane_max_dim = get("plane_max_dim", c.plane_max_dim);
  return c;
}

// ---- homography table ----

struct PairHomography {
  int i = 0;  // source frame (0 = label)
  int j = 0;  // target frame
  Mat3 h = Mat3::Identity();
};

inline Json to_json(const std::vector<PairHomography>& pairs, int frame_count) {
  Json j;
  j["schema"] = kSchemaVersion;
  j["frames"] = frame_count;  // including the label as frame 0
  Json arr = Json::array();
  for (const auto& p : pairs) {
    Json e;
    e["i"] = p.i;
    e["j"] = p.j;
    e["h"] = ser_detail::mat3_json(p.h);
    arr.push_back(std::move(e));
  }
  j["pairs"] = std::move(arr);
  return j;
}

inline std::vector<PairHomography> homographies_from_json(const Json& j, int* frame_count) {
  if (j.at("schema") != kSchemaVersion)
    raise(errc::corrupt_manifest, "unsupported homography schema");
  if (frame_count) *frame_count = j.at("frames");
  std::vector<PairHomography> pairs;
  for (const auto& e : j.at("pairs")) {
    PairHomography p;
    p.i = e.at("i");
    p.j = e.at("j");
    p.h = ser_detail::mat3_from(e.at("h"));
    pairs.push_back(p);
  }
  return pairs;
}

// ---- file helpers ----

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(errc::io_failure, "cannot write " + path.string());
  out << j.dump(2) << '\n';
  if (!out) raise(errc::io_failure, "write failed: " + path.string());
}

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::missing_artifact, "missing file: " + path.string());
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    raise(errc::corrupt_manifest, path.string() + ": " + e.what());
  }
}

}  // namespace sidar
