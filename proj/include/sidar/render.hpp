#pragma once

// Unidirectional path tracer with next-event estimation. Renders three
// passes per scene: path-traced views, the ambient artifact-free label, and
// binary occlusion masks from primary visibility.
//
// Determinism contract: every pixel sample draws from a PCG32 stream keyed
// by (scene seed, pass, pixel index, sample index); pixels are written by
// disjoint row blocks, so the output is bit-identical for any thread count.

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <thread>
#include <vector>

#include "sidar/geometry.hpp"
#include "sidar/image.hpp"
#include "sidar/intersect.hpp"
#include "sidar/rng.hpp"
#include "sidar/sampling.hpp"
#include "sidar/scene.hpp"

namespace sidar {

struct RenderBudget {
  int samples_per_pixel = 64;
  int max_bounces = 6;
};

namespace render_detail {

constexpr double kRayEps = 1e-6;
constexpr int kMissObject = -2;
constexpr int kPlaneObject = -1;

struct LinearTexture {
  int width = 0;
  int height = 0;
  std::vector<float> rgb;  // linear, 3 channels

  explicit LinearTexture(const Image& img) : width(img.width), height(img.height) {
    rgb.resize(static_cast<std::size_t>(width) * height * 3);
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x)
        for (int c = 0; c < 3; ++c) {
          const std::uint8_t v = img.channels == 3 ? img.at(x, y, c) : img.at(x, y, 0);
          rgb[(static_cast<std::size_t>(y) * width + x) * 3 + c] =
              static_cast<float>(srgb_u8_to_linear(v));
        }
  }

  Vec3 texel(int x, int y) const {
    x = std::clamp(x, 0, width - 1);
    y = std::clamp(y, 0, height - 1);
    const std::size_t i = (static_cast<std::size_t>(y) * width + x) * 3;
    return Vec3(rgb[i], rgb[i + 1], rgb[i + 2]);
  }

  // Bilinear sample at continuous coordinates in [0,W]x[0,H].
  Vec3 sample(double u, double v) const {
    const double gx = u - 0.5, gy = v - 0.5;
    const int x0 = static_cast<int>(std::floor(gx));
    const int y0 = static_cast<int>(std::floor(gy));
    const double fx = gx - x0, fy = gy - y0;
    const Vec3 a = texel(x0, y0), b = texel(x0 + 1, y0);
    const Vec3 c = texel(x0, y0 + 1), d = texel(x0 + 1, y0 + 1);
    return (a * (1 - fx) + b * fx) * (1 - fy) + (c * (1 - fx) + d * fx) * fy;
  }
};

struct FrameContext {
  const SceneRecord* scene = nullptr;
  const FrameSpec* frame = nullptr;
  const LinearTexture* texture = nullptr;
  std::vector<OccluderGeom> geoms;
  double ambient = 0.0;
};

struct SurfaceHit {
  double t = std::numeric_limits<double>::infinity();
  int object = kMissObject;  // -1 plane, >= 0 occluder index
  Vec3 point = Vec3::Zero();
  Vec3 normal = Vec3::Zero();  // geometric, outward
};

inline bool plane_hit(const PlaneSpec& plane, const Vec3& ro, const Vec3& rd, double tmin,
                      double tmax, double* t_out, Vec3* p_out) {
  if (std::abs(rd.z()) < 1e-14) return false;
  const double t = -ro.z() / rd.z();
  if (t <= tmin || t >= tmax) return false;
  const Vec3 p = ro + t * rd;
  if (std::abs(p.x()) > plane.width / 2.0 || std::abs(p.y()) > plane.height / 2.0) return false;
  *t_out = t;
  *p_out = p;
  return true;
}

inline SurfaceHit intersect_scene(const FrameContext& ctx, const Vec3& ro, const Vec3& rd,
                                  double tmin = kRayEps,
                                  double tmax = std::numeric_limits<double>::infinity()) {
  SurfaceHit hit;
  hit.t = tmax;
  double tp;
  Vec3 pp;
  if (plane_hit(ctx.scene->plane, ro, rd, tmin, hit.t, &tp, &pp)) {
    hit.t = tp;
    hit.object = kPlaneObject;
    hit.point = pp;
    hit.normal = Vec3(0, 0, 1);
  }
  double ts[4];
  for (std::size_t k = 0; k < ctx.geoms.size(); ++k) {
    const int n = ctx.geoms[k].all_hits(ro, rd, ts);
    for (int i = 0; i < n; ++i) {
      if (ts[i] > tmin && ts[i] < hit.t) {
        hit.t = ts[i];
        hit.object = static_cast<int>(k);
      }
    }
  }
  if (hit.object >= 0) {
    hit.point = ro + hit.t * rd;
    hit.normal = ctx.geoms[static_cast<std::size_t>(hit.object)].world_normal(hit.point);
  } else if (hit.object == kMissObject) {
    hit.t = std::numeric_limits<double>::infinity();
  }
  return hit;
}

// RGB transmittance along the segment p -> q. The plane and solid materials
// block; transparent and refractive occluders tint per surface crossing.
inline Vec3 transmittance(const FrameContext& ctx, const Vec3& p, const Vec3& q) {
  const Vec3 d = q - p;
  const double dist = d.norm();
  const double tmin = kRayEps;
  const double tmax = 1.0 - kRayEps;  // parametrize by the unnormalized segment

  double tp;
  Vec3 pp;
  if (plane_hit(ctx.scene->plane, p, d, tmin, tmax, &tp, &pp)) return Vec3::Zero();
  (void)dist;

  Vec3 atten = Vec3::Ones();
  double ts[4];
  for (const auto& geom : ctx.geoms) {
    const int n = geom.all_hits(p, d, ts);
    for (int i = 0; i < n; ++i) {
      if (ts[i] <= tmin || ts[i] >= tmax) continue;
      const MaterialSpec& m = geom.spec().material;
      switch (m.kind) {
        case MaterialKind::Transparent:
          atten = atten.cwiseProduct(m.transmission * m.base_color);
          break;
        case MaterialKind::Refraction: {
          const double f0 = std::pow((m.index_of_refraction - 1.0) /
                                     (m.index_of_refraction + 1.0), 2.0);
          atten = atten.cwiseProduct((1.0 - f0) * m.base_color);
          break;
        }
        default:
          return Vec3::Zero();
      }
    }
  }
  return atten;
}

inline void build_onb(const Vec3& n, Vec3* u, Vec3* v) {
  const double sign = std::copysign(1.0, n.z());
  const double a = -1.0 / (sign + n.z());
  const double b = n.x() * n.y() * a;
  *u = Vec3(1.0 + sign * n.x() * n.x() * a, sign * b, -sign * n.x());
  *v = Vec3(b, sign + n.y() * n.y() * a, -n.y());
}

inline Vec3 cosine_sample(const Vec3& n, Pcg32& rng) {
  const double r2 = rng.next_double();
  const double phi = 2.0 * std::numbers::pi * rng.next_double();
  const double rad = std::sqrt(r2);
  Vec3 u, v;
  build_onb(n, &u, &v);
  return (u * (std::cos(phi) * rad) + v * (std::sin(phi) * rad) +
          n * std::sqrt(std::max(0.0, 1.0 - r2))).normalized();
}

inline Vec3 reflect(const Vec3& d, const Vec3& n) { return d - 2.0 * d.dot(n) * n; }

// GGX microfacet pieces (alpha = roughness^2).
inline double ggx_d(double cos_h, double alpha) {
  const double a2 = alpha * alpha;
  const double t = cos_h * cos_h * (a2 - 1.0) + 1.0;
  return a2 / (std::numbers::pi * t * t);
}

inline double ggx_g1(double cos_v, double alpha) {
  const double a2 = alpha * alpha;
  return 2.0 * cos_v / (cos_v + std::sqrt(a2 + (1.0 - a2) * cos_v * cos_v));
}

inline Vec3 schlick(const Vec3& f0, double cos_i) {
  return f0 + (Vec3::Ones() - f0) * std::pow(1.0 - cos_i, 5.0);
}

inline double spot_falloff(const LightSpec& light, const Vec3& dir_light_to_p) {
  const double cos_g = light.emission_axis().dot(dir_light_to_p);
  const double half = light.spot_angle_deg * std::numbers::pi / 360.0;
  const double cos_outer = std::cos(half);
  const double cos_inner = std::cos(half * 0.9);
  if (cos_g <= cos_outer) return 0.0;
  if (cos_g >= cos_inner) return 1.0;
  const double t = (cos_g - cos_outer) / (cos_inner - cos_outer);
  return t * t * (3.0 - 2.0 * t);
}

// Next-event estimation: one uniformly chosen light, BSDF already reduced to
// a diffuse or GGX evaluation by the caller.
struct BsdfSample {
  Vec3 diffuse_albedo = Vec3::Zero();
  bool glossy = false;
  Vec3 glossy_tint = Vec3::Zero();
  double alpha = 1.0;
};

inline Vec3 eval_bsdf(const BsdfSample& b, const Vec3& n, const Vec3& wo, const Vec3& wi) {
  Vec3 f = b.diffuse_albedo / std::numbers::pi;
  if (b.glossy) {
    const double cos_i = n.dot(wi);
    const double cos_o = n.dot(wo);
    if (cos_i > 0.0 && cos_o > 0.0) {
      const Vec3 h = (wi + wo).normalized();
      const double d = ggx_d(n.dot(h), b.alpha);
      const double g = ggx_g1(cos_i, b.alpha) * ggx_g1(cos_o, b.alpha);
      const Vec3 fr = schlick(b.glossy_tint, std::max(0.0, h.dot(wi)));
      f += fr * (d * g / std::max(1e-9, 4.0 * cos_i * cos_o));
    }
  }
  return f;
}

inline Vec3 direct_light(const FrameContext& ctx, const Vec3& p, const Vec3& n, const Vec3& wo,
                         const BsdfSample& bsdf, Pcg32& rng) {
  const auto& lights = ctx.frame->lights;
  if (lights.empty()) return Vec3::Zero();
  const auto idx = static_cast<std::size_t>(
      rng.uniform_int(0, static_cast<int>(lights.size()) - 1));
  const LightSpec& light = lights[idx];
  const double pick_weight = static_cast<double>(lights.size());

  Vec3 sample_point = light.position;
  double emit_cos = 1.0;
  double emit_scale = light.intensity / (4.0 * std::numbers::pi);  // point-light default
  if (light.kind == LightKind::Area) {
    const double a = light.area_size;
    const Vec3 local(rng.uniform(-a / 2.0, a / 2.0), rng.uniform(-a / 2.0, a / 2.0), 0.0);
    sample_point = light.position + light.orientation * local;
    const double area = a * a;
    // One-sided Lambertian emitter: radiance I / (pi A), area-sampled.
    emit_scale = light.intensity / (std::numbers::pi * area) * area;  // L_e * A
    const Vec3 to_p = (p - sample_point).normalized();
    emit_cos = std::max(0.0, light.emission_axis().dot(to_p));
    if (emit_cos <= 0.0) return Vec3::Zero();
  }

  const Vec3 to_light = sample_point - p;
  const double r2 = to_light.squaredNorm();
  if (r2 < 1e-12) return Vec3::Zero();
  const Vec3 wi = to_light / std::sqrt(r2);
  const double cos_surf = n.dot(wi);
  if (cos_surf <= 0.0) return Vec3::Zero();

  double falloff = 1.0;
  if (light.kind == LightKind::Spot) falloff = spot_falloff(light, -wi);
  if (falloff <= 0.0) return Vec3::Zero();

  const Vec3 atten = transmittance(ctx, p + n * kRayEps, sample_point);
  if (atten.isZero(0.0)) return Vec3::Zero();

  const Vec3 f = eval_bsdf(bsdf, n, wo, wi);
  const double geom = cos_surf * emit_cos / r2;
  return pick_weight * falloff * emit_scale * geom *
         f.cwiseProduct(light.color).cwiseProduct(atten);
}

// Radiance along one camera ray.
inline Vec3 trace_path(const FrameContext& ctx, Vec3 ro, Vec3 rd, int max_bounces, Pcg32& rng) {
  Vec3 radiance = Vec3::Zero();
  Vec3 throughput = Vec3::Ones();
  const Vec3 ambient = Vec3::Ones() * ctx.ambient;

  for (int bounce = 0; bounce <= max_bounces; ++bounce) {
    const SurfaceHit hit = intersect_scene(ctx, ro, rd);
    if (hit.object == kMissObject) {
      radiance += throughput.cwiseProduct(ambient);
      break;
    }

    if (hit.object == kPlaneObject) {
      if (rd.z() > 0.0) break;  // back side of the painting absorbs
      const PlaneSpec& pl = ctx.scene->plane;
      const double u = (hit.point.x() + pl.width / 2.0) / pl.width * ctx.texture->width;
      const double v = (pl.height / 2.0 - hit.point.y()) / pl.height * ctx.texture->height;
      const Vec3 albedo = ctx.texture->sample(u, v);
      BsdfSample bsdf;
      bsdf.diffuse_albedo = albedo;
      radiance += throughput.cwiseProduct(direct_light(ctx, hit.point, hit.normal, -rd, bsdf, rng));
      throughput = throughput.cwiseProduct(albedo);
      ro = hit.point + hit.normal * kRayEps;
      rd = cosine_sample(hit.normal, rng);
      continue;
    }

    const MaterialSpec& m = ctx.geoms[static_cast<std::size_t>(hit.object)].spec().material;
    const Vec3 n_geo = hit.normal;
    const Vec3 n = n_geo.dot(rd) < 0.0 ? n_geo : -n_geo;  // toward the incoming side

    switch (m.kind) {
      case MaterialKind::Diffuse: {
        BsdfSample bsdf;
        bsdf.diffuse_albedo = m.base_color;
        radiance += throughput.cwiseProduct(direct_light(ctx, hit.point, n, -rd, bsdf, rng));
        throughput = throughput.cwiseProduct(m.base_color);
        ro = hit.point + n * kRayEps;
        rd = cosine_sample(n, rng);
        break;
      }
      case MaterialKind::Glossy: {
        const double alpha = std::clamp(m.roughness * m.roughness, 1e-3, 1.0);
        BsdfSample bsdf;
        bsdf.glossy = true;
        bsdf.glossy_tint = m.base_color;
        bsdf.alpha = alpha;
        const Vec3 wo = -rd;
        radiance += throughput.cwiseProduct(direct_light(ctx, hit.point, n, wo, bsdf, rng));
        // Sample the GGX half-vector distribution.
        const double u1 = rng.next_double();
        const double phi = 2.0 * std::numbers::pi * rng.next_double();
        const double a2 = alpha * alpha;
        const double cos_h = std::sqrt(std::clamp((1.0 - u1) / (1.0 + (a2 - 1.0) * u1), 0.0, 1.0));
        const double sin_h = std::sqrt(std::max(0.0, 1.0 - cos_h * cos_h));
        Vec3 tu, tv;
        build_onb(n, &tu, &tv);
        const Vec3 h = (tu * (std::cos(phi) * sin_h) + tv * (std::sin(phi) * sin_h) + n * cos_h)
                           .normalized();
        const Vec3 wi = reflect(rd, h);
        const double cos_i = n.dot(wi);
        const double cos_o = n.dot(wo);
        const double oh = wo.dot(h);
        if (cos_i <= 0.0 || cos_o <= 0.0 || oh <= 0.0) return radiance;
        // f * cos_i / pdf with pdf = D cos_h / (4 oh).
        const double g = ggx_g1(cos_i, alpha) * ggx_g1(cos_o, alpha);
        const Vec3 fr = schlick(m.base_color, oh);
        throughput = throughput.cwiseProduct(fr * (g * oh / std::max(1e-9, cos_o * cos_h)));
        ro = hit.point + n * kRayEps;
        rd = wi;
        break;
      }
      case MaterialKind::Metallic: {
        const Vec3 wi = reflect(rd, n);
        throughput = throughput.cwiseProduct(m.base_color);
        ro = hit.point + n * kRayEps;
        rd = wi;
        break;
      }
      case MaterialKind::Refraction: {
        const bool entering = n_geo.dot(rd) < 0.0;
        const double eta = entering ? 1.0 / m.index_of_refraction : m.index_of_refraction;
        const double cos_i = -n.dot(rd);
        const double f0s = std::pow((m.index_of_refraction - 1.0) /
                                    (m.index_of_refraction + 1.0), 2.0);
        const double sin2_t = eta * eta * (1.0 - cos_i * cos_i);
        double fresnel = 1.0;  // total internal reflection
        if (sin2_t < 1.0)
          fresnel = f0s + (1.0 - f0s) * std::pow(1.0 - cos_i, 5.0);
        if (rng.next_double() < fresnel) {
          rd = reflect(rd, n);
          ro = hit.point + n * kRayEps;
        } else {
          const double cos_t = std::sqrt(1.0 - sin2_t);
          rd = (eta * rd + (eta * cos_i - cos_t) * n).normalized();
          ro = hit.point - n * kRayEps;
          throughput = throughput.cwiseProduct(m.base_color);
        }
        break;
      }
      case MaterialKind::Transparent: {
        if (rng.next_double() < m.transmission) {
          throughput = throughput.cwiseProduct(m.base_color);
          ro = hit.point + rd * kRayEps;
        } else {
          BsdfSample bsdf;
          bsdf.diffuse_albedo = m.base_color;
          radiance += throughput.cwiseProduct(direct_light(ctx, hit.point, n, -rd, bsdf, rng));
          throughput = throughput.cwiseProduct(m.base_color);
          ro = hit.point + n * kRayEps;
          rd = cosine_sample(n, rng);
        }
        break;
      }
    }
  }
  return radiance;
}

inline void parallel_rows(int height, int threads, const std::function<void(int, int)>& body) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, std::max(1, height));
  if (threads == 1) {
    body(0, height);
    return;
  }
  const int block = (height + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int k = 0; k < threads; ++k) {
    const int y0 = k * block;
    const int y1 = std::min(height, y0 + block);
    if (y0 >= y1) break;
    pool.emplace_back([&body, y0, y1] { body(y0, y1); });
  }
  for (auto& t : pool) t.join();
}

inline FrameContext make_context(const SceneRecord& scene, const FrameSpec& frame,
                                 const LinearTexture& tex) {
  FrameContext ctx;
  ctx.scene = &scene;
  ctx.frame = &frame;
  ctx.texture = &tex;
  ctx.geoms.reserve(frame.occluders.size());
  for (const auto& o : frame.occluders) ctx.geoms.emplace_back(o);
  ctx.ambient = frame.lights.empty() ? scene.render.ambient : scene.render.view_ambient;
  return ctx;
}

// Camera ray through continuous pixel coordinates (u, v).
inline void camera_ray(const Camera& cam, double u, double v, Vec3* ro, Vec3* rd) {
  const Mat3 k = cam.intrinsics.matrix();
  const Vec3 dir_cam((u - k(0, 2)) / k(0, 0), (v - k(1, 2)) / k(1, 1), 1.0);
  *ro = cam.pose.center();
  *rd = (cam.pose.rotation.transpose() * dir_cam).normalized();
}

inline ImageF render_pass(const SceneRecord& scene, const FrameSpec& frame,
                          std::uint64_t pass_seed, const RenderBudget& budget, int threads) {
  if (budget.samples_per_pixel < 1 || budget.max_bounces < 1)
    raise(errc::budget_invalid, "samples per pixel and bounces must be >= 1");
  if (!scene.texture_image || scene.texture_image->empty())
    raise(errc::texture_missing, "scene has no loaded texture");

  const LinearTexture tex(*scene.texture_image);
  const FrameContext ctx = make_context(scene, frame, tex);
  const Camera& cam = frame.camera;
  const int w = cam.intrinsics.res_x;
  const int h = cam.intrinsics.res_y;

  ImageF out(w, h, 3);
  parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y) {
      for (int x = 0; x < w; ++x) {
        const auto pixel = static_cast<std::uint64_t>(y) * static_cast<std::uint64_t>(w) +
                           static_cast<std::uint64_t>(x);
        Vec3 acc = Vec3::Zero();
        for (int s = 0; s < budget.samples_per_pixel; ++s) {
          Pcg32 rng(derive_seed(pass_seed, pixel, static_cast<std::uint64_t>(s)));
          const double u = x + rng.next_double();
          const double v = y + rng.next_double();
          Vec3 ro, rd;
          camera_ray(cam, u, v, &ro, &rd);
          acc += trace_path(ctx, ro, rd, budget.max_bounces, rng);
        }
        acc /= static_cast<double>(budget.samples_per_pixel);
        for (int c = 0; c < 3; ++c) out.at(x, y, c) = static_cast<float>(acc[c]);
      }
    }
  });
  return out;
}

}  // namespace render_detail

inline std::uint64_t view_pass_seed(const SceneRecord& scene, int frame_index) {
  return derive_seed(scene.seed, stream_tag("render"), static_cast<std::uint64_t>(frame_index) + 1);
}

// Path-traced view through frame `frame_index`, in linear radiance.
inline ImageF render_view_hdr(const SceneRecord& scene, int frame_index,
                              const RenderBudget& budget, int threads = 0) {
  if (frame_index < 0 || frame_index >= static_cast<int>(scene.frames.size()))
    raise(errc::invalid_config, "invalid camera index");
  return render_detail::render_pass(scene, scene.frames[static_cast<std::size_t>(frame_index)],
                                    view_pass_seed(scene, frame_index), budget, threads);
}

inline Image render_view(const SceneRecord& scene, int frame_index, const RenderBudget& budget,
                         int threads = 0) {
  return tonemap(render_view_hdr(scene, frame_index, budget, threads));
}

inline Image render_view(const SceneRecord& scene, int frame_index, int threads = 0) {
  return render_view(scene, frame_index,
                     RenderBudget{scene.render.spp, scene.render.max_bounces}, threads);
}

// Ground-truth label: the aligned camera under uniform ambient illumination,
// all sampled lights and occluders removed. Internally this is render_view
// of the distortion-stripped frame.
inline Image render_label(const SceneRecord& scene, int res_x, int res_y, int threads = 0) {
  if (!scene.texture_image || scene.texture_image->empty())
    raise(errc::texture_missing, "scene has no loaded texture");
  FrameSpec stripped;
  stripped.camera = scene.label_camera;
  stripped.camera.intrinsics.res_x = res_x;
  stripped.camera.intrinsics.res_y = res_y;
  stripped.camera.intrinsics.principal_point = Vec2(res_x / 2.0, res_y / 2.0);
  const std::uint64_t pass_seed = derive_seed(scene.seed, stream_tag("render"), 0);
  return tonemap(render_detail::render_pass(
      scene, stripped, pass_seed,
      RenderBudget{scene.render.spp, scene.render.max_bounces}, threads));
}

inline Image render_label(const SceneRecord& scene, int threads = 0) {
  return render_label(scene, scene.label_camera.intrinsics.res_x,
                      scene.label_camera.intrinsics.res_y, threads);
}

// First object hit by the primary ray through the pixel center:
// -2 background, -1 plane, k >= 0 the k-th occluder of the frame.
inline int first_hit_object(const SceneRecord& scene, int frame_index, int px, int py) {
  if (frame_index < 0 || frame_index >= static_cast<int>(scene.frames.size()))
    raise(errc::invalid_config, "invalid camera index");
  const FrameSpec& frame = scene.frames[static_cast<std::size_t>(frame_index)];
  render_detail::FrameContext ctx;
  ctx.scene = &scene;
  ctx.frame = &frame;
  ctx.geoms.reserve(frame.occluders.size());
  for (const auto& o : frame.occluders) ctx.geoms.emplace_back(o);
  Vec3 ro, rd;
  render_detail::camera_ray(frame.camera, px + 0.5, py + 0.5, &ro, &rd);
  return render_detail::intersect_scene(ctx, ro, rd).object;
}

// Binary occlusion mask from primary visibility, one center ray per pixel:
// plane -> 0, occluder or background -> 255. Materials are irrelevant.
inline Image render_mask(const SceneRecord& scene, int frame_index, int threads = 0) {
  if (frame_index < 0 || frame_index >= static_cast<int>(scene.frames.size()))
    raise(errc::invalid_config, "invalid camera index");
  const FrameSpec& frame = scene.frames[static_cast<std::size_t>(frame_index)];
  render_detail::FrameContext ctx;
  ctx.scene = &scene;
  ctx.frame = &frame;
  ctx.geoms.reserve(frame.occluders.size());
  for (const auto& o : frame.occluders) ctx.geoms.emplace_back(o);

  const Camera& cam = frame.camera;
  const int w = cam.intrinsics.res_x;
  const int h = cam.intrinsics.res_y;
  Image mask(w, h, 1, 255);
  render_detail::parallel_rows(h, threads, [&](int y0, int y1) {
    for (int y = y0; y < y1; ++y)
      for (int x = 0; x < w; ++x) {
        Vec3 ro, rd;
        render_detail::camera_ray(cam, x + 0.5, y + 0.5, &ro, &rd);
        const auto hit = render_detail::intersect_scene(ctx, ro, rd);
        mask.at(x, y) = hit.object == render_detail::kPlaneObject ? 0 : 255;
      }
  });
  return mask;
}

}  // namespace sidar
