#pragma once

// On-disk dataset layout and validation.
//
//   <root>/manifest.json
//   <root>/scene_%05d/
//       label.png
//       scene.json
//       homographies.json
//       images/%04d.png     (frames 1..n; the label is frame 0)
//       masks/%04d.png
//
// Scene writes are atomic: everything lands in a temp directory that is
// renamed into place once complete.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "sidar/geometry.hpp"
#include "sidar/image.hpp"
#include "sidar/png_io.hpp"
#include "sidar/rng.hpp"
#include "sidar/scene.hpp"
#include "sidar/serialize.hpp"

namespace sidar {

namespace fs = std::filesystem;

inline std::string scene_dir_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%05d", index);
  return buf;
}

inline std::string frame_file_name(int frame) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d.png", frame);
  return buf;
}

// ---- corpus ingest ----

struct IngestResult {
  std::vector<TextureRef> textures;
  int skipped_non_image = 0;
  int unreadable = 0;
  std::vector<std::string> warnings;
};

inline std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(errc::io_failure, "cannot read " + path.string());
  std::uint64_t h = 0xcbf29ce484222325ull;
  char buf[1 << 14];
  while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
    const auto n = static_cast<std::size_t>(in.gcount());
    for (std::size_t i = 0; i < n; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ull;
    }
    if (in.eof()) break;
  }
  char out[17];
  std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
  return out;
}

inline bool has_image_extension(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

// Scan a directory for usable textures, in lexicographic filename order.
// Non-image files are skipped with a warning; image files that fail to
// decode (or are smaller than 32x32) are counted as unreadable, non-fatally.
inline IngestResult ingest_corpus(const fs::path& directory) {
  if (!fs::is_directory(directory))
    raise(errc::empty_corpus, "not a directory: " + directory.string());

  std::vector<fs::path> entries;
  for (const auto& e : fs::directory_iterator(directory))
    if (e.is_regular_file()) entries.push_back(e.path());
  std::sort(entries.begin(), entries.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  IngestResult result;
  for (const auto& path : entries) {
    if (!has_image_extension(path)) {
      ++result.skipped_non_image;
      result.warnings.push_back("skipped non-image file: " + path.filename().string());
      continue;
    }
    try {
      const Image img = read_image(path);
      if (img.width < 32 || img.height < 32)
        raise(errc::unreadable_image, "image smaller than 32x32");
      TextureRef ref;
      ref.path = path.filename().string();
      ref.width = img.width;
      ref.height = img.height;
      ref.content_hash = hash_file(path);
      result.textures.push_back(std::move(ref));
    } catch (const Error& e) {
      ++result.unreadable;
      result.warnings.push_back(path.filename().string() + ": " + e.what());
    }
  }
  if (result.textures.empty())
    raise(errc::empty_corpus, "no usable images in " + directory.string());
  return result;
}

// ---- scene write / read ----

struct SceneArtifacts {
  Image label;
  std::vector<Image> views;
  std::vector<Image> masks;
  std::vector<PairHomography> homographies;
};

inline fs::path write_scene(const fs::path& output_root, const SceneRecord& scene,
                            const SceneArtifacts& artifacts, int scene_index) {
  const auto n = static_cast<int>(scene.frames.size());
  if (artifacts.label.empty()) raise(errc::incomplete_artifacts, "missing label image");
  if (static_cast<int>(artifacts.views.size()) != n ||
      static_cast<int>(artifacts.masks.size()) != n)
    raise(errc::incomplete_artifacts, "expected " + std::to_string(n) + " views and masks");
  if (static_cast<int>(artifacts.homographies.size()) != (n + 1) * n)
    raise(errc::incomplete_artifacts, "homography table must hold all ordered pairs");

  std::error_code ec;
  fs::create_directories(output_root, ec);
  const fs::path final_dir = output_root / scene_dir_name(scene_index);
  const fs::path tmp_dir = output_root / ("." + scene_dir_name(scene_index) + ".tmp");
  fs::remove_all(tmp_dir, ec);
  if (!fs::create_directories(tmp_dir / "images") || !fs::create_directories(tmp_dir / "masks"))
    raise(errc::io_failure, "cannot create " + tmp_dir.string());

  write_png(tmp_dir / "label.png", artifacts.label);
  for (int f = 0; f < n; ++f) {
    write_png(tmp_dir / "images" / frame_file_name(f + 1), artifacts.views[static_cast<std::size_t>(f)]);
    write_png(tmp_dir / "masks" / frame_file_name(f + 1), artifacts.masks[static_cast<std::size_t>(f)]);
  }
  write_json_file(tmp_dir / "scene.json", to_json(scene));
  write_json_file(tmp_dir / "homographies.json", to_json(artifacts.homographies, n + 1));

  fs::remove_all(final_dir, ec);
  fs::rename(tmp_dir, final_dir, ec);
  if (ec) raise(errc::io_failure, "cannot move scene into place: " + ec.message());
  return final_dir;
}

struct LoadedScene {
  SceneRecord record;
  std::vector<PairHomography> homographies;
  int frame_count = 0;  // including the label
  fs::path dir;
  fs::path label_path;
  std::vector<fs::path> image_paths;
  std::vector<fs::path> mask_paths;
};

inline void require_file(const fs::path& p) {
  std::error_code ec;
  if (!fs::is_regular_file(p, ec) || fs::file_size(p, ec) == 0)
    raise(errc::missing_artifact, p.string());
}

inline LoadedScene read_scene(const fs::path& scene_dir) {
  LoadedScene loaded;
  loaded.dir = scene_dir;
  loaded.record = scene_from_json(read_json_file(scene_dir / "scene.json"));
  loaded.homographies =
      homographies_from_json(read_json_file(scene_dir / "homographies.json"), &loaded.frame_count);

  loaded.label_path = scene_dir / "label.png";
  require_file(loaded.label_path);
  const auto n = static_cast<int>(loaded.record.frames.size());
  for (int f = 0; f < n; ++f) {
    loaded.image_paths.push_back(scene_dir / "images" / frame_file_name(f + 1));
    loaded.mask_paths.push_back(scene_dir / "masks" / frame_file_name(f + 1));
    require_file(loaded.image_paths.back());
    require_file(loaded.mask_paths.back());
  }
  return loaded;
}

// ---- validation ----

struct CheckResult {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct SceneValidation {
  std::string scene;
  bool passed = true;
  std::vector<CheckResult> checks;
};

struct ValidationReport {
  bool passed = true;
  int scenes_checked = 0;
  std::vector<SceneValidation> scenes;
  std::vector<std::string> warnings;
};

namespace dataset_detail {

inline constexpr double kCocycleTol = 1e-6;
inline constexpr double kCornerTransportTolPx = 1e-8;
inline constexpr double kCanonicalDetTol = 1e-9;

inline const Mat3* find_pair(const std::vector<PairHomography>& pairs, int i, int j) {
  for (const auto& p : pairs)
    if (p.i == i && p.j == j) return &p.h;
  return nullptr;
}

inline Camera camera_of(const LoadedScene& s, int index) {
  return index == 0 ? s.record.label_camera
                    : s.record.frames[static_cast<std::size_t>(index - 1)].camera;
}

inline void run_scene_checks(const LoadedScene& s, SceneValidation& out) {
  auto add = [&out](const std::string& name, bool ok, const std::string& detail) {
    out.checks.push_back({name, ok, ok ? "" : detail});
    if (!ok) out.passed = false;
  };

  const int n = static_cast<int>(s.record.frames.size());
  const int total = n + 1;

  // Table completeness: all ordered pairs over {label, frames}.
  {
    bool complete = static_cast<int>(s.homographies.size()) == total * (total - 1) &&
                    s.frame_count == total;
    std::string missing;
    for (int i = 0; complete && i < total; ++i)
      for (int j = 0; j < total; ++j) {
        if (i == j) continue;
        if (!find_pair(s.homographies, i, j)) {
          complete = false;
          missing = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
          break;
        }
      }
    add("homography_table_complete", complete, "missing pair " + missing);
  }

  // Canonical form: |det| = 1, largest-magnitude entry positive.
  {
    bool ok = true;
    std::string detail;
    for (const auto& p : s.homographies) {
      const double det = p.h.determinant();
      double best = 0.0;
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
          if (std::abs(p.h(r, c)) > std::abs(best)) best = p.h(r, c);
      if (std::abs(std::abs(det) - 1.0) > kCanonicalDetTol || best < 0.0) {
        ok = false;
        detail = "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ")";
        break;
      }
    }
    add("homography_canonical", ok, detail);
  }

  // Exact replay: recompute each homography from the stored cameras and the
  // z=0 plane; the stored doubles must match bit for bit. Catches even 1-ulp
  // mutations that are far below any geometric tolerance.
  {
    bool ok = true;
    std::string detail;
    for (const auto& p : s.homographies) {
      const Camera ci = camera_of(s, p.i);
      const Camera cj = camera_of(s, p.j);
      const Homography expected =
          homography_from_pose_plane(ci.intrinsics, ci.pose, cj.intrinsics, cj.pose, Plane3D::xy());
      if ((expected.matrix().array() != p.h.array()).any()) {
        ok = false;
        detail = "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) +
                 ") does not replay from the stored cameras";
        break;
      }
    }
    add("homography_replay", ok, detail);
  }

  // Corner transport through the stored homographies.
  {
    bool ok = true;
    std::string detail;
    const auto corners = s.record.plane.corners();
    for (const auto& p : s.homographies) {
      const Camera ci = camera_of(s, p.i);
      const Camera cj = camera_of(s, p.j);
      for (const auto& corner : corners) {
        const Vec2 xi = project_px(ci, corner);
        const Vec2 xj = project_px(cj, corner);
        const Vec3 mapped = p.h * Vec3(xi.x(), xi.y(), 1.0);
        const double err = (mapped.head<2>() / mapped.z() - xj).norm();
        if (!(err < kCornerTransportTolPx)) {
          ok = false;
          detail = "pair (" + std::to_string(p.i) + "," + std::to_string(p.j) + ") error " +
                   std::to_string(err);
          break;
        }
      }
      if (!ok) break;
    }
    add("corner_transport", ok, detail);
  }

  // Cocycle consistency over all ordered triples.
  {
    bool ok = true;
    std::string detail;
    for (int i = 0; i < total && ok; ++i)
      for (int j = 0; j < total && ok; ++j)
        for (int k = 0; k < total && ok; ++k) {
          if (i == j || j == k || i == k) continue;
          const Mat3* h_ij = find_pair(s.homographies, i, j);
          const Mat3* h_jk = find_pair(s.homographies, j, k);
          const Mat3* h_ik = find_pair(s.homographies, i, k);
          if (!h_ij || !h_jk || !h_ik) continue;
          const double err = homography_distance(*h_jk * *h_ij, *h_ik);
          if (!(err < kCocycleTol)) {
            ok = false;
            detail = "triple (" + std::to_string(i) + "," + std::to_string(j) + "," +
                     std::to_string(k) + ") error " + std::to_string(err);
          }
        }
    add("cocycle_consistency", ok, detail);
  }

  // Mask binarity.
  {
    bool ok = true;
    std::string detail;
    for (const auto& mp : s.mask_paths) {
      const Image mask = read_png(mp);
      for (const auto v : mask.data)
        if (v != 0 && v != 255) {
          ok = false;
          detail = mp.filename().string() + " has value " + std::to_string(v);
          break;
        }
      if (!ok) break;
    }
    add("mask_binarity", ok, detail);
  }

  // Label decodes and has positive size.
  {
    bool ok = true;
    std::string detail;
    try {
      const Image label = read_png(s.label_path);
      ok = label.width > 0 && label.height > 0;
    } catch (const Error& e) {
      ok = false;
      detail = e.what();
    }
    add("label_present", ok, detail);
  }
}

}  // namespace dataset_detail

// Validate every scene under `root`. Failures are reported, not thrown.
inline ValidationReport validate_dataset(const fs::path& root) {
  ValidationReport report;
  if (!fs::is_directory(root)) {
    report.warnings.push_back("dataset root does not exist: " + root.string());
    report.passed = false;
    return report;
  }

  std::vector<fs::path> scene_dirs;
  for (const auto& e : fs::directory_iterator(root)) {
    if (e.is_directory() && e.path().filename().string().rfind("scene_", 0) == 0)
      scene_dirs.push_back(e.path());
  }
  std::sort(scene_dirs.begin(), scene_dirs.end());

  if (scene_dirs.empty()) {
    report.warnings.push_back("no scenes found under " + root.string());
    return report;
  }

  if (!fs::is_regular_file(root / "manifest.json"))
    report.warnings.push_back("manifest.json missing at dataset root");

  for (const auto& dir : scene_dirs) {
    SceneValidation sv;
    sv.scene = dir.filename().string();
    try {
      const LoadedScene loaded = read_scene(dir);
      dataset_detail::run_scene_checks(loaded, sv);
    } catch (const Error& e) {
      sv.passed = false;
      sv.checks.push_back({"artifacts_complete", false, e.what()});
    }
    if (!sv.passed) report.passed = false;
    ++report.scenes_checked;
    report.scenes.push_back(std::move(sv));
  }
  return report;
}

inline Json to_json(const ValidationReport& r) {
  Json j;
  j["passed"] = r.passed;
  j["scenes_checked"] = r.scenes_checked;
  j["warnings"] = r.warnings;
  Json scenes = Json::array();
  for (const auto& s : r.scenes) {
    Json js;
    js["scene"] = s.scene;
    js["passed"] = s.passed;
    Json checks = Json::array();
    for (const auto& c : s.checks)
      checks.push_back(Json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    js["checks"] = std::move(checks);
    scenes.push_back(std::move(js));
  }
  j["scenes"] = std::move(scenes);
  return j;
}

}  // namespace sidar
