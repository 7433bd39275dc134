#pragma once

// End-to-end dataset generation: ingest a corpus, sample scenes, render
// views/masks/labels, compute the pairwise homography table (analytic route,
// cross-checked against the DLT route), and write everything atomically.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "sidar/dataset.hpp"
#include "sidar/geometry.hpp"
#include "sidar/png_io.hpp"
#include "sidar/render.hpp"
#include "sidar/sampling.hpp"
#include "sidar/serialize.hpp"

namespace sidar {

inline constexpr double kCrossCheckTol = 1e-6;

// All cameras of a scene in table order: label first, then the frames.
inline std::vector<Camera> table_cameras(const SceneRecord& scene) {
  std::vector<Camera> cams;
  cams.reserve(scene.frames.size() + 1);
  cams.push_back(scene.label_camera);
  for (const auto& f : scene.frames) cams.push_back(f.camera);
  return cams;
}

// Pairwise table over {label, frames}: the analytic plane-induced homography
// for every ordered pair, each cross-checked against the DLT estimate from
// the projected plane corners. Disagreement beyond 1e-6 is a hard failure.
inline std::vector<PairHomography> compute_homography_table(const SceneRecord& scene) {
  const auto cams = table_cameras(scene);
  const auto corners = scene.plane.corners();
  const int total = static_cast<int>(cams.size());

  std::vector<std::array<Vec2, 4>> projected(static_cast<std::size_t>(total));
  for (int i = 0; i < total; ++i)
    for (int k = 0; k < 4; ++k)
      projected[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
          project_px(cams[static_cast<std::size_t>(i)], corners[static_cast<std::size_t>(k)]);

  std::vector<PairHomography> table;
  table.reserve(static_cast<std::size_t>(total) * (total - 1));
  for (int i = 0; i < total; ++i) {
    for (int j = 0; j < total; ++j) {
      if (i == j) continue;
      const Homography analytic = homography_from_pose_plane(
          cams[static_cast<std::size_t>(i)].intrinsics, cams[static_cast<std::size_t>(i)].pose,
          cams[static_cast<std::size_t>(j)].intrinsics, cams[static_cast<std::size_t>(j)].pose,
          Plane3D::xy());
      const Homography dlt = dlt_homography(projected[static_cast<std::size_t>(i)],
                                            projected[static_cast<std::size_t>(j)]);
      const double gap = (analytic.matrix() - dlt.matrix()).norm();
      if (!(gap < kCrossCheckTol))
        raise(errc::degenerate_configuration,
              "homography cross-check failed for pair (" + std::to_string(i) + "," +
                  std::to_string(j) + "), Frobenius gap " + std::to_string(gap));
      table.push_back({i, j, analytic.matrix()});
    }
  }
  return table;
}

struct GenerateOptions {
  SceneConfig config;          // config.seed is the master seed
  int scenes = 1;
  fs::path corpus;
  fs::path output;
  int jobs = 1;
  int label_spp = 0;           // 0: use config.spp
};

struct GenerateResult {
  int scenes_ok = 0;
  int scenes_failed = 0;
  fs::path manifest_path;
  std::vector<std::string> errors;
};

inline SceneArtifacts render_scene_artifacts(const SceneRecord& scene, int label_spp,
                                             int threads) {
  SceneArtifacts art;
  const RenderBudget budget{scene.render.spp, scene.render.max_bounces};
  for (int f = 0; f < static_cast<int>(scene.frames.size()); ++f) {
    art.views.push_back(render_view(scene, f, budget, threads));
    art.masks.push_back(render_mask(scene, f, threads));
  }
  if (label_spp > 0) {
    SceneRecord adjusted = scene;
    adjusted.render.spp = label_spp;
    art.label = render_label(adjusted, threads);
  } else {
    art.label = render_label(scene, threads);
  }
  art.homographies = compute_homography_table(scene);
  return art;
}

inline GenerateResult generate_dataset(const GenerateOptions& options, std::ostream* log = nullptr) {
  options.config.validate();
  if (options.scenes < 1) raise(errc::invalid_config, "scenes must be >= 1");
  const IngestResult corpus = ingest_corpus(options.corpus);

  std::error_code ec;
  fs::create_directories(options.output, ec);
  if (!fs::is_directory(options.output))
    raise(errc::io_failure, "cannot create output root: " + options.output.string());

  struct SceneOutcome {
    bool ok = false;
    std::uint64_t seed = 0;
    TextureRef texture;
    SceneMode mode = SceneMode::Misaligned;
    int frames = 0;
    std::string error;
  };
  std::vector<SceneOutcome> outcomes(static_cast<std::size_t>(options.scenes));

  const int jobs = std::max(1, options.jobs);
  const int render_threads = jobs > 1 ? 1 : 0;
  std::atomic<int> next{0};
  std::mutex log_mutex;

  auto worker = [&] {
    for (;;) {
      const int s = next.fetch_add(1);
      if (s >= options.scenes) break;
      SceneOutcome& out = outcomes[static_cast<std::size_t>(s)];
      const TextureRef& ref = corpus.textures[static_cast<std::size_t>(s) % corpus.textures.size()];
      try {
        SceneConfig cfg = options.config;
        cfg.seed = derive_seed(options.config.seed, stream_tag("scene"), static_cast<std::uint64_t>(s));
        const Image texture = read_image(options.corpus / ref.path);

        SceneRecord scene = sample_scene(cfg, texture);
        scene.texture = ref;

        const SceneArtifacts art = render_scene_artifacts(scene, options.label_spp, render_threads);
        write_scene(options.output, scene, art, s);

        out.ok = true;
        out.seed = cfg.seed;
        out.texture = ref;
        out.mode = cfg.mode;
        out.frames = cfg.frames;
        if (log) {
          std::lock_guard lock(log_mutex);
          *log << scene_dir_name(s) << " seed=" << cfg.seed << " texture=" << ref.path
               << " frames=" << cfg.frames << " ok\n";
        }
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
        out.seed = derive_seed(options.config.seed, stream_tag("scene"), static_cast<std::uint64_t>(s));
        if (log) {
          std::lock_guard lock(log_mutex);
          *log << scene_dir_name(s) << " seed=" << out.seed << " FAILED: " << e.what() << "\n";
        }
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int k = 0; k < jobs; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Manifest, written once after all scenes completed.
  Json manifest;
  manifest["schema"] = kSchemaVersion;
  manifest["generator_version"] = kGeneratorVersion;
  manifest["master_seed"] = options.config.seed;
  manifest["scenes"] = options.scenes;
  manifest["corpus"] = options.corpus.string();
  manifest["config"] = to_json(options.config);
  Json scene_list = Json::array();
  GenerateResult result;
  for (int s = 0; s < options.scenes; ++s) {
    const SceneOutcome& out = outcomes[static_cast<std::size_t>(s)];
    if (!out.ok) {
      ++result.scenes_failed;
      result.errors.push_back(scene_dir_name(s) + ": " + out.error);
      continue;
    }
    ++result.scenes_ok;
    Json entry;
    entry["name"] = scene_dir_name(s);
    entry["seed"] = out.seed;
    entry["mode"] = to_string(out.mode);
    entry["frames"] = out.frames;
    entry["texture"] = Json{{"path", out.texture.path},
                            {"width", out.texture.width},
                            {"height", out.texture.height},
                            {"content_hash", out.texture.content_hash}};
    Json paths;
    paths["label"] = scene_dir_name(s) + "/label.png";
    paths["scene"] = scene_dir_name(s) + "/scene.json";
    paths["homographies"] = scene_dir_name(s) + "/homographies.json";
    Json images = Json::array();
    Json masks = Json::array();
    for (int f = 1; f <= out.frames; ++f) {
      images.push_back(scene_dir_name(s) + "/images/" + frame_file_name(f));
      masks.push_back(scene_dir_name(s) + "/masks/" + frame_file_name(f));
    }
    paths["images"] = std::move(images);
    paths["masks"] = std::move(masks);
    entry["paths"] = std::move(paths);
    scene_list.push_back(std::move(entry));
  }
  manifest["scene_list"] = std::move(scene_list);

  result.manifest_path = options.output / "manifest.json";
  write_json_file(result.manifest_path, manifest);
  return result;
}

}  // namespace sidar
