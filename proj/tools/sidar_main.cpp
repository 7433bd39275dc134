// sidar-forge command line: generate / validate / warp / inspect.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <string>

#include <sidar/sidar.hpp>

namespace {

using namespace sidar;

struct GenerateCli {
  std::string corpus;
  std::string output;
  std::string config_file;
  std::uint64_t seed = 0;
  int scenes = 1;
  int frames = 4;
  std::string mode = "misaligned";
  std::string resolution;
  int spp = 0;
  int occluders = -1;
  std::string randomize_lights;
  int jobs = 1;
  int label_spp = 0;
};

bool parse_resolution(const std::string& text, int* w, int* h) {
  const auto x = text.find('x');
  if (x == std::string::npos) return false;
  try {
    *w = std::stoi(text.substr(0, x));
    *h = std::stoi(text.substr(x + 1));
  } catch (...) {
    return false;
  }
  return *w > 0 && *h > 0;
}

int run_generate(const GenerateCli& cli, const CLI::App& cmd) {
  GenerateOptions options;
  if (!cli.config_file.empty())
    options.config = config_from_json(read_json_file(cli.config_file));

  auto passed = [&cmd](const std::string& flag) { return cmd.count(flag) > 0; };

  SceneConfig& cfg = options.config;
  if (passed("--seed")) cfg.seed = cli.seed;
  if (passed("--frames")) cfg.frames = cli.frames;
  if (passed("--mode")) {
    if (cli.mode != "aligned" && cli.mode != "misaligned") {
      std::cerr << "error: --mode must be aligned or misaligned\n";
      return 2;
    }
    cfg.mode = cli.mode == "aligned" ? SceneMode::Aligned : SceneMode::Misaligned;
  }
  if (passed("--resolution")) {
    if (!parse_resolution(cli.resolution, &cfg.res_x, &cfg.res_y)) {
      std::cerr << "error: --resolution expects WxH, e.g. 256x256\n";
      return 2;
    }
  }
  if (passed("--spp")) cfg.spp = cli.spp;
  if (passed("--occluders")) {
    if (cli.occluders < 0) {
      std::cerr << "error: --occluders must be >= 0\n";
      return 2;
    }
    cfg.occluders_count = IntRange{cli.occluders, cli.occluders};
  }
  if (passed("--randomize-lights")) {
    if (cli.randomize_lights != "on" && cli.randomize_lights != "off") {
      std::cerr << "error: --randomize-lights expects on or off\n";
      return 2;
    }
    cfg.randomize_lights = cli.randomize_lights == "on";
  }

  options.scenes = passed("--scenes") ? cli.scenes : options.scenes;
  options.corpus = cli.corpus;
  options.jobs = cli.jobs;
  options.label_spp = cli.label_spp;

  std::string output = cli.output;
  if (output.empty()) {
    if (const char* env = std::getenv("SIDAR_OUTPUT_ROOT")) output = env;
  }
  if (output.empty()) {
    std::cerr << "error: no output root (use --output or set SIDAR_OUTPUT_ROOT)\n";
    return 2;
  }
  options.output = output;

  const GenerateResult result = generate_dataset(options, &std::cout);
  std::cout << "generated " << result.scenes_ok << " scene(s), " << result.scenes_failed
            << " failed; manifest: " << result.manifest_path.string() << "\n";
  for (const auto& e : result.errors) std::cerr << "error: " << e << "\n";
  return result.scenes_failed == 0 ? 0 : 1;
}

int run_validate(const std::string& root) {
  const ValidationReport report = validate_dataset(root);
  for (const auto& w : report.warnings) std::cout << "warning: " << w << "\n";
  for (const auto& scene : report.scenes) {
    for (const auto& check : scene.checks) {
      std::cout << (check.passed ? "[pass] " : "[FAIL] ") << scene.scene << " " << check.name;
      if (!check.passed) std::cout << " (" << check.detail << ")";
      std::cout << "\n";
    }
  }
  std::cout << (report.passed ? "validation passed" : "validation FAILED") << " ("
            << report.scenes_checked << " scene(s))\n";
  return report.passed ? 0 : 1;
}

Image load_frame_image(const LoadedScene& scene, int frame) {
  if (frame == 0) return read_png(scene.label_path);
  const auto idx = static_cast<std::size_t>(frame - 1);
  if (frame < 0 || idx >= scene.image_paths.size())
    raise(errc::missing_artifact, "frame " + std::to_string(frame) + " does not exist");
  return read_png(scene.image_paths[idx]);
}

int run_warp(const std::string& scene_dir, int source, int target, std::string out_path) {
  const LoadedScene scene = read_scene(scene_dir);
  const Image source_img = load_frame_image(scene, source);

  const Camera target_cam = dataset_detail::camera_of(scene, target);
  const int out_w = target_cam.intrinsics.res_x;
  const int out_h = target_cam.intrinsics.res_y;

  Homography h;  // identity when warping a frame onto itself
  if (source != target) {
    const Mat3* stored = dataset_detail::find_pair(scene.homographies, source, target);
    if (!stored)
      raise(errc::missing_artifact, "no stored homography for pair (" + std::to_string(source) +
                                        "," + std::to_string(target) + ")");
    h = Homography(*stored);
  }

  const WarpResult warped = warp_image(source_img, h, out_w, out_h);
  if (out_path.empty()) {
    char name[64];
    std::snprintf(name, sizeof(name), "warp_%04d_to_%04d.png", source, target);
    out_path = (scene.dir / name).string();
  }
  write_png(out_path, warped.image);
  const std::string validity_path =
      out_path.substr(0, out_path.size() - 4) + ".validity.png";
  write_png(validity_path, warped.validity);
  std::cout << "wrote " << out_path << " and " << validity_path << "\n";
  return 0;
}

int run_inspect(const std::string& scene_dir) {
  const LoadedScene scene = read_scene(scene_dir);
  const SceneRecord& rec = scene.record;
  std::cout << "scene: " << scene.dir.string() << "\n"
            << "seed: " << rec.seed << "\n"
            << "mode: " << to_string(rec.mode) << "\n"
            << "texture: " << rec.texture.path << " (" << rec.texture.width << "x"
            << rec.texture.height << ", hash " << rec.texture.content_hash << ")\n"
            << "plane: " << rec.plane.width << " x " << rec.plane.height << "\n"
            << "frames: " << rec.frames.size() << "\n";
  for (std::size_t f = 0; f < rec.frames.size(); ++f) {
    const FrameSpec& fr = rec.frames[f];
    const Vec3 c = fr.camera.pose.center();
    std::cout << "  frame " << f + 1 << ": camera at (" << c.x() << ", " << c.y() << ", "
              << c.z() << "), f=" << fr.camera.intrinsics.principal_distance
              << ", lights=" << fr.lights.size() << ", occluders=" << fr.occluders.size() << "\n";
  }
  double worst = 0.0;
  for (const auto& p : scene.homographies) {
    Eigen::JacobiSVD<Mat3> svd(p.h);
    const double cond = svd.singularValues()(0) / svd.singularValues()(2);
    worst = std::max(worst, cond);
    if (p.i == 0)
      std::cout << "  H(0 -> " << p.j << "): condition " << cond << "\n";
  }
  std::cout << "worst homography condition number: " << worst << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"sidar-forge: seeded generator of image-alignment datasets with exact homographies"};
  app.require_subcommand(1);

  GenerateCli gen;
  auto* cmd_gen = app.add_subcommand("generate", "Generate a dataset from an image corpus");
  cmd_gen->add_option("--corpus", gen.corpus, "Directory of input images")
      ->required()
      ->check(CLI::ExistingDirectory);
  cmd_gen->add_option("--output,-o", gen.output, "Output root (default: $SIDAR_OUTPUT_ROOT)");
  cmd_gen->add_option("--config", gen.config_file, "JSON config file")->check(CLI::ExistingFile);
  cmd_gen->add_option("--seed", gen.seed, "Master seed");
  cmd_gen->add_option("--scenes", gen.scenes, "Number of scenes");
  cmd_gen->add_option("--frames", gen.frames, "Frames per scene");
  cmd_gen->add_option("--mode", gen.mode, "aligned | misaligned");
  cmd_gen->add_option("--resolution", gen.resolution, "View resolution WxH");
  cmd_gen->add_option("--spp", gen.spp, "Samples per pixel");
  cmd_gen->add_option("--occluders", gen.occluders, "Fixed occluder count per frame");
  cmd_gen->add_option("--randomize-lights", gen.randomize_lights, "on | off");
  cmd_gen->add_option("--jobs", gen.jobs, "Parallel scene workers");
  cmd_gen->add_option("--label-spp", gen.label_spp, "Override label samples per pixel");

  std::string validate_root;
  auto* cmd_val = app.add_subcommand("validate", "Validate a generated dataset");
  cmd_val->add_option("root", validate_root, "Dataset root")->required();

  std::string warp_scene;
  int warp_source = 0, warp_target = 0;
  std::string warp_out;
  auto* cmd_warp = app.add_subcommand("warp", "Warp a frame into another frame's coordinates");
  cmd_warp->add_option("scene", warp_scene, "Scene directory")->required();
  cmd_warp->add_option("--source", warp_source, "Source frame (0 = label)")->required();
  cmd_warp->add_option("--target", warp_target, "Target frame (0 = label)")->required();
  cmd_warp->add_option("--out", warp_out, "Output image path");

  std::string inspect_scene;
  auto* cmd_inspect = app.add_subcommand("inspect", "Print a scene's sampled parameters");
  cmd_inspect->add_option("scene", inspect_scene, "Scene directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_gen->parsed()) return run_generate(gen, *cmd_gen);
    if (cmd_val->parsed()) return run_validate(validate_root);
    if (cmd_warp->parsed()) return run_warp(warp_scene, warp_source, warp_target, warp_out);
    if (cmd_inspect->parsed()) return run_inspect(inspect_scene);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
