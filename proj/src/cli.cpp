#include "ati/cli.hpp"

#include <csignal>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "ati/atic.hpp"
#include "ati/augment.hpp"
#include "ati/file_util.hpp"
#include "ati/injector.hpp"
#include "ati/metrics.hpp"
#include "ati/png_io.hpp"
#include "ati/project.hpp"
#include "ati/service.hpp"
#include "ati/trajectory_io.hpp"
#include "ati/trajgen.hpp"

namespace ati {

namespace {

struct Size {
  int width = 0;
  int height = 0;
};

Size parse_size(const std::string& text) {
  const auto x = text.find('x');
  Size s;
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used = 0;
    s.width = std::stoi(text.substr(0, x), &used);
    if (used != x) throw std::invalid_argument(text);
    s.height = std::stoi(text.substr(x + 1), &used);
    if (used != text.size() - x - 1) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw CLI::ValidationError("--size", "expected WxH, got \"" + text + "\"");
  }
  if (s.width < 1 || s.height < 1) throw CLI::ValidationError("--size", "dimensions must be positive");
  return s;
}

void emit(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
  } else {
    write_file_atomic(path, bytes);
  }
}

// ---------------------------------------------------------------------------

struct GenOptions {
  std::string preset;
  std::string size;
  int frames = 49;
  int n = 120;
  double speed = 1.0;
  std::vector<double> velocity{1.0, 0.0};
  std::vector<double> center;
  double subject_radius = -1.0;
  std::string out;
};

TrajectorySet generate(const GenOptions& o) {
  const Size size = parse_size(o.size);
  if (o.frames < 1) throw CLI::ValidationError("--frames", "must be >= 1");
  if (o.n < 1) throw CLI::ValidationError("--n", "must be >= 1");
  const Point2 center = o.center.size() == 2 ? Point2{o.center[0], o.center[1]}
                                             : Point2{size.width / 2.0, size.height / 2.0};
  const auto seeds = seed_grid(size.width, size.height, o.n);
  auto id = [](std::size_t k) { return "p" + std::to_string(k); };

  TrajectorySet set{size.width, size.height, o.frames, {}};
  if (o.preset == "grid" || o.preset == "pan") {
    for (std::size_t k = 0; k < seeds.size(); ++k) {
      set.tracks.push_back(static_track(seeds[k], o.frames, id(k)));
    }
    if (o.preset == "pan") {
      set = apply_camera(set, pan_path(o.frames, {o.velocity.at(0), o.velocity.at(1)}));
    }
  } else if (o.preset == "zoom") {
    set.tracks = radial_zoom(seeds, center, o.speed, o.frames, "p");
  } else if (o.preset == "dolly") {
    const double radius =
        o.subject_radius >= 0.0 ? o.subject_radius : 0.25 * std::min(size.width, size.height);
    std::vector<Point2> subject;
    std::vector<Point2> background;
    for (const auto& p : seeds) (norm(p - center) <= radius ? subject : background).push_back(p);
    set = dolly_zoom(subject, background, center, o.speed, o.frames, size.width, size.height);
  }
  return mark_out_of_frame(set);
}

// ---------------------------------------------------------------------------

struct InjectOptions {
  std::string image;
  std::string traj;
  std::string out;
  int stride = 8;
  int temporal_stride = 1;
  int channels = 6;
  std::string sigma_mode = "grid_derived";
  double sigma = 1.0;
  std::string composition = "normalized_average";
  int threads = 1;
};

int inject(const InjectOptions& o, std::ostream& err) {
  InjectorConfig config;
  try {
    config.sigma_mode = parse_sigma_mode(o.sigma_mode);
    config.composition = parse_composition(o.composition);
    config.sigma = o.sigma;
    config.spatial_stride = o.stride;
    config.temporal_stride = o.temporal_stride;
    check_config(config);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  TrajectorySet set;
  Image image;
  try {
    set = load_trajectory_file(o.traj);
    require_valid(set);
    image = load_png(o.image);
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  if (image.width() != set.width || image.height() != set.height) {
    err << "error: image is " << image.width() << "x" << image.height()
        << " but trajectories are " << set.width << "x" << set.height << "\n";
    return kExitDimension;
  }
  try {
    const auto grid = pseudo_encode(image, config.spatial_stride, o.channels);
    save_atic(o.out, compose_condition(set, grid, config, o.threads));
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << "\n";
    return kExitDimension;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

int inspect(const std::string& path, std::ostream& out, std::ostream& err) {
  ConditionTensor cond;
  try {
    cond = load_atic(path);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDimension;
  }
  double peak = 0.0;
  long covered = 0;
  for (int t = 0; t < cond.latent_frames(); ++t) {
    for (int i = 0; i < cond.height(); ++i) {
      for (int j = 0; j < cond.width(); ++j) {
        const double w = cond.weight(t, i, j);
        peak = std::max(peak, w);
        covered += w > 0.0 ? 1 : 0;
      }
    }
  }
  out << "ATIC v1  frames=" << cond.latent_frames() << " height=" << cond.height()
      << " width=" << cond.width() << " channels=" << cond.channels() << "\n"
      << "max weight " << peak << ", nonzero weight cells " << covered << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct AugmentOptions {
  std::string in;
  std::string out;
  AugmentConfig config;
  bool no_subsample = false;
};

int run_augment(const AugmentOptions& o, std::ostream& out, std::ostream& err) {
  try {
    check_augment_config(o.config);
    const auto set = load_trajectory_file(o.in);
    require_valid(set);
    auto result = o.no_subsample || set.tracks.empty() ? tail_dropout(set, o.config)
                                                       : augment(set, o.config);
    emit(o.out, write_trajectory_json(result), out);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalOptions {
  std::string pred;
  std::string gt;
  std::string json;
  std::string label;
};

int run_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  try {
    const auto pred = load_trajectory_file(o.pred);
    const auto gt = load_trajectory_file(o.gt);
    const auto r = report(pred, gt);
    out << format_table(r, o.label);
    if (!o.json.empty()) write_file_atomic(o.json, report_to_json(r));
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------

struct InitOptions {
  std::string dir;
  std::string image;
  std::string traj;
  std::string id = "project";
  int frames = 49;
  int stride = 8;
  int temporal_stride = 1;
  int channels = 6;
};

int run_init(const InitOptions& o, std::ostream& err) {
  try {
    const auto image = load_png(o.image);
    ProjectMeta meta;
    meta.id = o.id;
    meta.latent_channels = o.channels;
    meta.injector.spatial_stride = o.stride;
    meta.injector.temporal_stride = o.temporal_stride;
    if (o.channels < 3) throw std::invalid_argument("--channels must be >= 3");
    TrajectorySet initial{image.width(), image.height(), o.frames, {}};
    if (!o.traj.empty()) initial = load_trajectory_file(o.traj);
    auto store = ProjectStore::create(o.dir, meta, image, initial.frame_count);
    const auto violations = store.check(initial);
    if (!violations.empty()) throw ValidationError(violations);
    store.save_trajectories(initial);
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

EditorService* g_service = nullptr;

extern "C" void handle_stop_signal(int) {
  if (g_service) g_service->stop();
}

int run_serve(const std::string& dir, const std::string& host, int port, std::ostream& out,
              std::ostream& err) {
  std::unique_ptr<EditorService> service;
  try {
    service = std::make_unique<EditorService>(dir);
  } catch (const Error& e) {
    err << "error: cannot open project " << dir << ": " << e.what() << "\n";
    return kExitRuntime;
  }
  const int bound = service->bind(host, port);
  if (bound < 0) {
    err << "error: cannot listen on " << host << ":" << port << "\n";
    return kExitRuntime;
  }
  out << "serving " << dir << " on http://" << host << ":" << bound << "\n" << std::flush;
  g_service = service.get();
  std::signal(SIGINT, handle_stop_signal);
  std::signal(SIGTERM, handle_stop_signal);
  const bool ok = service->run();
  g_service = nullptr;
  return ok ? kExitOk : kExitRuntime;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Trajectory-conditioning engine: author trajectories, build latent conditions, "
               "augment training tracks and score tracking accuracy.",
               "ati"};
  app.require_subcommand(1);

  GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a trajectory file from a preset");
  gen_cmd->add_option("--preset", gen.preset, "grid | pan | zoom | dolly")
      ->required()
      ->check(CLI::IsMember({"grid", "pan", "zoom", "dolly"}));
  gen_cmd->add_option("--size", gen.size, "Image size WxH")->required();
  gen_cmd->add_option("--frames", gen.frames, "Video frame count")->capture_default_str();
  gen_cmd->add_option("--n", gen.n, "Seed point count")->capture_default_str();
  gen_cmd->add_option("--speed", gen.speed, "Radial speed in pixels/frame (zoom, dolly)")
      ->capture_default_str();
  gen_cmd->add_option("--velocity", gen.velocity, "Pan velocity VX VY in pixels/frame")
      ->expected(2);
  gen_cmd->add_option("--center", gen.center, "Zoom center X Y (default: image center)")
      ->expected(2);
  gen_cmd->add_option("--subject-radius", gen.subject_radius,
                      "Dolly: seeds within this distance of the center stay static");
  gen_cmd->add_option("-o,--out", gen.out, "Output file (default: stdout)");

  InjectOptions inj;
  auto* inj_cmd = app.add_subcommand("inject", "Build an ATIC condition tensor");
  inj_cmd->add_option("--image", inj.image, "Input PNG")->required();
  inj_cmd->add_option("--traj", inj.traj, "Trajectory JSON")->required();
  inj_cmd->add_option("-o,--out", inj.out, "Output .atic file")->required();
  inj_cmd->add_option("--stride", inj.stride, "Image pixels per latent cell")->capture_default_str();
  inj_cmd->add_option("--temporal-stride", inj.temporal_stride, "Video frames per latent frame")
      ->capture_default_str();
  inj_cmd->add_option("--channels", inj.channels, "Latent channels (>= 3)")->capture_default_str();
  inj_cmd->add_option("--sigma-mode", inj.sigma_mode, "paper_normalized | grid_derived | explicit")
      ->capture_default_str();
  inj_cmd->add_option("--sigma", inj.sigma, "Sigma for --sigma-mode explicit")->capture_default_str();
  inj_cmd->add_option("--composition", inj.composition, "normalized_average | max_weight")
      ->capture_default_str();
  inj_cmd->add_option("--threads", inj.threads, "Worker threads")->capture_default_str();

  std::string inspect_path;
  auto* inspect_cmd = app.add_subcommand("inspect", "Print the header of an ATIC file");
  inspect_cmd->add_option("file", inspect_path, "ATIC file")->required();

  AugmentOptions aug;
  auto* aug_cmd = app.add_subcommand("augment", "Tail dropout and track subsampling");
  aug_cmd->add_option("--in", aug.in, "Input trajectory JSON")->required();
  aug_cmd->add_option("-o,--out", aug.out, "Output file (default: stdout)");
  aug_cmd->add_option("--dropout-prob", aug.config.dropout_prob, "Tail dropout probability")
      ->capture_default_str();
  aug_cmd->add_option("--min-tracks", aug.config.min_tracks)->capture_default_str();
  aug_cmd->add_option("--max-tracks", aug.config.max_tracks)->capture_default_str();
  aug_cmd->add_option("--seed", aug.config.seed)->capture_default_str();
  aug_cmd->add_flag("--per-clip", aug.config.per_clip, "One dropout frame for the whole clip");
  aug_cmd->add_flag("--no-subsample", aug.no_subsample, "Only apply tail dropout");

  EvalOptions ev;
  auto* eval_cmd = app.add_subcommand("eval", "Score predicted tracks against ground truth");
  eval_cmd->add_option("--pred", ev.pred, "Predicted trajectory JSON")->required();
  eval_cmd->add_option("--gt", ev.gt, "Ground-truth trajectory JSON")->required();
  eval_cmd->add_option("--json", ev.json, "Also write the full report as JSON");
  eval_cmd->add_option("--label", ev.label, "Row label for the table");

  InitOptions init;
  auto* init_cmd = app.add_subcommand("init", "Create an editor project directory");
  init_cmd->add_option("--project-dir", init.dir)->required();
  init_cmd->add_option("--image", init.image, "Input PNG")->required();
  init_cmd->add_option("--traj", init.traj, "Initial trajectory JSON");
  init_cmd->add_option("--id", init.id)->capture_default_str();
  init_cmd->add_option("--frames", init.frames)->capture_default_str();
  init_cmd->add_option("--stride", init.stride)->capture_default_str();
  init_cmd->add_option("--temporal-stride", init.temporal_stride)->capture_default_str();
  init_cmd->add_option("--channels", init.channels)->capture_default_str();

  std::string serve_dir;
  std::string serve_host = "127.0.0.1";
  int serve_port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Run the trajectory editor backend");
  serve_cmd->add_option("--project-dir", serve_dir)->required();
  serve_cmd->add_option("--port", serve_port)->capture_default_str();
  serve_cmd->add_option("--host", serve_host)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
    if (gen_cmd->parsed()) {
      const auto set = generate(gen);
      emit(gen.out, write_trajectory_json(set), out);
      return kExitOk;
    }
  } catch (const CLI::CallForHelp&) {
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    out << sub->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitRuntime;
  }

  if (inj_cmd->parsed()) return inject(inj, err);
  if (inspect_cmd->parsed()) return inspect(inspect_path, out, err);
  if (aug_cmd->parsed()) return run_augment(aug, out, err);
  if (eval_cmd->parsed()) return run_eval(ev, out, err);
  if (init_cmd->parsed()) return run_init(init, err);
  if (serve_cmd->parsed()) return run_serve(serve_dir, serve_host, serve_port, out, err);
  return kExitUsage;
}

}  // namespace ati
