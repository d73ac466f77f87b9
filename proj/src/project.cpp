#include "ati/project.hpp"

#include "ati/file_util.hpp"
#include "ati/png_io.hpp"
#include "ati/trajectory_io.hpp"
#include "json.hpp"

namespace ati {

namespace {

using ordered_json = nlohmann::ordered_json;

ordered_json config_json(const InjectorConfig& config) {
  ordered_json j;
  j["sigma_mode"] = to_string(config.sigma_mode);
  j["sigma"] = config.sigma;
  j["spatial_stride"] = config.spatial_stride;
  j["temporal_stride"] = config.temporal_stride;
  j["composition"] = to_string(config.composition);
  j["blend"] = to_string(config.blend);
  return j;
}

InjectorConfig config_from(const ordered_json& j) {
  InjectorConfig config;
  try {
    if (j.contains("sigma_mode")) config.sigma_mode = parse_sigma_mode(j.at("sigma_mode").get<std::string>());
    if (j.contains("sigma")) config.sigma = j.at("sigma").get<double>();
    if (j.contains("spatial_stride")) config.spatial_stride = j.at("spatial_stride").get<int>();
    if (j.contains("temporal_stride")) config.temporal_stride = j.at("temporal_stride").get<int>();
    if (j.contains("composition")) config.composition = parse_composition(j.at("composition").get<std::string>());
    if (j.contains("blend")) config.blend = parse_blend(j.at("blend").get<std::string>());
    check_config(config);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad injector config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError(std::string("bad injector config: ") + e.what());
  }
  return config;
}

}  // namespace

std::string injector_config_to_json(const InjectorConfig& config) {
  return config_json(config).dump(2) + "\n";
}

InjectorConfig injector_config_from_json(std::string_view text) {
  try {
    return config_from(ordered_json::parse(text.begin(), text.end()));
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
}

ProjectStore::ProjectStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

ProjectStore ProjectStore::create(const std::filesystem::path& dir, const ProjectMeta& meta,
                                  const Image& image, int frame_count) {
  check_config(meta.injector);
  std::filesystem::create_directories(dir);
  ProjectStore store(dir);

  ordered_json j;
  j["id"] = meta.id;
  j["image"] = meta.image_file;
  j["latent_channels"] = meta.latent_channels;
  j["injector"] = config_json(meta.injector);
  write_file_atomic(store.meta_path(), j.dump(2) + "\n");
  write_file_atomic(dir / meta.image_file, encode_png(image));
  store.save_trajectories(TrajectorySet{image.width(), image.height(), frame_count, {}});
  return store;
}

std::filesystem::path ProjectStore::image_path() const { return dir_ / load_meta().image_file; }

ProjectMeta ProjectStore::load_meta() const {
  const auto text = read_file(meta_path());
  ProjectMeta meta;
  try {
    const auto j = ordered_json::parse(text);
    meta.id = j.value("id", std::string{});
    meta.image_file = j.value("image", std::string{"image.png"});
    meta.latent_channels = j.value("latent_channels", 6);
    if (j.contains("injector")) meta.injector = config_from(j.at("injector"));
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad project.json: ") + e.what());
  }
  if (meta.image_file.find('/') != std::string::npos) {
    throw FormatError("project image must live in the project directory");
  }
  return meta;
}

Image ProjectStore::load_image() const { return load_png(image_path()); }

std::string ProjectStore::read_trajectories_text() const { return read_file(trajectories_path()); }

TrajectorySet ProjectStore::load_trajectories() const {
  return parse_trajectory_json(read_trajectories_text());
}

std::vector<Violation> ProjectStore::check(const TrajectorySet& set) const {
  auto violations = validate(set);
  const auto img = load_image();
  if (set.width != img.width() || set.height != img.height()) {
    violations.push_back({"", std::nullopt,
                          "trajectory set is " + std::to_string(set.width) + "x" +
                              std::to_string(set.height) + " but the image is " +
                              std::to_string(img.width()) + "x" + std::to_string(img.height())});
  }
  return violations;
}

std::string ProjectStore::save_trajectories(const TrajectorySet& set) const {
  auto text = write_trajectory_json(set);
  write_file_atomic(trajectories_path(), text);
  return text;
}

}  // namespace ati
