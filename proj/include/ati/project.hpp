#pragma once

#include <filesystem>
#include <string>

#include "ati/core.hpp"
#include "ati/evalsim.hpp"

namespace ati {

std::string injector_config_to_json(const InjectorConfig& config);
/// Missing keys keep their defaults. Throws FormatError on bad values.
InjectorConfig injector_config_from_json(std::string_view text);

/// One editing project per directory:
///   project.json       id, image file name, latent channels, injector config
///   image.png          the conditioning image
///   trajectories.json  the trajectory set (core schema)
struct ProjectMeta {
  std::string id;
  std::string image_file = "image.png";
  int latent_channels = 6;
  InjectorConfig injector;
};

class ProjectStore {
 public:
  explicit ProjectStore(std::filesystem::path dir);

  /// Creates a project with an empty trajectory set of `frame_count` frames.
  static ProjectStore create(const std::filesystem::path& dir, const ProjectMeta& meta,
                             const Image& image, int frame_count);

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path meta_path() const { return dir_ / "project.json"; }
  std::filesystem::path trajectories_path() const { return dir_ / "trajectories.json"; }
  std::filesystem::path image_path() const;

  ProjectMeta load_meta() const;
  Image load_image() const;
  std::string read_trajectories_text() const;
  TrajectorySet load_trajectories() const;

  /// Violations that would make `set` unfit for this project: validate()
  /// output plus an image-size mismatch.
  std::vector<Violation> check(const TrajectorySet& set) const;

  /// Atomic replace. Returns the canonical JSON that was written.
  std::string save_trajectories(const TrajectorySet& set) const;

 private:
  std::filesystem::path dir_;
};

}  // namespace ati
