#pragma once

#include <filesystem>
#include <memory>
#include <string>

namespace ati {

/// HTTP backend of the trajectory editor, serving one project directory.
///
///   GET  /api/project                  metadata and image/latent dimensions
///   GET  /api/image                    the project image (PNG)
///   GET  /api/trajectories             trajectory JSON
///   PUT  /api/trajectories             replace the set; 422 lists violations
///   POST /api/transform                {"type": "pan"|"zoom"|"custom", ...}
///   GET  /api/preview/mask?frame=t     weight channel of latent frame t (PNG)
///   GET  /api/preview/condition?frame=t  latent frame t of the condition (JSON)
///   POST /api/augment/tail_dropout     {"prob", "seed", "per_clip"}
///
/// Mutations are serialized by an exclusive lock and persisted with an
/// atomic rename; reads share the lock.
class EditorService {
 public:
  explicit EditorService(std::filesystem::path project_dir);
  ~EditorService();
  EditorService(const EditorService&) = delete;
  EditorService& operator=(const EditorService&) = delete;

  /// Binds the listening socket. Port 0 picks a free port. Returns the bound
  /// port, or -1 when binding failed.
  int bind(const std::string& host, int port);

  /// Serves until stop(). Requires a successful bind().
  bool run();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace ati
