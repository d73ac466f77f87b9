#include "ati/service.hpp"

#include <cmath>
#include <mutex>
#include <shared_mutex>

#include "httplib.h"
#include "json.hpp"

#include "ati/augment.hpp"
#include "ati/file_util.hpp"
#include "ati/injector.hpp"
#include "ati/png_io.hpp"
#include "ati/project.hpp"
#include "ati/trajectory_io.hpp"
#include "ati/trajgen.hpp"

namespace ati {

namespace {

using json = nlohmann::json;

constexpr const char* kJson = "application/json";

/// Maps to an HTTP status in the handler wrapper.
struct HttpError {
  int status;
  std::string message;
  json detail = nullptr;
};

json violations_json(const std::vector<Violation>& violations) {
  json out = json::array();
  for (const auto& v : violations) {
    json j;
    j["track_id"] = v.track_id;
    j["frame"] = v.frame ? json(*v.frame) : json(nullptr);
    j["message"] = v.message;
    out.push_back(std::move(j));
  }
  return out;
}

json parse_body(const httplib::Request& req) {
  try {
    auto body = json::parse(req.body);
    if (!body.is_object()) throw HttpError{400, "request body must be a JSON object"};
    return body;
  } catch (const json::parse_error& e) {
    throw HttpError{400, std::string("malformed JSON: ") + e.what()};
  }
}

Point2 point_param(const json& body, const char* key, Point2 fallback) {
  if (!body.contains(key)) return fallback;
  const auto& v = body.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw HttpError{400, std::string("\"") + key + "\" must be [x, y]"};
  }
  return {v[0].get<double>(), v[1].get<double>()};
}

double number_param(const json& body, const char* key, double fallback) {
  if (!body.contains(key)) return fallback;
  const auto& v = body.at(key);
  if (!v.is_number()) throw HttpError{400, std::string("\"") + key + "\" must be a number"};
  return v.get<double>();
}

int frame_param(const httplib::Request& req, int frames) {
  if (!req.has_param("frame")) throw HttpError{400, "missing frame parameter"};
  const auto text = req.get_param_value("frame");
  int t = 0;
  try {
    std::size_t used = 0;
    t = std::stoi(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
  } catch (const std::exception&) {
    throw HttpError{400, "frame must be an integer"};
  }
  if (t < 0 || t >= frames) throw HttpError{404, "latent frame " + text + " out of range"};
  return t;
}

CameraPath custom_path(const json& body, int frames, Point2 center) {
  const Point2 pivot = point_param(body, "pivot", center);
  if (!body.contains("frames")) {
    return linear_path(frames, pivot, number_param(body, "scale_rate", 0.0),
                       number_param(body, "angular_rate", 0.0),
                       point_param(body, "velocity", {}));
  }
  const auto& list = body.at("frames");
  if (!list.is_array()) throw HttpError{400, "\"frames\" must be an array"};
  CameraPath path{pivot, {}};
  for (const auto& f : list) {
    if (!f.is_object()) throw HttpError{400, "camera frame must be an object"};
    SimilarityTransform tf{number_param(f, "scale", 1.0), number_param(f, "rotation", 0.0),
                           point_param(f, "translation", {})};
    if (!(tf.scale > 0.0)) throw HttpError{400, "camera scale must be positive"};
    path.frames.push_back(tf);
  }
  if (static_cast<int>(path.frames.size()) != frames) {
    throw HttpError{400, "camera path length must equal frame_count"};
  }
  return path;
}

}  // namespace

struct EditorService::Impl {
  explicit Impl(std::filesystem::path dir) : store(std::move(dir)) {
    // The library default adds SO_REUSEPORT, which lets a second server
    // share a busy port instead of failing.
    server.set_socket_options([](socket_t sock) {
      int yes = 1;
      setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof yes);
    });
    routes();
  }

  ProjectStore store;
  httplib::Server server;
  std::shared_mutex lock;

  using Handler = std::function<void(const httplib::Request&, httplib::Response&)>;

  static Handler guarded(Handler inner) {
    return [inner = std::move(inner)](const httplib::Request& req, httplib::Response& res) {
      auto fail = [&](int status, const std::string& message, const json& detail = nullptr) {
        json body;
        body["error"] = message;
        if (!detail.is_null()) body["violations"] = detail;
        res.status = status;
        res.set_content(body.dump(), kJson);
      };
      try {
        inner(req, res);
      } catch (const HttpError& e) {
        fail(e.status, e.message, e.detail);
      } catch (const ValidationError& e) {
        fail(422, e.what(), violations_json(e.violations()));
      } catch (const FormatError& e) {
        fail(400, e.what());
      } catch (const std::invalid_argument& e) {
        fail(400, e.what());
      } catch (const std::exception& e) {
        fail(500, e.what());
      }
    };
  }

  /// Validates against the project, persists, and answers with the stored JSON.
  void commit(const TrajectorySet& set, httplib::Response& res) {
    auto violations = store.check(set);
    if (!violations.empty()) {
      throw HttpError{422, "trajectory set violates invariants", violations_json(violations)};
    }
    res.set_content(store.save_trajectories(set), kJson);
  }

  ConditionTensor condition() {
    const auto meta = store.load_meta();
    const auto grid = pseudo_encode(store.load_image(), meta.injector.spatial_stride,
                                    meta.latent_channels);
    return compose_condition(store.load_trajectories(), grid, meta.injector);
  }

  void routes() {
    server.Get("/api/project", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock guard(lock);
      const auto meta = store.load_meta();
      const auto img = store.load_image();
      const auto set = store.load_trajectories();
      const auto& cfg = meta.injector;
      json j;
      j["id"] = meta.id;
      j["image"] = {{"file", meta.image_file}, {"width", img.width()}, {"height", img.height()}};
      j["frame_count"] = set.frame_count;
      j["track_count"] = set.tracks.size();
      j["latent"] = {{"frames", latent_frame_count(set.frame_count, cfg)},
                     {"height", (img.height() + cfg.spatial_stride - 1) / cfg.spatial_stride},
                     {"width", (img.width() + cfg.spatial_stride - 1) / cfg.spatial_stride},
                     {"channels", meta.latent_channels}};
      j["injector"] = json::parse(injector_config_to_json(cfg));
      res.set_content(j.dump(), kJson);
    }));

    server.Get("/api/image", guarded([this](const httplib::Request&, httplib::Response& res) {
      std::shared_lock guard(lock);
      res.set_content(read_file(store.image_path()), "image/png");
    }));

    server.Get("/api/trajectories",
               guarded([this](const httplib::Request&, httplib::Response& res) {
                 std::shared_lock guard(lock);
                 res.set_content(store.read_trajectories_text(), kJson);
               }));

    server.Put("/api/trajectories",
               guarded([this](const httplib::Request& req, httplib::Response& res) {
                 const auto set = parse_trajectory_json(req.body);
                 std::unique_lock guard(lock);
                 commit(set, res);
               }));

    server.Post("/api/transform", guarded([this](const httplib::Request& req,
                                                 httplib::Response& res) {
      const auto body = parse_body(req);
      std::unique_lock guard(lock);
      const auto set = store.load_trajectories();

      std::vector<std::string> ids;
      if (body.contains("track_ids")) {
        const auto& list = body.at("track_ids");
        if (!list.is_array()) throw HttpError{400, "\"track_ids\" must be an array"};
        for (const auto& id : list) {
          if (!id.is_string()) throw HttpError{400, "track ids must be strings"};
          ids.push_back(id.get<std::string>());
        }
      } else {
        for (const auto& t : set.tracks) ids.push_back(t.id);
      }
      for (const auto& id : ids) {
        const bool known = std::any_of(set.tracks.begin(), set.tracks.end(),
                                       [&](const Trajectory& t) { return t.id == id; });
        if (!known) throw HttpError{404, "unknown track id " + id};
      }

      const Point2 center{set.width / 2.0, set.height / 2.0};
      const auto type = body.value("type", std::string{});
      TrajectorySet out;
      if (type == "pan") {
        out = apply_camera(set, pan_path(set.frame_count, point_param(body, "velocity", {})), ids);
      } else if (type == "zoom") {
        const Point2 c = point_param(body, "center", center);
        const double speed = number_param(body, "speed", 1.0);
        out = set;
        for (auto& t : out.tracks) {
          if (std::find(ids.begin(), ids.end(), t.id) != ids.end()) {
            t = add_radial_motion(t, c, speed);
          }
        }
      } else if (type == "custom") {
        out = apply_camera(set, custom_path(body, set.frame_count, center), ids);
      } else {
        throw HttpError{400, "unknown transform type \"" + type + "\""};
      }
      commit(out, res);
    }));

    server.Get("/api/preview/mask", guarded([this](const httplib::Request& req,
                                                   httplib::Response& res) {
      std::shared_lock guard(lock);
      const auto cond = condition();
      const int t = frame_param(req, cond.latent_frames());
      std::vector<std::uint8_t> pixels;
      pixels.reserve(static_cast<std::size_t>(cond.height()) * cond.width());
      for (int i = 0; i < cond.height(); ++i) {
        for (int j = 0; j < cond.width(); ++j) {
          pixels.push_back(static_cast<std::uint8_t>(std::lround(255.0 * cond.weight(t, i, j))));
        }
      }
      res.set_content(encode_png_gray(cond.width(), cond.height(), pixels), "image/png");
    }));

    server.Get("/api/preview/condition", guarded([this](const httplib::Request& req,
                                                        httplib::Response& res) {
      std::shared_lock guard(lock);
      const auto cond = condition();
      const int t = frame_param(req, cond.latent_frames());
      json j;
      j["frame"] = t;
      j["height"] = cond.height();
      j["width"] = cond.width();
      j["channels"] = cond.channels();
      auto& values = j["values"] = json::array();
      for (int i = 0; i < cond.height(); ++i) {
        for (int k = 0; k < cond.width(); ++k) {
          for (double v : cond.pixel(t, i, k)) values.push_back(v);
        }
      }
      res.set_content(j.dump(), kJson);
    }));

    server.Post("/api/augment/tail_dropout", guarded([this](const httplib::Request& req,
                                                            httplib::Response& res) {
      const auto body = parse_body(req);
      AugmentConfig config;
      config.dropout_prob = number_param(body, "prob", config.dropout_prob);
      if (body.contains("seed")) {
        if (!body.at("seed").is_number_unsigned()) throw HttpError{400, "seed must be unsigned"};
        config.seed = body.at("seed").get<std::uint64_t>();
      }
      config.per_clip = body.value("per_clip", false);
      std::unique_lock guard(lock);
      commit(tail_dropout(store.load_trajectories(), config), res);
    }));
  }
};

EditorService::EditorService(std::filesystem::path project_dir)
    : impl_(std::make_unique<Impl>(std::move(project_dir))) {
  // Fail early on an unreadable project.
  impl_->store.load_meta();
  impl_->store.load_trajectories();
}

EditorService::~EditorService() { stop(); }

int EditorService::bind(const std::string& host, int port) {
  if (port == 0) return impl_->server.bind_to_any_port(host);
  return impl_->server.bind_to_port(host, port) ? port : -1;
}

bool EditorService::run() { return impl_->server.listen_after_bind(); }

void EditorService::stop() {
  if (impl_) impl_->server.stop();
}

}  // namespace ati
