#include "ati/trajectory_io.hpp"

#include <fstream>
#include <sstream>

#include "ati/file_util.hpp"
#include "json.hpp"

namespace ati {

namespace {

using ordered_json = nlohmann::ordered_json;

const ordered_json& require(const ordered_json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw FormatError(std::string("missing key \"") + key + "\"");
  return *it;
}

int require_int(const ordered_json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number_integer()) throw FormatError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

double require_number(const ordered_json& obj, const char* key) {
  const auto& v = require(obj, key);
  if (!v.is_number()) throw FormatError(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

TrackPoint parse_point(const ordered_json& j) {
  if (j.is_null()) return TrackPoint::hidden();
  if (!j.is_object()) throw FormatError("track point must be an object or null");
  const auto& vis = require(j, "visible");
  if (!vis.is_boolean()) throw FormatError("\"visible\" must be a boolean");
  return {Point2{require_number(j, "x"), require_number(j, "y")}, vis.get<bool>()};
}

}  // namespace

TrajectorySet parse_trajectory_json(std::string_view text) {
  ordered_json doc;
  try {
    doc = ordered_json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw FormatError("trajectory document must be an object");

  const int version = require_int(doc, "version");
  if (version != kTrajectoryFormatVersion) {
    throw FormatError("unsupported trajectory format version " + std::to_string(version));
  }

  TrajectorySet set;
  set.width = require_int(doc, "width");
  set.height = require_int(doc, "height");
  set.frame_count = require_int(doc, "frame_count");

  const auto& tracks = require(doc, "tracks");
  if (!tracks.is_array()) throw FormatError("\"tracks\" must be an array");
  set.tracks.reserve(tracks.size());
  for (const auto& jt : tracks) {
    if (!jt.is_object()) throw FormatError("track must be an object");
    Trajectory traj;
    const auto& id = require(jt, "id");
    if (!id.is_string()) throw FormatError("track \"id\" must be a string");
    traj.id = id.get<std::string>();
    const auto& points = require(jt, "points");
    if (!points.is_array()) throw FormatError("track \"points\" must be an array");
    if (static_cast<long>(points.size()) != set.frame_count) {
      throw FormatError("track \"" + traj.id + "\" has " + std::to_string(points.size()) +
                        " points, expected " + std::to_string(set.frame_count));
    }
    traj.points.reserve(points.size());
    for (const auto& jp : points) traj.points.push_back(parse_point(jp));
    set.tracks.push_back(std::move(traj));
  }
  return set;
}

std::string write_trajectory_json(const TrajectorySet& set) {
  ordered_json doc;
  doc["version"] = kTrajectoryFormatVersion;
  doc["width"] = set.width;
  doc["height"] = set.height;
  doc["frame_count"] = set.frame_count;
  auto& tracks = doc["tracks"] = ordered_json::array();
  for (const auto& traj : set.tracks) {
    ordered_json jt;
    jt["id"] = traj.id;
    auto& points = jt["points"] = ordered_json::array();
    for (const auto& tp : traj.points) {
      if (!tp.pos) {
        points.push_back(nullptr);
        continue;
      }
      ordered_json jp;
      jp["x"] = tp.pos->x;
      jp["y"] = tp.pos->y;
      jp["visible"] = tp.visible;
      points.push_back(std::move(jp));
    }
    tracks.push_back(std::move(jt));
  }
  return doc.dump() + "\n";
}

TrajectorySet load_trajectory_file(const std::filesystem::path& path) {
  return parse_trajectory_json(read_file(path));
}

void save_trajectory_file(const std::filesystem::path& path, const TrajectorySet& set) {
  write_file_atomic(path, write_trajectory_json(set));
}

}  // namespace ati
