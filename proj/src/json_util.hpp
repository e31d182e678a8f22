#pragma once

#include <json.hpp>
#include <string>

#include "intent/error.hpp"
#include "intent/geometry.hpp"
#include "intent/gesture.hpp"
#include "intent/session.hpp"

namespace intent::detail {

using nlohmann::json;

inline json vec_to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

inline Vec3 vec_from_json(const json& j, const char* what) {
    if (!j.is_array() || j.size() != 3 || !j[0].is_number() || !j[1].is_number() || !j[2].is_number()) {
        throw InvalidInputError(std::string(what) + " must be an array of three numbers");
    }
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

inline const json& require(const json& obj, const char* key) {
    if (!obj.is_object() || !obj.contains(key)) {
        throw InvalidInputError(std::string("missing field '") + key + "'");
    }
    return obj.at(key);
}

inline double require_number(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_number()) {
        throw InvalidInputError(std::string("field '") + key + "' must be a number");
    }
    return v.get<double>();
}

inline std::string require_string(const json& obj, const char* key) {
    const json& v = require(obj, key);
    if (!v.is_string()) {
        throw InvalidInputError(std::string("field '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

inline json skeleton_to_json(const HandSkeleton& s) {
    json out = json::array();
    for (const auto& p : s.joints) {
        out.push_back(vec_to_json(p));
    }
    return out;
}

inline HandSkeleton skeleton_from_json(const json& j) {
    if (!j.is_array() || j.size() != HandSkeleton::kJoints) {
        throw InvalidInputError("hand skeleton must be an array of 21 joints");
    }
    HandSkeleton s;
    for (std::size_t k = 0; k < HandSkeleton::kJoints; ++k) {
        s.joints[k] = vec_from_json(j[k], "hand joint");
    }
    return s;
}

inline json goal_to_json(const Goal& g) {
    return json{{"id", g.id}, {"label", g.label}, {"pos", vec_to_json(g.position)}};
}

inline Goal goal_from_json(const json& j) {
    Goal g;
    g.id = require_string(j, "id");
    g.label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : g.id;
    g.position = vec_from_json(require(j, "pos"), "goal position");
    return g;
}

inline json observation_to_json(const Observation& o) {
    json rec{{"t", o.t},
             {"head_pos", vec_to_json(o.head.position)},
             {"head_dir", vec_to_json(o.head.forward)},
             {"hand_pos", vec_to_json(o.hand)}};
    if (o.joints) {
        rec["joints"] = skeleton_to_json(*o.joints);
    }
    return rec;
}

inline Observation observation_from_json(const json& rec) {
    Observation o;
    o.t = require_number(rec, "t");
    o.head.position = vec_from_json(require(rec, "head_pos"), "head_pos");
    o.head.forward = vec_from_json(require(rec, "head_dir"), "head_dir");
    o.hand = vec_from_json(require(rec, "hand_pos"), "hand_pos");
    if (rec.contains("joints")) {
        o.joints = skeleton_from_json(rec["joints"]);
    }
    return o;
}

}  // namespace intent::detail
