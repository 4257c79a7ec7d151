#pragma once

#include <cmath>
#include <limits>
#include <string>

#include <nlohmann/json.hpp>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"

namespace orthokin {

namespace detail {

inline nlohmann::json parse_json(const std::string& text) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

inline double require_number(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::SchemaError, std::string("missing key: ") + key);
  }
  const auto& v = obj.at(key);
  if (!v.is_number()) {
    throw Error(ErrorCode::SchemaError, std::string(key) + " must be a number");
  }
  return v.get<double>();
}

inline Eigen::Vector3d require_vec3(const nlohmann::json& obj, const char* key) {
  if (!obj.contains(key)) {
    throw Error(ErrorCode::SchemaError, std::string("missing key: ") + key);
  }
  const auto& v = obj.at(key);
  if (!v.is_array() || v.size() != 3) {
    throw Error(ErrorCode::SchemaError,
                std::string(key) + " must be an array of 3 numbers");
  }
  Eigen::Vector3d out;
  for (int i = 0; i < 3; ++i) {
    if (!v[i].is_number()) {
      throw Error(ErrorCode::SchemaError,
                  std::string(key) + " must be an array of 3 numbers");
    }
    out[i] = v[i].get<double>();
  }
  return out;
}

// Degree representative of r that converts back to r bitwise. rad2deg alone
// can land 1 ulp off after the double rounding; every value produced by
// deg2rad has an exact representative within 2 ulps, so a short neighbor
// search restores the file round trip.
inline double exact_deg(double r) {
  const double d = rad2deg(r);
  if (deg2rad(d) == r) return d;
  double up = d, dn = d;
  for (int k = 0; k < 2; ++k) {
    up = std::nextafter(up, std::numeric_limits<double>::infinity());
    if (deg2rad(up) == r) return up;
    dn = std::nextafter(dn, -std::numeric_limits<double>::infinity());
    if (deg2rad(dn) == r) return dn;
  }
  return d;
}

}  // namespace detail

// Geometry file schema (all keys required, none else allowed; angles in
// degrees, lengths in the model's length unit):
//
//   {
//     "leg_length": 1.0,
//     "stroke": [0.2, 2.0],
//     "parallelogram_half_cone_deg": 60,
//     "wrist_pitch_yaw_limit_deg": 45,
//     "variant": "3T2R1R"
//   }
//
// The stroke interval applies to all three legs alike; per-leg strokes exist
// only programmatically (sizing reports produce them).
inline DeviceGeometry load_geometry(const std::string& json_text) {
  const nlohmann::json j = detail::parse_json(json_text);
  if (!j.is_object()) {
    throw Error(ErrorCode::SchemaError, "geometry must be a JSON object");
  }
  static constexpr const char* kKeys[] = {
      "leg_length", "stroke", "parallelogram_half_cone_deg",
      "wrist_pitch_yaw_limit_deg", "variant"};
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* k : kKeys) known = known || item.key() == k;
    if (!known) {
      throw Error(ErrorCode::SchemaError, "unknown key: " + item.key());
    }
  }

  DeviceGeometry g;
  g.leg_length = detail::require_number(j, "leg_length");

  if (!j.contains("stroke")) {
    throw Error(ErrorCode::SchemaError, "missing key: stroke");
  }
  const auto& stroke = j.at("stroke");
  if (!stroke.is_array() || stroke.size() != 2 || !stroke[0].is_number() ||
      !stroke[1].is_number()) {
    throw Error(ErrorCode::SchemaError,
                "stroke must be an array of 2 numbers");
  }
  g.stroke_min.setConstant(stroke[0].get<double>());
  g.stroke_max.setConstant(stroke[1].get<double>());

  g.half_cone_angle =
      deg2rad(detail::require_number(j, "parallelogram_half_cone_deg"));
  g.wrist_limit =
      deg2rad(detail::require_number(j, "wrist_pitch_yaw_limit_deg"));

  if (!j.contains("variant")) {
    throw Error(ErrorCode::SchemaError, "missing key: variant");
  }
  const auto& var = j.at("variant");
  if (!var.is_string()) {
    throw Error(ErrorCode::SchemaError, "variant must be a string");
  }
  const std::string name = var.get<std::string>();
  if (name == "3T2R1R") {
    g.variant = DeviceVariant::ThreeT_TwoR_OneR;
  } else if (name == "3T3R") {
    g.variant = DeviceVariant::ThreeT_ThreeR;
  } else {
    throw Error(ErrorCode::SchemaError, "variant must be 3T2R1R or 3T3R");
  }

  validate_geometry(g);
  return g;
}

// Inverse of load_geometry. Geometries with per-leg stroke differences have
// no file representation and are rejected.
inline std::string serialize_geometry(const DeviceGeometry& g) {
  validate_geometry(g);
  for (int i = 1; i < 3; ++i) {
    if (g.stroke_min[i] != g.stroke_min[0] ||
        g.stroke_max[i] != g.stroke_max[0]) {
      throw Error(ErrorCode::SchemaError,
                  "per-leg strokes have no file representation");
    }
  }
  nlohmann::ordered_json j;
  j["leg_length"] = g.leg_length;
  j["stroke"] = {g.stroke_min[0], g.stroke_max[0]};
  j["parallelogram_half_cone_deg"] = detail::exact_deg(g.half_cone_angle);
  j["wrist_pitch_yaw_limit_deg"] = detail::exact_deg(g.wrist_limit);
  j["variant"] = std::string(variant_name(g.variant));
  return j.dump(2) + "\n";
}

}  // namespace orthokin
