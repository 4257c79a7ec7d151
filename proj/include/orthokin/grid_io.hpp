#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "orthokin/errors.hpp"
#include "orthokin/model.hpp"
#include "orthokin/model_json.hpp"
#include "orthokin/workspace.hpp"

namespace orthokin {

enum class GridFormat { Csv, Json, Xyz };

namespace detail {

inline ErrorCode parse_reason(const std::string& name) {
  static constexpr ErrorCode kCellReasons[] = {
      ErrorCode::OutsideCylinder,       ErrorCode::BoundarySingular,
      ErrorCode::StrokeExceeded,        ErrorCode::ConeExceeded,
      ErrorCode::SingularConfiguration,
  };
  for (ErrorCode c : kCellReasons) {
    if (name == error_name(c)) return c;
  }
  throw Error(ErrorCode::SchemaError, "unknown cell reason: " + name);
}

}  // namespace detail

// Text export. CSV carries one row per cell in storage order; XYZ is a bare
// point cloud of the feasible cell centers; JSON is the lossless format that
// import_grid_json reads back. All numbers use 9 significant digits.
inline std::string export_grid(const WorkspaceGrid& grid, GridFormat format) {
  const int n = grid.resolution;
  if (format == GridFormat::Csv || format == GridFormat::Xyz) {
    std::string out;
    if (format == GridFormat::Csv) {
      out = "x,y,z,feasible,sigma_min,sigma_max,kappa,reason\n";
    }
    for (int k = 0; k < n; ++k) {
      for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
          const GridCell& cell = grid.at(i, j, k);
          const Eigen::Vector3d p = grid.cell_center(i, j, k);
          if (format == GridFormat::Xyz) {
            if (cell.feasible) {
              out += format9(p[0]) + " " + format9(p[1]) + " " +
                     format9(p[2]) + "\n";
            }
            continue;
          }
          out += format9(p[0]) + "," + format9(p[1]) + "," + format9(p[2]);
          out += cell.feasible ? ",1," : ",0,";
          out += format9(cell.sigma_min) + "," + format9(cell.sigma_max) +
                 "," + format9(cell.kappa) + ",";
          if (!cell.feasible) out += error_name(cell.reason);
          out += "\n";
        }
      }
    }
    return out;
  }

  nlohmann::ordered_json j;
  j["bounds"]["lo"] = {snap9(grid.bounds.lo[0]), snap9(grid.bounds.lo[1]),
                       snap9(grid.bounds.lo[2])};
  j["bounds"]["hi"] = {snap9(grid.bounds.hi[0]), snap9(grid.bounds.hi[1]),
                       snap9(grid.bounds.hi[2])};
  j["resolution"] = grid.resolution;
  nlohmann::ordered_json cells = nlohmann::ordered_json::array();
  for (int k = 0; k < n; ++k) {
    for (int jj = 0; jj < n; ++jj) {
      for (int i = 0; i < n; ++i) {
        const GridCell& cell = grid.at(i, jj, k);
        const Eigen::Vector3d p = grid.cell_center(i, jj, k);
        nlohmann::ordered_json jc;
        jc["x"] = snap9(p[0]);
        jc["y"] = snap9(p[1]);
        jc["z"] = snap9(p[2]);
        jc["feasible"] = cell.feasible;
        if (cell.feasible) {
          jc["sigma_min"] = snap9(cell.sigma_min);
          jc["sigma_max"] = snap9(cell.sigma_max);
          jc["kappa"] = snap9(cell.kappa);
        } else {
          jc["sigma_min"] = nullptr;
          jc["sigma_max"] = nullptr;
          jc["kappa"] = nullptr;
          jc["reason"] = std::string(error_name(cell.reason));
        }
        cells.push_back(std::move(jc));
      }
    }
  }
  j["cells"] = std::move(cells);
  return j.dump(2) + "\n";
}

// Read back a JSON grid export. Coordinates are recomputed from bounds and
// resolution, so only classification and conditioning data are taken from
// the cell records.
inline WorkspaceGrid import_grid_json(const std::string& text) {
  const nlohmann::json j = detail::parse_json(text);
  if (!j.is_object() || !j.contains("bounds") || !j.contains("resolution") ||
      !j.contains("cells")) {
    throw Error(ErrorCode::SchemaError,
                "grid needs bounds, resolution and cells");
  }
  WorkspaceGrid grid;
  const auto& jb = j.at("bounds");
  if (!jb.is_object()) {
    throw Error(ErrorCode::SchemaError, "bounds must be an object");
  }
  grid.bounds.lo = detail::require_vec3(jb, "lo");
  grid.bounds.hi = detail::require_vec3(jb, "hi");
  detail::require_box(grid.bounds);
  if (!j.at("resolution").is_number_integer()) {
    throw Error(ErrorCode::SchemaError, "resolution must be an integer");
  }
  grid.resolution = j.at("resolution").get<int>();
  if (grid.resolution < 2) {
    throw Error(ErrorCode::BadResolution, "resolution must be >= 2");
  }

  const auto& jc = j.at("cells");
  const size_t expect = static_cast<size_t>(grid.resolution) *
                        grid.resolution * grid.resolution;
  if (!jc.is_array() || jc.size() != expect) {
    throw Error(ErrorCode::SchemaError,
                "cells must hold resolution^3 records");
  }
  grid.cells.resize(expect);
  for (size_t idx = 0; idx < expect; ++idx) {
    const auto& rec = jc[idx];
    if (!rec.is_object() || !rec.contains("feasible") ||
        !rec.at("feasible").is_boolean()) {
      throw Error(ErrorCode::SchemaError, "bad cell record");
    }
    GridCell& cell = grid.cells[idx];
    cell.feasible = rec.at("feasible").get<bool>();
    if (cell.feasible) {
      cell.sigma_min = detail::require_number(rec, "sigma_min");
      cell.sigma_max = detail::require_number(rec, "sigma_max");
      cell.kappa = detail::require_number(rec, "kappa");
    } else {
      if (!rec.contains("reason") || !rec.at("reason").is_string()) {
        throw Error(ErrorCode::SchemaError, "infeasible cell needs a reason");
      }
      cell.reason = detail::parse_reason(rec.at("reason").get<std::string>());
    }
  }
  return grid;
}

}  // namespace orthokin
