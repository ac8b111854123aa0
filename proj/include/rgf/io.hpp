/*
 * (C) Copyright 2026 rgfvar authors.
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <filesystem>

#include "rgf/grid.hpp"
#include "rgf/obs.hpp"
#include "rgf/types.hpp"

namespace rgf {

// Binary container: one-line JSON header followed by raw payload sections in
// header order. Payloads are row-major rasters with the x index fastest
// (element (ix,iy) at offset iy*nx+ix), 64-bit little-endian IEEE floats;
// masks are one byte per point (0/1). A key,value CSV dialect is accepted for
// hand-written toy inputs.
enum class FileFormat { auto_detect, json_binary, csv };

Grid2D load_grid(const std::filesystem::path& path,
                 FileFormat format = FileFormat::auto_detect);
void save_grid(const Grid2D& grid, const std::filesystem::path& path);

ScaleField load_scale_field(const std::filesystem::path& path,
                            const Grid2D& grid,
                            FileFormat format = FileFormat::auto_detect);
void save_scale_field(const ScaleField& scales, const std::filesystem::path& path);

StateField load_state_field(const std::filesystem::path& path, const Grid2D& grid,
                            FileFormat format = FileFormat::auto_detect);
void save_state_field(const StateField& field, const std::filesystem::path& path);

// Observation CSV: rows of i,j,value,error_std with an optional header line.
ObsSet load_obs(const std::filesystem::path& path);
void save_obs(const ObsSet& obs, const std::filesystem::path& path);

}  // namespace rgf
