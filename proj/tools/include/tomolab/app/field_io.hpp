#pragma once

#include <filesystem>

#include "tomolab/app/config.hpp"
#include "tomolab/forward.hpp"
#include "tomolab/model.hpp"

namespace tomolab::app {

namespace fs = std::filesystem;

// grid-csv: one header line
//   # nx=..,ny=..,h=..,origin_x=..,origin_y=..,omega=..,c0=..,support_radius=..
// then `ix,iy,re,im` per cell, ix fastest. Numbers use shortest round-trip
// formatting, so write-then-read is bit-exact.
//
// binary: `path` holds little-endian float64 re/im pairs in row-major order and
// `path` + ".json" is the sidecar with shape, dtype and metadata.
void write_field(const ScattererField& v, const fs::path& path, FieldFormat fmt);
ScattererField read_field(const fs::path& path, FieldFormat fmt);

// Amplitude csv rows are `i,j,phi,phi_prime,re,im`, i the incident index.
void write_amplitude(const AmplitudeGrid& f, const fs::path& path, FieldFormat fmt);
AmplitudeGrid read_amplitude(const fs::path& path, FieldFormat fmt);

// File name for a field dump in the given format.
std::string field_file_name(const std::string& stem, FieldFormat fmt);

void write_text(const fs::path& path, const std::string& text);

}  // namespace tomolab::app
