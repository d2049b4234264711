#pragma once

#include <filesystem>
#include <vector>

#include "lfsmlab/lfsm.hpp"

namespace lfsmlab {

/// CSV with header `index,time,value`; values in shortest round-trip form.
void write_path_csv(const SamplePath& path, const std::filesystem::path& file);

/// Little-endian binary:
///   "LFSM" | u32 version | u64 n | f64 dt | f64 hurst | f64 alpha | u64 seed | f64 values[n + 1]
/// Round-trips bit-exactly.
void write_path_binary(const SamplePath& path, const std::filesystem::path& file);

inline constexpr std::uint32_t kPathFormatVersion = 1;

SamplePath read_path_csv(const std::filesystem::path& file);
SamplePath read_path_binary(const std::filesystem::path& file);

/// Binary when the file starts with the magic, CSV otherwise.
SamplePath read_path(const std::filesystem::path& file);

/// First column of a text file, one number per line. Blank lines, lines
/// starting with '#' and a leading non-numeric header line are skipped.
std::vector<double> read_samples(const std::filesystem::path& file);

} // namespace lfsmlab
