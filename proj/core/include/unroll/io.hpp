#pragma once

#include <filesystem>
#include <stdexcept>

#include "unroll/image.hpp"

namespace unroll {

/// File could not be read or written (missing, unreadable, not a PNG, ...).
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Kernel file exists but does not follow the "size N" + N rows format.
class KernelFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Reads an 8-bit PNG as grayscale (1 channel) or RGB (3 channels); alpha is dropped.
/// Samples map linearly from [0,255] to [0,1].
Image read_png(const std::filesystem::path& path);

/// Writes a 1- or 3-channel image as 8-bit PNG. Values are clamped to [0,1] and
/// rounded to the nearest code.
void write_png(const std::filesystem::path& path, const Image& img);

/// Plain-text kernel: first line "size N", then N rows of N whitespace-separated decimals.
/// Taps are written with 17 significant digits so a round trip is lossless.
void write_kernel(const std::filesystem::path& path, const Kernel& k);
Kernel read_kernel(const std::filesystem::path& path);

}  // namespace unroll
