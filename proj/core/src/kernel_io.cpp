#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "unroll/io.hpp"

namespace unroll {

void write_kernel(const std::filesystem::path& path, const Kernel& k) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open kernel file '" + path.string() + "' for writing");
  out << "size " << k.size() << '\n';
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int y = 0; y < k.size(); ++y) {
    for (int x = 0; x < k.size(); ++x) {
      if (x) out << ' ';
      out << k.at(y, x);
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing kernel file '" + path.string() + "'");
}

Kernel read_kernel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open kernel file '" + path.string() + "'");
  const auto fail = [&](const std::string& why) {
    return KernelFormatError("malformed kernel file '" + path.string() + "': " + why);
  };

  std::string header;
  if (!std::getline(in, header)) throw fail("empty file");
  std::istringstream hs(header);
  std::string keyword;
  int size = 0;
  if (!(hs >> keyword >> size) || keyword != "size") throw fail("first line must be 'size N'");
  std::string rest;
  if (hs >> rest) throw fail("trailing text on size line");
  if (size < 1 || size % 2 == 0) throw fail("size must be odd and positive");

  std::vector<double> taps;
  taps.reserve(static_cast<std::size_t>(size) * static_cast<std::size_t>(size));
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (rows == size) throw fail("more than " + std::to_string(size) + " rows");
    std::istringstream ls(line);
    std::string token;
    int cols = 0;
    while (ls >> token) {
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(token, &used);
      } catch (const std::exception&) {
        throw fail("row " + std::to_string(rows + 1) + ": '" + token + "' is not a number");
      }
      if (used != token.size() || !std::isfinite(v)) {
        throw fail("row " + std::to_string(rows + 1) + ": '" + token + "' is not a number");
      }
      taps.push_back(v);
      ++cols;
    }
    if (cols != size) {
      throw fail("row " + std::to_string(rows + 1) + " has " + std::to_string(cols) +
                 " values, expected " + std::to_string(size));
    }
    ++rows;
  }
  if (rows != size) throw fail("expected " + std::to_string(size) + " rows, found " + std::to_string(rows));
  try {
    return Kernel(size, std::move(taps));
  } catch (const std::invalid_argument& e) {
    throw fail(e.what());
  }
}

}  // namespace unroll
