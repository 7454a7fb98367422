#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "polygrowth/cayley.hpp"

namespace polygrowth {

inline constexpr int kBallFormatVersion = 1;

/// FNV-1a digest of the model descriptor and generator names, as hex.
std::string model_hash(const GroupModel& model);

/**
 * Ball cache format (text, one record per line):
 *   {"E":..,"R":..,"V":..,"format_version":1,"model":"Z2","model_hash":".."}
 *   <canonical key> <norm>          (V lines, BFS order)
 *   <u-index> <v-index> <generator> (E lines)
 */
void write_ball(std::ostream& out, const BallComplex& ball);
BallPtr read_ball(std::istream& in);

void save_ball(const std::filesystem::path& path, const BallComplex& ball);
/// Raises VersionMismatch on a foreign format_version and CorruptFile on any
/// malformed or truncated content.
BallPtr load_ball(const std::filesystem::path& path);

/// Header fields only, without reading the body.
struct BallHeader {
  int format_version = 0;
  std::string model;
  std::string model_hash;
  int radius = 0;
  std::size_t vertices = 0;
  std::size_t edges = 0;
};
BallHeader read_ball_header(std::istream& in);

}  // namespace polygrowth
