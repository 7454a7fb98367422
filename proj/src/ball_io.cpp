#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "json.hpp"

#include "polygrowth/ball_io.hpp"
#include "polygrowth/error.hpp"

namespace polygrowth {

std::string model_hash(const GroupModel& model) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto mix = [&](const std::string& s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    h ^= 0xff;
    h *= 0x100000001b3ULL;
  };
  mix(model.descriptor());
  for (Generator s = 0; s < model.generator_count(); ++s) mix(model.generator_name(s));
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void write_ball(std::ostream& out, const BallComplex& ball) {
  nlohmann::json header = {
      {"format_version", kBallFormatVersion},
      {"model", ball.model().descriptor()},
      {"model_hash", model_hash(ball.model())},
      {"R", ball.radius()},
      {"V", ball.size()},
      {"E", ball.edges().size()},
  };
  out << header.dump() << '\n';
  for (std::size_t v = 0; v < ball.size(); ++v) out << ball.key(v) << ' ' << ball.norm(v) << '\n';
  for (const auto& e : ball.edges()) out << e.u << ' ' << e.v << ' ' << e.generator << '\n';
}

BallHeader read_ball_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptFile("ball file is empty");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("ball header is not valid JSON: ") + e.what());
  }
  BallHeader h;
  try {
    h.format_version = header.at("format_version").get<int>();
    if (h.format_version != kBallFormatVersion)
      throw VersionMismatch("ball file format_version " + std::to_string(h.format_version) +
                            ", expected " + std::to_string(kBallFormatVersion));
    h.model = header.at("model").get<std::string>();
    h.model_hash = header.at("model_hash").get<std::string>();
    h.radius = header.at("R").get<int>();
    h.vertices = header.at("V").get<std::size_t>();
    h.edges = header.at("E").get<std::size_t>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("ball header incomplete: ") + e.what());
  }
  return h;
}

BallPtr read_ball(std::istream& in) {
  auto header = read_ball_header(in);
  ModelPtr model;
  try {
    model = make_model(header.model);
  } catch (const InvalidArgument& e) {
    throw CorruptFile(e.what());
  }
  if (model_hash(*model) != header.model_hash) throw CorruptFile("model hash does not match descriptor");

  std::vector<Coord> arena;
  std::vector<std::uint32_t> offsets{0};
  std::vector<std::int32_t> norms;
  norms.reserve(header.vertices);
  std::string line;
  for (std::size_t v = 0; v < header.vertices; ++v) {
    if (!std::getline(in, line)) throw CorruptFile("ball file truncated in vertex records");
    std::istringstream rec(line);
    std::string key;
    std::int32_t norm = -1;
    std::string extra;
    if (!(rec >> key >> norm) || (rec >> extra) || norm < 0 || norm > header.radius)
      throw CorruptFile("malformed vertex record at line " + std::to_string(v + 2));
    Element g;
    try {
      g = model->parse_key(key);
    } catch (const InvalidArgument& e) {
      throw CorruptFile(e.what());
    }
    arena.insert(arena.end(), g.begin(), g.end());
    offsets.push_back(static_cast<std::uint32_t>(arena.size()));
    norms.push_back(norm);
  }
  std::vector<Edge> edges;
  edges.reserve(header.edges);
  for (std::size_t i = 0; i < header.edges; ++i) {
    if (!std::getline(in, line)) throw CorruptFile("ball file truncated in edge records");
    std::istringstream rec(line);
    Edge e{};
    std::string extra;
    if (!(rec >> e.u >> e.v >> e.generator) || (rec >> extra))
      throw CorruptFile("malformed edge record");
    edges.push_back(e);
  }
  if (std::getline(in, line) && !line.empty()) throw CorruptFile("trailing data after edge records");

  auto element = [&](std::size_t v) {
    return ElementView(arena.data() + offsets[v], offsets[v + 1] - offsets[v]);
  };
  if (norms.empty() || norms[0] != 0 || !std::ranges::equal(element(0), model->identity()))
    throw CorruptFile("first vertex is not the identity at norm 0");
  for (std::size_t v = 1; v < norms.size(); ++v)
    if (norms[v] < norms[v - 1] || norms[v] == 0) throw CorruptFile("vertex norms are not in BFS order");
  std::vector<char> has_parent(norms.size(), 0);
  has_parent[0] = 1;
  Element product;
  for (const auto& e : edges) {
    if (e.u < 0 || e.v < 0 || static_cast<std::size_t>(e.u) >= norms.size() ||
        static_cast<std::size_t>(e.v) >= norms.size() || e.generator >= model->generator_count())
      throw CorruptFile("edge references unknown vertex or generator");
    auto u = static_cast<std::size_t>(e.u), v = static_cast<std::size_t>(e.v);
    model->multiply(element(u), static_cast<Generator>(e.generator), product);
    if (!std::ranges::equal(product, element(v)) || std::abs(norms[u] - norms[v]) > 1)
      throw CorruptFile("edge record does not match the group law");
    if (norms[u] + 1 == norms[v]) has_parent[v] = 1;
    if (norms[v] + 1 == norms[u]) has_parent[u] = 1;
  }
  if (std::ranges::find(has_parent, 0) != has_parent.end())
    throw CorruptFile("vertex norm is not realised by any edge");
  try {
    return std::make_shared<const BallComplex>(std::move(model), header.radius, std::move(arena),
                                               std::move(offsets), std::move(norms), std::move(edges));
  } catch (const InvalidArgument& e) {
    throw CorruptFile(e.what());
  }
}

void save_ball(const std::filesystem::path& path, const BallComplex& ball) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot open '" + path.string() + "' for writing");
  write_ball(out, ball);
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

BallPtr load_ball(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return read_ball(in);
}

}  // namespace polygrowth
