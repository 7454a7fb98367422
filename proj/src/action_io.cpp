#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "polygrowth/energy.hpp"
#include "polygrowth/error.hpp"

namespace polygrowth {

namespace {

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<double> parse_numbers(const std::string& line, std::size_t expected, const std::string& what) {
  std::istringstream in(line);
  std::vector<double> out;
  std::string token;
  while (in >> token) {
    std::size_t used = 0;
    double x;
    try {
      x = std::stod(token, &used);
    } catch (const std::exception&) {
      throw CorruptFile("non-numeric entry '" + token + "' in " + what);
    }
    if (used != token.size()) throw CorruptFile("non-numeric entry '" + token + "' in " + what);
    out.push_back(x);
  }
  if (out.size() != expected)
    throw CorruptFile(what + " has " + std::to_string(out.size()) + " entries, expected " + std::to_string(expected));
  return out;
}

}  // namespace

void write_action(std::ostream& out, const AffineAction& action) {
  nlohmann::json header = {
      {"format_version", kActionFormatVersion},
      {"group", action.model().descriptor()},
      {"n", action.dimension()},
      {"generators", action.generator_count()},
  };
  if (!action.relators().empty()) header["relators"] = action.relators();
  out << header.dump() << '\n';
  const auto n = static_cast<Eigen::Index>(action.dimension());
  for (Generator s = 0; s < action.generator_count(); ++s) {
    const auto& rho = action.rho(s);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < n; ++j) out << (i || j ? " " : "") << format_number(rho(i, j));
    out << '\n';
    for (Eigen::Index i = 0; i < n; ++i) out << (i ? " " : "") << format_number(action.t(s)[i]);
    out << '\n';
  }
}

AffineAction read_action(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw CorruptFile("action file is empty");
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(line);
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("action header is not valid JSON: ") + e.what());
  }
  int version = 0;
  std::string group;
  std::size_t n = 0, k = 0;
  std::vector<std::vector<Generator>> relators;
  try {
    version = header.at("format_version").get<int>();
    if (version != kActionFormatVersion)
      throw VersionMismatch("action file format_version " + std::to_string(version) + ", expected " +
                            std::to_string(kActionFormatVersion));
    group = header.at("group").get<std::string>();
    n = header.at("n").get<std::size_t>();
    k = header.at("generators").get<std::size_t>();
    if (header.contains("relators")) relators = header.at("relators").get<std::vector<std::vector<Generator>>>();
  } catch (const nlohmann::json::exception& e) {
    throw CorruptFile(std::string("action header incomplete: ") + e.what());
  }
  if (n == 0 || n > 4096) throw CorruptFile("action dimension out of range");
  auto model = make_model(group);
  if (model->generator_count() != k)
    throw CorruptFile("action lists " + std::to_string(k) + " generators but " + group + " has " +
                      std::to_string(model->generator_count()));

  const auto dim = static_cast<Eigen::Index>(n);
  std::vector<Eigen::MatrixXd> rho;
  std::vector<Eigen::VectorXd> t;
  for (std::size_t s = 0; s < k; ++s) {
    const std::string label = "generator " + std::to_string(s);
    if (!std::getline(in, line)) throw CorruptFile("action file truncated at " + label + " matrix");
    auto m = parse_numbers(line, n * n, label + " matrix");
    if (!std::getline(in, line)) throw CorruptFile("action file truncated at " + label + " vector");
    auto v = parse_numbers(line, n, label + " vector");
    rho.push_back(Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(m.data(), dim, dim));
    t.push_back(Eigen::Map<Eigen::VectorXd>(v.data(), dim));
  }
  return AffineAction(model, std::move(rho), std::move(t), std::move(relators));
}

void save_action(const std::string& path, const AffineAction& action) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open " + path + " for writing");
  write_action(out, action);
  if (!out) throw Error("failed writing " + path);
}

AffineAction load_action(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open action file " + path);
  return read_action(in);
}

}  // namespace polygrowth
