#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>
#include <sstream>

#include "polygrowth/cayley.hpp"
#include "polygrowth/error.hpp"

namespace polygrowth {

namespace {

std::vector<Coord> parse_ints(std::string_view text, char sep) {
  std::vector<Coord> out;
  while (!text.empty()) {
    auto cut = text.find(sep);
    auto token = text.substr(0, cut);
    Coord value{};
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size())
      throw InvalidArgument("malformed element key component '" + std::string(token) + "'");
    out.push_back(value);
    if (cut == std::string_view::npos) break;
    text.remove_prefix(cut + 1);
  }
  return out;
}

std::string join_ints(ElementView values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(values[i]);
  }
  return out;
}

// Z^d, generator 2i = +e_i and 2i+1 = -e_i.
class LatticeModel final : public GroupModel {
 public:
  explicit LatticeModel(int d) : d_(d) {}

  std::string descriptor() const override { return d_ == 1 ? "Z" : "Z" + std::to_string(d_); }
  std::size_t generator_count() const override { return 2 * static_cast<std::size_t>(d_); }
  Generator inverse(Generator s) const override { return s ^ 1U; }
  std::string generator_name(Generator s) const override {
    return std::string(s % 2 ? "-" : "+") + "e" + std::to_string(s / 2 + 1);
  }
  Element identity() const override { return Element(static_cast<std::size_t>(d_), 0); }
  void multiply(ElementView g, Generator s, Element& out) const override {
    out.assign(g.begin(), g.end());
    out[s / 2] += (s % 2) ? -1 : 1;
  }
  std::string key(ElementView g) const override { return join_ints(g, ','); }
  Element parse_key(std::string_view key) const override {
    auto e = parse_ints(key, ',');
    if (e.size() != static_cast<std::size_t>(d_)) throw InvalidArgument("lattice key has wrong arity");
    return e;
  }
  std::size_t coordinate_count() const override { return static_cast<std::size_t>(d_); }
  double coordinate(ElementView g, std::size_t i) const override { return g[i]; }
  std::optional<int> lattice_dimension() const override { return d_; }

 private:
  int d_;
};

// Upper unitriangular [[1,a,c],[0,1,b],[0,0,1]] stored as (a,b,c).
// Generators: 0 = x, 1 = x^-1, 2 = y, 3 = y^-1.
class HeisenbergModel final : public GroupModel {
 public:
  std::string descriptor() const override { return "H3"; }
  std::size_t generator_count() const override { return 4; }
  Generator inverse(Generator s) const override { return s ^ 1U; }
  std::string generator_name(Generator s) const override {
    static const char* names[] = {"x", "x^-1", "y", "y^-1"};
    return names[s];
  }
  Element identity() const override { return {0, 0, 0}; }
  void multiply(ElementView g, Generator s, Element& out) const override {
    out.assign(g.begin(), g.end());
    switch (s) {
      case 0: out[0] += 1; break;
      case 1: out[0] -= 1; break;
      case 2: out[1] += 1; out[2] += g[0]; break;
      default: out[1] -= 1; out[2] -= g[0]; break;
    }
  }
  std::string key(ElementView g) const override { return join_ints(g, ','); }
  Element parse_key(std::string_view key) const override {
    auto e = parse_ints(key, ',');
    if (e.size() != 3) throw InvalidArgument("Heisenberg key needs three entries");
    return e;
  }
  std::size_t coordinate_count() const override { return 2; }
  double coordinate(ElementView g, std::size_t i) const override { return g[i]; }
};

// Reduced words in F_k; letter 2i = a_i, 2i+1 = a_i^-1.
class FreeModel final : public GroupModel {
 public:
  explicit FreeModel(int k) : k_(k) {}

  std::string descriptor() const override { return "F" + std::to_string(k_); }
  std::size_t generator_count() const override { return 2 * static_cast<std::size_t>(k_); }
  Generator inverse(Generator s) const override { return s ^ 1U; }
  std::string generator_name(Generator s) const override { return std::string(1, letter(s)); }
  Element identity() const override { return {}; }
  void multiply(ElementView g, Generator s, Element& out) const override {
    if (!g.empty() && static_cast<Generator>(g.back()) == inverse(s)) {
      out.assign(g.begin(), g.end() - 1);
    } else {
      out.assign(g.begin(), g.end());
      out.push_back(static_cast<Coord>(s));
    }
  }
  std::string key(ElementView g) const override {
    if (g.empty()) return ".";
    std::string out;
    for (auto c : g) out += letter(static_cast<Generator>(c));
    return out;
  }
  Element parse_key(std::string_view key) const override {
    if (key == ".") return {};
    Element e;
    for (char c : key) {
      int s = -1;
      if (c >= 'a' && c < 'a' + k_) s = 2 * (c - 'a');
      if (c >= 'A' && c < 'A' + k_) s = 2 * (c - 'A') + 1;
      if (s < 0) throw InvalidArgument("free-group key has foreign letter");
      if (!e.empty() && static_cast<Generator>(e.back()) == inverse(static_cast<Generator>(s)))
        throw InvalidArgument("free-group key is not reduced");
      e.push_back(s);
    }
    return e;
  }
  std::size_t coordinate_count() const override { return static_cast<std::size_t>(k_); }
  double coordinate(ElementView g, std::size_t i) const override {
    double sum = 0;
    for (auto c : g)
      if (static_cast<std::size_t>(c) / 2 == i) sum += (c % 2) ? -1 : 1;
    return sum;
  }

 private:
  char letter(Generator s) const {
    return static_cast<char>((s % 2 ? 'A' : 'a') + static_cast<int>(s / 2));
  }
  int k_;
};

// Z/2 wr Z as (cursor, sorted lit lamp positions).  0 = t, 1 = t^-1, 2 = a.
class LamplighterModel final : public GroupModel {
 public:
  std::string descriptor() const override { return "lamplighter"; }
  std::size_t generator_count() const override { return 3; }
  Generator inverse(Generator s) const override { return s == 2 ? 2 : (s ^ 1U); }
  std::string generator_name(Generator s) const override {
    static const char* names[] = {"t", "t^-1", "a"};
    return names[s];
  }
  Element identity() const override { return {0}; }
  void multiply(ElementView g, Generator s, Element& out) const override {
    out.assign(g.begin(), g.end());
    if (s == 0) {
      out[0] += 1;
    } else if (s == 1) {
      out[0] -= 1;
    } else {
      auto cursor = g[0];
      auto it = std::lower_bound(out.begin() + 1, out.end(), cursor);
      if (it != out.end() && *it == cursor)
        out.erase(it);
      else
        out.insert(it, cursor);
    }
  }
  std::string key(ElementView g) const override {
    return std::to_string(g[0]) + ";" + (g.size() > 1 ? join_ints(g.subspan(1), ',') : std::string("-"));
  }
  Element parse_key(std::string_view key) const override {
    auto cut = key.find(';');
    if (cut == std::string_view::npos) throw InvalidArgument("lamplighter key needs ';'");
    auto head = parse_ints(key.substr(0, cut), ',');
    if (head.size() != 1) throw InvalidArgument("lamplighter cursor malformed");
    Element e = head;
    auto lamps = key.substr(cut + 1);
    if (lamps != "-") {
      auto lit = parse_ints(lamps, ',');
      if (!std::is_sorted(lit.begin(), lit.end()) ||
          std::adjacent_find(lit.begin(), lit.end()) != lit.end())
        throw InvalidArgument("lamplighter lamps must be strictly increasing");
      e.insert(e.end(), lit.begin(), lit.end());
    }
    return e;
  }
  std::size_t coordinate_count() const override { return 1; }
  double coordinate(ElementView g, std::size_t) const override { return g[0]; }
};

// D_inf as maps x -> eps*x + n stored as (n, eps).  0 = a: x -> -x, 1 = b: x -> 1-x.
class DihedralModel final : public GroupModel {
 public:
  std::string descriptor() const override { return "Dinf"; }
  std::size_t generator_count() const override { return 2; }
  Generator inverse(Generator s) const override { return s; }
  std::string generator_name(Generator s) const override { return s == 0 ? "a" : "b"; }
  Element identity() const override { return {0, 1}; }
  void multiply(ElementView g, Generator s, Element& out) const override {
    out.assign(g.begin(), g.end());
    out[1] = -g[1];
    if (s == 1) out[0] = g[0] + g[1];
  }
  std::string key(ElementView g) const override { return join_ints(g, ','); }
  Element parse_key(std::string_view key) const override {
    auto e = parse_ints(key, ',');
    if (e.size() != 2 || (e[1] != 1 && e[1] != -1)) throw InvalidArgument("dihedral key malformed");
    return e;
  }
  std::size_t coordinate_count() const override { return 1; }
  double coordinate(ElementView g, std::size_t) const override { return g[0]; }
};

// Z/k with generator r (and r^-1 when k > 2).
class CyclicModel final : public GroupModel {
 public:
  explicit CyclicModel(int k) : k_(k) {}

  std::string descriptor() const override { return "C" + std::to_string(k_); }
  std::size_t generator_count() const override { return k_ == 2 ? 1 : 2; }
  Generator inverse(Generator s) const override { return k_ == 2 ? 0 : (s ^ 1U); }
  std::string generator_name(Generator s) const override { return s == 0 ? "r" : "r^-1"; }
  Element identity() const override { return {0}; }
  void multiply(ElementView g, Generator s, Element& out) const override {
    int step = s == 0 ? 1 : k_ - 1;
    out.assign(1, static_cast<Coord>((g[0] + step) % k_));
  }
  std::string key(ElementView g) const override { return std::to_string(g[0]); }
  Element parse_key(std::string_view key) const override {
    auto e = parse_ints(key, ',');
    if (e.size() != 1 || e[0] < 0 || e[0] >= k_) throw InvalidArgument("cyclic key malformed");
    return e;
  }
  std::size_t coordinate_count() const override { return 1; }
  double coordinate(ElementView g, std::size_t) const override {
    return std::cos(2.0 * std::numbers::pi * g[0] / k_);
  }

 private:
  int k_;
};

std::optional<int> suffix_int(std::string_view name, std::string_view prefix) {
  if (!name.starts_with(prefix)) return std::nullopt;
  auto rest = name.substr(prefix.size());
  int value{};
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), value);
  if (rest.empty() || ec != std::errc{} || ptr != rest.data() + rest.size()) return std::nullopt;
  return value;
}

}  // namespace

Element GroupModel::evaluate(std::span<const Generator> word) const {
  Element g = identity();
  Element next;
  for (auto s : word) {
    if (s >= generator_count()) throw InvalidArgument("generator index out of range");
    multiply(g, s, next);
    std::swap(g, next);
  }
  return g;
}

std::string GroupModel::canonicalize(std::span<const Generator> word) const {
  return key(evaluate(word));
}

std::vector<std::string> supported_models() {
  return {"Z", "Z<d> (d=1..6)", "H3", "F<k> (k=1..8)", "lamplighter", "Dinf", "C<k> (k=2..64)"};
}

ModelPtr make_model(std::string_view name) {
  if (name == "Z") return std::make_shared<LatticeModel>(1);
  if (name == "H3") return std::make_shared<HeisenbergModel>();
  if (name == "lamplighter") return std::make_shared<LamplighterModel>();
  if (name == "Dinf") return std::make_shared<DihedralModel>();
  if (auto d = suffix_int(name, "Z"); d && *d >= 1 && *d <= 6) return std::make_shared<LatticeModel>(*d);
  if (auto k = suffix_int(name, "F"); k && *k >= 1 && *k <= 8) return std::make_shared<FreeModel>(*k);
  if (auto k = suffix_int(name, "C"); k && *k >= 2 && *k <= 64) return std::make_shared<CyclicModel>(*k);

  std::ostringstream msg;
  msg << "unknown group model '" << name << "'; supported:";
  for (const auto& m : supported_models()) msg << ' ' << m;
  throw InvalidArgument(msg.str());
}

}  // namespace polygrowth
