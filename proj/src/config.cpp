#include "spinsub/config.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace spinsub {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::Config, "config field '" + field + "': " + what);
}

std::int64_t as_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) bad(field, "expected an integer, got " + v.dump());
  return v.get<std::int64_t>();
}

IntMatrix parse_q(const json& doc, int m) {
  if (!doc.contains("Q")) bad("Q", "missing");
  const auto& q = doc["Q"];
  std::vector<std::int64_t> flat;
  if (q.is_number()) {
    flat.push_back(as_int(q, "Q"));
  } else if (q.is_array()) {
    for (const auto& row : q) {
      if (row.is_array()) {
        if (static_cast<int>(row.size()) != m) bad("Q", "each row needs " + std::to_string(m) + " entries");
        for (const auto& e : row) flat.push_back(as_int(e, "Q"));
      } else {
        flat.push_back(as_int(row, "Q"));
      }
    }
  } else {
    bad("Q", "expected a number or an array");
  }
  if (flat.size() != static_cast<std::size_t>(m) * m) {
    bad("Q", "expected " + std::to_string(m * m) + " entries for m = " + std::to_string(m));
  }
  return IntMatrix(m, m, flat);
}

std::vector<IntVec> parse_digits(const json& doc, int m) {
  if (!doc.contains("digits") || !doc["digits"].is_array()) bad("digits", "missing or not an array");
  std::vector<IntVec> out;
  for (const auto& d : doc["digits"]) {
    if (d.is_array()) {
      if (static_cast<int>(d.size()) != m) bad("digits", "digit " + d.dump() + " must have " + std::to_string(m) + " coordinates");
      IntVec v;
      for (const auto& e : d) v.push_back(as_int(e, "digits"));
      out.push_back(v);
    } else {
      if (m != 1) bad("digits", "scalar digits need m = 1");
      out.push_back({as_int(d, "digits")});
    }
  }
  if (out.empty()) bad("digits", "empty digit set");
  return out;
}

int parse_m(const json& doc) {
  if (doc.contains("m")) {
    const auto m = as_int(doc["m"], "m");
    if (m < 1) bad("m", "dimension must be positive");
    return static_cast<int>(m);
  }
  if (doc.contains("Q") && doc["Q"].is_number()) return 1;
  bad("m", "missing");
}

DigitSystem parse_digit_system(const json& doc, std::size_t max_cells) {
  const int m = parse_m(doc);
  return DigitSystem::create(parse_q(doc, m), parse_digits(doc, m), max_cells);
}

GroupElement parse_element(const json& v, const AbelianGroup& g, const std::string& field) {
  GroupElement e;
  if (v.is_array()) {
    for (const auto& x : v) e.push_back(static_cast<int>(as_int(x, field)));
  } else {
    e.push_back(static_cast<int>(as_int(v, field)));
  }
  if (static_cast<int>(e.size()) != g.rank()) bad(field, "entry " + v.dump() + " does not match group_orders");
  for (int i = 0; i < g.rank(); ++i) {
    e[i] %= g.orders()[i];
    if (e[i] < 0) e[i] += g.orders()[i];
  }
  return e;
}

SpinSystem parse_spin(const json& doc, std::size_t max_cells) {
  auto ds = parse_digit_system(doc, max_cells);
  if (!doc.contains("group_orders") || !doc["group_orders"].is_array()) bad("group_orders", "missing or not an array");
  std::vector<int> orders;
  for (const auto& o : doc["group_orders"]) orders.push_back(static_cast<int>(as_int(o, "group_orders")));
  AbelianGroup g = [&] {
    try {
      return AbelianGroup(orders);
    } catch (const Error& e) {
      bad("group_orders", e.what());
    }
  }();
  if (!doc.contains("W") || !doc["W"].is_array()) bad("W", "missing or not an array");
  const auto& w = doc["W"];
  const int L = ds.size();
  if (static_cast<int>(w.size()) != L) bad("W", "expected " + std::to_string(L) + " rows, one per digit");
  std::vector<GroupElement> entries;
  for (const auto& row : w) {
    if (!row.is_array() || static_cast<int>(row.size()) != L) bad("W", "every row needs " + std::to_string(L) + " entries");
    for (const auto& e : row) entries.push_back(parse_element(e, g, "W"));
  }
  return {std::move(ds), std::move(g), SpinMatrix(L, std::move(entries))};
}

Substitution parse_qubit(const json& doc, std::size_t max_cells) {
  auto ds = parse_digit_system(doc, max_cells);
  if (!doc.contains("alphabet") || !doc["alphabet"].is_array()) bad("alphabet", "missing or not an array");
  std::vector<std::string> alphabet;
  for (const auto& a : doc["alphabet"]) {
    if (!a.is_string()) bad("alphabet", "letters must be strings");
    alphabet.push_back(a.get<std::string>());
  }
  if (!doc.contains("rules") || !doc["rules"].is_object()) bad("rules", "missing or not an object");
  const int L = ds.size();
  std::vector<int> table(alphabet.size() * static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < alphabet.size(); ++i) {
    const auto& name = alphabet[i];
    if (!doc["rules"].contains(name)) bad("rules", "no rule for letter '" + name + "'");
    const auto& r = doc["rules"][name];
    std::vector<std::string> word;
    if (r.is_string()) {
      for (char ch : r.get<std::string>()) word.emplace_back(1, ch);
    } else if (r.is_array()) {
      for (const auto& x : r) word.push_back(x.get<std::string>());
    } else {
      bad("rules", "rule for '" + name + "' must be a string or a list");
    }
    if (static_cast<int>(word.size()) != L) bad("rules", "rule for '" + name + "' needs one letter per digit");
    for (int d = 0; d < L; ++d) {
      auto it = std::find(alphabet.begin(), alphabet.end(), word[d]);
      if (it == alphabet.end()) bad("rules", "unknown letter '" + word[d] + "'");
      table[i * L + d] = static_cast<int>(it - alphabet.begin());
    }
  }
  return {std::move(ds), std::move(alphabet), std::move(table)};
}

json resolve(const json& ref, const std::string& base_dir) {
  if (ref.is_string()) {
    const auto path = std::filesystem::path(base_dir) / ref.get<std::string>();
    std::ifstream f(path);
    if (!f) bad("factors", "cannot read '" + path.string() + "'");
    return json::parse(f);
  }
  return ref;
}

}  // namespace

const SpinSystem& SystemConfig::spin_system() const {
  if (!spin) throw Error(ErrorCode::NoGroupStructure, "no group structure: '" + name + "' is a qubit substitution");
  return *spin;
}

SystemConfig parse_config(const json& doc, const std::string& base_dir) {
  if (!doc.is_object()) throw Error(ErrorCode::Config, "config must be a JSON object");
  SystemConfig c;
  c.name = doc.value("name", std::string("system"));
  c.kind = doc.value("kind", std::string("spin"));
  if (doc.contains("caps")) {
    const auto& caps = doc["caps"];
    if (caps.contains("max_cells")) c.max_cells = static_cast<std::size_t>(as_int(caps["max_cells"], "caps.max_cells"));
  }
  c.assert_aperiodic = doc.value("assert_aperiodic", false);
  if (doc.contains("tolerances")) {
    const auto& t = doc["tolerances"];
    c.measure_tolerance = t.value("measure", c.measure_tolerance);
    c.se_factor = t.value("se_factor", c.se_factor);
  }
  if (doc.contains("lyapunov")) {
    const auto& l = doc["lyapunov"];
    if (l.contains("N")) {
      c.lyapunov_n.clear();
      for (const auto& n : l["N"]) c.lyapunov_n.push_back(static_cast<int>(as_int(n, "lyapunov.N")));
    }
    if (l.contains("grid")) c.lyapunov_grid = static_cast<long>(as_int(l["grid"], "lyapunov.grid"));
    if (l.contains("norm")) {
      const auto n = l["norm"].get<std::string>();
      if (n == "frobenius") c.lyapunov_norm = MatrixNorm::Frobenius;
      else if (n == "spectral") c.lyapunov_norm = MatrixNorm::Spectral;
      else bad("lyapunov.norm", "expected 'frobenius' or 'spectral'");
    }
  }
  if (doc.contains("palette")) {
    const auto& p = doc["palette"];
    if (!p.contains("colors") || !p["colors"].is_array()) bad("palette.colors", "expected a list of #rrggbb strings");
    for (const auto& col : p["colors"]) c.palette.push_back(Palette::parse(col.get<std::string>()));
  }

  if (c.kind == "spin") {
    c.spin.emplace(parse_spin(doc, c.max_cells));
    c.qubit.emplace(c.spin->as_substitution());
  } else if (c.kind == "qubit") {
    c.qubit.emplace(parse_qubit(doc, c.max_cells));
  } else if (c.kind == "kronecker") {
    if (!doc.contains("factors") || !doc["factors"].is_array() || doc["factors"].size() != 2) {
      bad("factors", "expected two factor systems");
    }
    const auto f1 = parse_config(resolve(doc["factors"][0], base_dir), base_dir);
    const auto f2 = parse_config(resolve(doc["factors"][1], base_dir), base_dir);
    const int m = parse_m(doc);
    c.spin.emplace(kronecker_compose(f1.spin_system(), f2.spin_system(), parse_q(doc, m), parse_digits(doc, m)));
    c.qubit.emplace(c.spin->as_substitution());
    c.kind = "spin";
  } else {
    bad("kind", "expected 'spin', 'qubit' or 'kronecker'");
  }
  if (!c.palette.empty() && static_cast<int>(c.palette.size()) != c.qubit->alphabet_size()) {
    bad("palette.colors", "needs one color per letter (" + std::to_string(c.qubit->alphabet_size()) + ")");
  }
  return c;
}

SystemConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::Config, "cannot read config '" + path + "'");
  json doc;
  try {
    doc = json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, "config '" + path + "' is not valid JSON: " + e.what());
  }
  const auto dir = std::filesystem::path(path).parent_path().string();
  return parse_config(doc, dir.empty() ? "." : dir);
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  const auto dots = text.find("..");
  try {
    if (dots != std::string::npos) {
      const int a = std::stoi(text.substr(0, dots));
      const int b = std::stoi(text.substr(dots + 2));
      if (b < a) throw Error(ErrorCode::InvalidArgument, "empty range '" + text + "'");
      for (int i = a; i <= b; ++i) out.push_back(i);
      return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse integer list '" + text + "'");
  }
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "empty integer list");
  return out;
}

std::vector<int> parse_exponents(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  try {
    while (std::getline(ss, item, ',')) out.push_back(std::stoi(item));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::InvalidArgument, "cannot parse character exponents '" + text + "'");
  }
  return out;
}

}  // namespace spinsub
