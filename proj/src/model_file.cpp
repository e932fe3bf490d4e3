#include "normsol/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace normsol {

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValueDoc KeyValueDoc::parse_string(const std::string& text) {
  KeyValueDoc doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw SpecError("model file line " + std::to_string(lineno) +
                      ": expected `key = value`");
    doc.entries_.emplace_back(trim(line.substr(0, eq)),
                              trim(line.substr(eq + 1)));
  }
  return doc;
}

KeyValueDoc KeyValueDoc::parse_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw SpecError("cannot open model file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_string(ss.str());
}

bool KeyValueDoc::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

std::string KeyValueDoc::get(const std::string& key,
                             const std::string& fallback) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  return fallback;
}

std::vector<std::string> KeyValueDoc::get_all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k == key) out.push_back(v);
  return out;
}

std::vector<double> KeyValueDoc::parse_tuple(const std::string& value) {
  std::string s = trim(value);
  if (s.size() < 2 || s.front() != '(' || s.back() != ')')
    throw SpecError("expected a parenthesized tuple, got `" + value + "`");
  s = s.substr(1, s.size() - 2);
  std::vector<double> out;
  std::istringstream is(s);
  std::string tok;
  while (std::getline(is, tok, ',')) {
    tok = trim(tok);
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size())
      throw SpecError("bad number `" + tok + "` in tuple `" + value + "`");
    out.push_back(v);
  }
  return out;
}

NonlinearityModel parse_model(const KeyValueDoc& doc) {
  const std::string family = doc.get("family");
  if (family.empty()) throw SpecError("model file: missing `family`");

  if (family == "logpower") return make_logpower_example();

  const int N = std::stoi(doc.get("N", "3"));

  if (family == "multipower") {
    MultiPowerSpec spec;
    auto parse_terms = [](const std::vector<std::string>& rows,
                          std::vector<PowerTerm>& out) {
      for (const auto& row : rows) {
        const auto t = KeyValueDoc::parse_tuple(row);
        if (t.size() != 3)
          throw SpecError("term `" + row +
                          "`: expected (coef, exp_num, exp_den)");
        PowerTerm term;
        term.coef = t[0];
        term.q = Exponent::rational(std::llround(t[1]), std::llround(t[2]));
        out.push_back(term);
      }
    };
    parse_terms(doc.get_all("sub"), spec.subcritical);
    parse_terms(doc.get_all("sup"), spec.supercritical);
    return make_multipower(spec, N);
  }

  if (family == "tabulated") {
    std::vector<double> ts, Fs;
    for (const auto& row : doc.get_all("point")) {
      const auto t = KeyValueDoc::parse_tuple(row);
      if (t.size() != 2)
        throw SpecError("point `" + row + "`: expected (t, F)");
      ts.push_back(t[0]);
      Fs.push_back(t[1]);
    }
    const bool odd = doc.get("odd", "true") == "true";
    return make_tabulated(std::move(ts), std::move(Fs), N, odd);
  }

  throw SpecError("unknown model family `" + family + "`");
}

NonlinearityModel load_model(const std::string& path) {
  return parse_model(KeyValueDoc::parse_file(path));
}

}  // namespace normsol
