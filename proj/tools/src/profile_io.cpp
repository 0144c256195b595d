#include <algorithm>
#include <cerrno>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <string>

#include "asekit/errors.hpp"
#include "asekit_cli/app.hpp"

namespace asekit::cli {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

double parse_number(const std::string& text, std::string_view what) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw DomainError(std::string(what) + ": not a number: '" + text + "'");
  }
  return v;
}

}  // namespace

BsPowerProfile parse_profile(std::istream& in, std::string_view source) {
  static const char* const kKeys[] = {"p_dbm", "p_watts", "eta", "pc", "ppre", "p0"};
  std::map<std::string, double> values;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string here = std::string(source) + ":" + std::to_string(lineno);
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw DomainError(here + ": expected key = value");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string val = trim(std::string_view(body).substr(eq + 1));
    if (std::find(std::begin(kKeys), std::end(kKeys), key) == std::end(kKeys)) {
      throw DomainError(here + ": unknown profile field '" + key + "'");
    }
    if (values.count(key)) throw DomainError(here + ": duplicate field '" + key + "'");
    values[key] = parse_number(val, here);
  }

  const bool has_dbm = values.count("p_dbm") > 0;
  const bool has_watts = values.count("p_watts") > 0;
  if (has_dbm == has_watts) {
    throw DomainError(std::string(source) + ": give exactly one of p_dbm and p_watts");
  }
  for (const char* key : {"eta", "pc", "ppre", "p0"}) {
    if (!values.count(key)) {
      throw DomainError(std::string(source) + ": missing field '" + key + "'");
    }
  }
  BsPowerProfile p;
  p.p_watts = has_dbm ? dbm_to_watts(values["p_dbm"]) : values["p_watts"];
  p.eta = values["eta"];
  p.pc = values["pc"];
  p.ppre = values["ppre"];
  p.p0 = values["p0"];
  p.validate();
  return p;
}

BsPowerProfile load_profile(std::string_view name_or_path) {
  const auto names = builtin_profile_names();
  if (std::find(names.begin(), names.end(), name_or_path) != names.end()) {
    return builtin_profile(name_or_path);
  }
  std::ifstream in{std::string(name_or_path)};
  if (!in) {
    throw DomainError("profile '" + std::string(name_or_path) +
                      "' is neither a built-in name nor a readable file");
  }
  return parse_profile(in, name_or_path);
}

}  // namespace asekit::cli
