#include "output.hpp"

#include <cstdio>
#include <ostream>

#include <nlohmann/json.hpp>

namespace asekit::cli {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

Record& Record::add(std::string key, Value value, std::string unit) {
  fields_.push_back({std::move(key), std::move(value), std::move(unit)});
  return *this;
}

void Record::write(std::ostream& out, bool json) const {
  if (json) {
    nlohmann::ordered_json obj;
    nlohmann::ordered_json units = nlohmann::ordered_json::object();
    for (const auto& f : fields_) {
      std::visit([&](const auto& v) { obj[f.key] = v; }, f.value);
      if (!f.unit.empty()) units[f.key] = f.unit;
    }
    if (!units.empty()) obj["units"] = units;
    out << obj.dump(2) << '\n';
    return;
  }
  for (const auto& f : fields_) {
    out << f.key << '=';
    std::visit(
        [&](const auto& v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>) {
            out << format_double(v);
          } else if constexpr (std::is_same_v<T, bool>) {
            out << (v ? "true" : "false");
          } else {
            out << v;
          }
        },
        f.value);
    out << '\n';
  }
}

}  // namespace asekit::cli
