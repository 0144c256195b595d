#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

namespace asekit::cli {

// Flat record printed either as key=value lines or as one JSON object.
class Record {
 public:
  using Value = std::variant<double, long long, bool, std::string>;

  Record& add(std::string key, Value value, std::string unit = {});
  void write(std::ostream& out, bool json) const;

 private:
  struct Field {
    std::string key;
    Value value;
    std::string unit;
  };
  std::vector<Field> fields_;
};

std::string format_double(double v);

}  // namespace asekit::cli
