#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "asekit/errors.hpp"
#include "asekit/parallel.hpp"
#include "asekit/rate_model.hpp"
#include "asekit_cli/app.hpp"
#include "output.hpp"

namespace asekit::cli {
namespace {

double to_double(std::string_view text, std::string_view what) {
  std::string s(text);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw DomainError(std::string(what) + ": not a number: '" + s + "'");
  }
  return v;
}

int as_int(double v, std::string_view name) {
  const double r = std::round(v);
  if (std::fabs(v - r) > 1e-9) {
    throw DomainError(std::string(name) + " must be an integer here, got " + format_double(v));
  }
  return static_cast<int>(r);
}

bool needs_profile(SweepQuantity q) { return q == SweepQuantity::nec || q == SweepQuantity::ee; }

std::string axis_header(std::string_view name) {
  if (name == "lambda_b") return "lambda_b[BS/km^2]";
  if (name == "t_target") return "t_target[nats/s/Hz/km^2]";
  return std::string(name);
}

struct Point {
  double m = 0.0;
  double k = 0.0;
  double lambda_b = 1.0;
  double t_target = 1.0;
  double alpha = 4.0;
};

Point resolve(const SweepRequest& req, double axis_value) {
  std::map<std::string, double> p = req.fixed;
  p[std::string(to_string(req.axis))] = axis_value;
  Point pt;
  if (!p.count("M")) throw DomainError("sweep needs M (fixed or as the axis)");
  pt.m = p["M"];
  if (p.count("K") && p.count("u")) throw DomainError("give K or u, not both");
  if (p.count("K")) {
    pt.k = p["K"];
  } else if (p.count("u")) {
    pt.k = p["u"] * pt.m;
  } else {
    throw DomainError("sweep needs K or u (fixed or as the axis)");
  }
  if (p.count("lambda_b")) pt.lambda_b = p["lambda_b"];
  if (p.count("t_target")) pt.t_target = p["t_target"];
  if (p.count("alpha")) pt.alpha = p["alpha"];
  return pt;
}

double evaluate_point(const SweepRequest& req, const BsPowerProfile& profile, double x) {
  const Point pt = resolve(req, x);
  NetworkConfig cfg{pt.lambda_b, pt.m, pt.k, pt.alpha};
  cfg.validate();
  switch (req.quantity) {
    case SweepQuantity::rate_exact:
      return mean_rate_exact(pt.m, as_int(pt.k, "K"), pt.alpha).mean_rate;
    case SweepQuantity::rate_lb:
      return mean_rate_lower_bound(pt.m, pt.k, pt.alpha).mean_rate;
    case SweepQuantity::ase_exact:
      return ase_exact(cfg);
    case SweepQuantity::ase_lb:
      return ase_lower_bound(cfg);
    case SweepQuantity::nec: {
      if (!(pt.t_target > 0.0)) throw DomainError("t_target must be positive");
      const int m = as_int(pt.m, "M");
      const int k = as_int(pt.k, "K");
      return network_energy(required_density(pt.t_target, m, k, pt.alpha), profile, m, k);
    }
    case SweepQuantity::ee:
      return energy_efficiency(profile, as_int(pt.m, "M"), as_int(pt.k, "K"), pt.alpha);
  }
  return 0.0;
}

}  // namespace

SweepQuantity parse_quantity(std::string_view text) {
  for (auto q : {SweepQuantity::rate_exact, SweepQuantity::rate_lb, SweepQuantity::ase_exact,
                 SweepQuantity::ase_lb, SweepQuantity::nec, SweepQuantity::ee}) {
    if (to_string(q) == text) return q;
  }
  throw DomainError("unknown quantity '" + std::string(text) + "'");
}

SweepAxis parse_axis(std::string_view text) {
  for (auto a : {SweepAxis::M, SweepAxis::K, SweepAxis::u, SweepAxis::lambda_b,
                 SweepAxis::t_target}) {
    if (to_string(a) == text) return a;
  }
  throw DomainError("unknown axis '" + std::string(text) + "'");
}

std::string_view to_string(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::rate_exact: return "rate_exact";
    case SweepQuantity::rate_lb: return "rate_lb";
    case SweepQuantity::ase_exact: return "ase_exact";
    case SweepQuantity::ase_lb: return "ase_lb";
    case SweepQuantity::nec: return "nec";
    case SweepQuantity::ee: return "ee";
  }
  return "?";
}

std::string_view to_string(SweepAxis a) {
  switch (a) {
    case SweepAxis::M: return "M";
    case SweepAxis::K: return "K";
    case SweepAxis::u: return "u";
    case SweepAxis::lambda_b: return "lambda_b";
    case SweepAxis::t_target: return "t_target";
  }
  return "?";
}

std::string_view unit_of(SweepQuantity q) {
  switch (q) {
    case SweepQuantity::rate_exact:
    case SweepQuantity::rate_lb: return "nats/s/Hz";
    case SweepQuantity::ase_exact:
    case SweepQuantity::ase_lb: return "nats/s/Hz/km^2";
    case SweepQuantity::nec: return "W/km^2";
    case SweepQuantity::ee: return "nats/s/Hz/W";
  }
  return "";
}

SweepRange parse_range(std::string_view text) {
  const auto c1 = text.find(':');
  const auto c2 = c1 == std::string_view::npos ? c1 : text.find(':', c1 + 1);
  if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos) {
    throw DomainError("range must look like start:stop:step, got '" + std::string(text) + "'");
  }
  SweepRange r;
  r.start = to_double(text.substr(0, c1), "range start");
  r.stop = to_double(text.substr(c1 + 1, c2 - c1 - 1), "range stop");
  r.step = to_double(text.substr(c2 + 1), "range step");
  if (!(r.step > 0.0)) throw DomainError("range step must be positive");
  if (!(r.start < r.stop)) throw DomainError("range start must be below stop");
  return r;
}

std::map<std::string, double> parse_fixed(std::string_view text) {
  std::map<std::string, double> out;
  while (!text.empty()) {
    const auto comma = text.find(',');
    const std::string_view item = text.substr(0, comma);
    const auto eq = item.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw DomainError("fixed parameters must look like name=value, got '" + std::string(item) +
                        "'");
    }
    const std::string key(item.substr(0, eq));
    if (out.count(key)) throw DomainError("fixed parameter '" + key + "' given twice");
    out[key] = to_double(item.substr(eq + 1), key);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

void validate(const SweepRequest& req) {
  if (!(req.range.step > 0.0)) throw DomainError("range step must be positive");
  if (!(req.range.start < req.range.stop)) throw DomainError("range start must be below stop");
  static const char* const kKnown[] = {"M", "K", "u", "lambda_b", "t_target", "alpha"};
  for (const auto& [key, value] : req.fixed) {
    if (std::find(std::begin(kKnown), std::end(kKnown), key) == std::end(kKnown)) {
      throw DomainError("unknown fixed parameter '" + key + "'");
    }
    if (key == to_string(req.axis)) {
      throw DomainError("'" + key + "' is the sweep axis and cannot also be fixed");
    }
    if (!std::isfinite(value)) throw DomainError("fixed parameter '" + key + "' is not finite");
  }
}

std::vector<double> axis_points(const SweepRange& r) {
  const double span = (r.stop - r.start) / r.step;
  if (span > 1e6) throw DomainError("sweep has more than a million points");
  const auto n = static_cast<std::size_t>(std::floor(span + 1e-9)) + 1;
  std::vector<double> xs(n);
  // start + i*step rather than accumulation keeps grid values exact for integer steps.
  for (std::size_t i = 0; i < n; ++i) xs[i] = r.start + static_cast<double>(i) * r.step;
  return xs;
}

std::vector<SweepRow> evaluate_sweep(const SweepRequest& req) {
  validate(req);
  const BsPowerProfile profile =
      needs_profile(req.quantity) ? load_profile(req.profile) : BsPowerProfile{};
  const std::vector<double> xs = axis_points(req.range);
  std::vector<SweepRow> rows(xs.size());
  parallel_for(
      xs.size(), [&](std::size_t i) { rows[i] = {xs[i], evaluate_point(req, profile, xs[i])}; },
      req.threads);
  return rows;
}

void write_sweep(std::ostream& out, const SweepRequest& req, const std::vector<SweepRow>& rows) {
  const std::string axis(to_string(req.axis));
  const std::string quantity(to_string(req.quantity));
  const std::string unit(unit_of(req.quantity));
  std::map<std::string, double> fixed = req.fixed;
  if (!fixed.count("alpha")) fixed["alpha"] = 4.0;

  if (req.format == SweepFormat::json) {
    nlohmann::ordered_json doc;
    doc["quantity"] = quantity;
    doc["unit"] = unit;
    doc["axis"] = axis;
    doc["fixed"] = fixed;
    if (needs_profile(req.quantity)) doc["profile"] = req.profile;
    auto& arr = doc["rows"] = nlohmann::ordered_json::array();
    for (const auto& r : rows) arr.push_back({{axis, r.axis_value}, {quantity, r.value}});
    out << doc.dump(2) << '\n';
    return;
  }

  out << axis_header(axis);
  for (const auto& [key, value] : fixed) out << ',' << axis_header(key);
  if (needs_profile(req.quantity)) out << ",profile";
  out << ',' << quantity << '[' << unit << "]\n";
  for (const auto& r : rows) {
    out << format_double(r.axis_value);
    for (const auto& [key, value] : fixed) out << ',' << format_double(value);
    if (needs_profile(req.quantity)) out << ',' << req.profile;
    out << ',' << format_double(r.value) << '\n';
  }
}

std::string resolve_output_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty()) return path;
  const fs::path p(path);
  const char* dir = std::getenv("ASEKIT_OUTPUT_DIR");
  if (p.is_absolute() || dir == nullptr || *dir == '\0') return path;
  return (fs::path(dir) / p).string();
}

}  // namespace asekit::cli
