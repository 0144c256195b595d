#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "asekit/energy_planner.hpp"

namespace asekit::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;       // bad input, unknown flag, malformed config
inline constexpr int kExitNonConvergence = 2;

/// Entry point shared by the executable and the tests. Diagnostics go to
/// `err` as a single line.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run_command(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// A built-in profile name or the path of a flat key=value file with the keys
/// p_dbm or p_watts (exactly one), eta, pc, ppre and p0. '#' starts a comment.
BsPowerProfile load_profile(std::string_view name_or_path);
BsPowerProfile parse_profile(std::istream& in, std::string_view source = "<stream>");

enum class SweepQuantity { rate_exact, rate_lb, ase_exact, ase_lb, nec, ee };
enum class SweepAxis { M, K, u, lambda_b, t_target };
enum class SweepFormat { csv, json };

struct SweepRange {
  double start = 0.0;
  double stop = 0.0;
  double step = 1.0;
};

struct SweepRequest {
  SweepQuantity quantity = SweepQuantity::ase_lb;
  SweepAxis axis = SweepAxis::K;
  SweepRange range;
  std::map<std::string, double> fixed;  // M, K, u, lambda_b, t_target, alpha
  std::string profile = "macro";        // nec and ee only
  std::string output_path;              // empty = stdout
  SweepFormat format = SweepFormat::csv;
  unsigned threads = 0;
};

struct SweepRow {
  double axis_value = 0.0;
  double value = 0.0;
};

SweepQuantity parse_quantity(std::string_view text);
SweepAxis parse_axis(std::string_view text);
/// "start:stop:step", inclusive of stop.
SweepRange parse_range(std::string_view text);
/// "k=v,k=v".
std::map<std::string, double> parse_fixed(std::string_view text);
std::string_view to_string(SweepQuantity quantity);
std::string_view to_string(SweepAxis axis);
std::string_view unit_of(SweepQuantity quantity);

/// Throws DomainError when the request is inconsistent.
void validate(const SweepRequest& request);
std::vector<double> axis_points(const SweepRange& range);
/// Rows in axis order.
std::vector<SweepRow> evaluate_sweep(const SweepRequest& request);
void write_sweep(std::ostream& out, const SweepRequest& request, const std::vector<SweepRow>& rows);
/// Joins relative paths onto $ASEKIT_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path);

}  // namespace asekit::cli
