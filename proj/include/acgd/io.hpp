#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "acgd/acgd.hpp"
#include "acgd/instances.hpp"

namespace acgd {

using InstanceParams = std::variant<NonstrongHardParams, StrongHardParams, RandomQpParams>;

// Parsed form of an instance file. `domain` replaces the generator's domain
// when present.
struct InstanceSpec {
  InstanceParams params;
  std::optional<Domain> domain;
};

std::string instance_type_name(const InstanceParams& p);

// {"type": ..., "params": {...}[, "domain": {"kind": ...}]}, pretty-printed
// with a trailing newline.
std::string instance_to_json(const InstanceSpec& spec);
// Throws InvalidArgument on malformed input or unknown fields.
InstanceSpec instance_from_json(const std::string& text);
ProblemInstance build_instance(const InstanceSpec& spec);

inline constexpr const char* kTraceHeader = "t,oracle_calls,matvecs,obj_gap,feas_norm,dist_sq,S_t";

// One row per record; NaN fields are written as empty cells.
std::string trace_to_csv(const std::vector<PhaseRecord>& records);

struct RunSummary {
  int doublings = 0;
  double final_guess = 0.0;
  std::uint64_t oracle_calls = 0;
  std::uint64_t matvecs = 0;
  double feas_norm = 0.0;
  double gap = 0.0;
  bool success = false;
};

std::string summary_to_json(const RunSummary& s);

// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_file(const std::filesystem::path& path);

// Shortest round-trip decimal form; empty for NaN.
std::string format_real(double v);

}  // namespace acgd
