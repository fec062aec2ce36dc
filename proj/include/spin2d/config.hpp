#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "spin2d/separation.hpp"

namespace spin2d {

// Registered checks, in the order they always run.
const std::vector<std::string>& task_names();
double default_tolerance(const std::string& task);

struct TaskSpec {
  std::string name;
  double tolerance = 0.0;
  std::map<std::string, std::string> params;

  bool has(const std::string& key) const { return params.count(key) != 0; }
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  Complex complex(const std::string& key, Complex fallback) const;
  Expr expr(const std::string& key, const std::string& fallback) const;
  bool flag(const std::string& key, bool fallback) const;
};

enum class GeometryKind { Frame, Liouville };

struct VerificationConfig {
  Signature signature = Signature::euclidean();
  GeometryKind geometry = GeometryKind::Frame;
  Index2<Expr> frame;  // frame[mu][a] = e^mu_a
  bool complex_frame = false;
  LiouvilleMetric liouville;
  LiouvilleFrameKind frame_kind = LiouvilleFrameKind::D5;

  bool has_killing = false;
  KillingData killing;

  Region region;
  GridSpec grid{5, 5};
  int jet_order = 4;
  std::uint64_t seed = 0;
  Complex mass = 0.0;
  std::vector<TaskSpec> tasks;  // canonical order

  FrameField frame_field() const;
};

// `section.key = value` lines; '#' starts a comment outside quotes; quoted
// values are expressions. Throws ConfigError (line-numbered) or ParseError.
VerificationConfig parse_config(std::string_view text);
VerificationConfig load_config(const std::string& path);

}  // namespace spin2d
