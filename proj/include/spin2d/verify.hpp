#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spin2d/config.hpp"

namespace spin2d {

enum class TaskStatus { Pass, Fail, Error };

struct TaskResult {
  std::string name;
  TaskStatus status = TaskStatus::Pass;
  double residual = 0.0;
  double tolerance = 0.0;
  std::optional<std::pair<double, double>> where;  // point of the max residual
  std::vector<std::pair<std::string, double>> details;
  std::string error;  // set for Error, and for Fail when an exception decided it
  int exit_code = 0;  // 0 pass, 1 fail, 2 bad input, 3 runtime singularity
};

struct Report {
  std::vector<TaskResult> tasks;

  bool passed() const;
  // Highest task code; a pure function of the task list.
  int exit_code() const;
  // One JSON object per task, newline-terminated.
  std::string json_lines() const;
  std::string table() const;
};

const char* status_name(TaskStatus s);

// grid_refine > 1 reruns the grid-quadrature task (integrability) on a grid
// refined K times and reports the finite-difference residual ratio.
Report run_verification(const VerificationConfig& cfg, int grid_refine = 1);

// separate-solve parameters of cfg (defaults when the task is absent).
SeparationParams separation_params(const VerificationConfig& cfg);

}  // namespace spin2d
