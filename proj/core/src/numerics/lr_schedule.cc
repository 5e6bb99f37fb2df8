// numerics/lr_schedule.cc

// Copyright 2026  The msrnnt authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "msrnnt/numerics/lr_schedule.h"

#include <cmath>

#include "msrnnt/common/check.h"

namespace msrnnt {

void LrSchedule::validate() const {
  MSRNNT_CHECK(warmup_steps >= 0 && hold_steps >= 0, "schedule step counts must be >= 0");
  MSRNNT_CHECK(decay_steps >= 1, "decay half-life must be >= 1 step");
  MSRNNT_CHECK(peak_lr > 0.0, "peak_lr must be positive");
  MSRNNT_CHECK(floor_lr >= 0.0 && floor_lr <= peak_lr,
               "floor_lr must be in [0, peak_lr]");
}

double lr_at(const LrSchedule& schedule, std::int64_t step) {
  if (step < 0) step = 0;
  if (step < schedule.warmup_steps) {
    return schedule.peak_lr * static_cast<double>(step + 1) /
           static_cast<double>(schedule.warmup_steps);
  }
  const std::int64_t hold_end = schedule.warmup_steps + schedule.hold_steps;
  if (step <= hold_end) return schedule.peak_lr;
  const double elapsed = static_cast<double>(step - hold_end);
  return schedule.floor_lr +
         (schedule.peak_lr - schedule.floor_lr) *
             std::exp2(-elapsed / static_cast<double>(schedule.decay_steps));
}

}  // namespace msrnnt
