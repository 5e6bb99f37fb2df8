// numerics/lr_schedule.h

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

#ifndef MSRNNT_NUMERICS_LR_SCHEDULE_H_
#define MSRNNT_NUMERICS_LR_SCHEDULE_H_

#include <cstdint>

namespace msrnnt {

// Warmup-hold-decay learning rate schedule:
//   steps [0, warmup):            linear ramp, lr(s) = peak * (s+1) / warmup
//   steps [warmup, warmup+hold):  peak
//   afterwards:                   exponential decay toward floor_lr;
//                                 decay_steps is the half-life.
// Continuous at both boundaries.
struct LrSchedule {
  std::int64_t warmup_steps = 0;
  std::int64_t hold_steps = 0;
  std::int64_t decay_steps = 1;  // half-life of the decay phase
  double peak_lr = 1e-3;
  double floor_lr = 0.0;

  void validate() const;
};

double lr_at(const LrSchedule& schedule, std::int64_t step);

}  // namespace msrnnt

#endif  // MSRNNT_NUMERICS_LR_SCHEDULE_H_
