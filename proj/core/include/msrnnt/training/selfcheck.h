// training/selfcheck.h

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

#ifndef MSRNNT_TRAINING_SELFCHECK_H_
#define MSRNNT_TRAINING_SELFCHECK_H_

#include <cstdint>
#include <string>
#include <vector>

namespace msrnnt {

struct SelfcheckOptions {
  std::uint64_t seed = 7;
  // Perturbs the dynamic-programming loss inside the oracle-equivalence
  // check; a negative control proving the oracle catches a broken lattice.
  bool inject_lattice_bug = false;
};

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// Fast standalone health checks: loss-oracle equivalence, lattice and
// end-to-end gradient fidelity, the PIT <= DAT relation, and decoder
// causality. Runs in seconds.
std::vector<CheckResult> run_selfcheck(const SelfcheckOptions& options);

}  // namespace msrnnt

#endif  // MSRNNT_TRAINING_SELFCHECK_H_
