// Copyright 2026 The freqlink Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

namespace freqlink::tol {

// All numeric tolerances used across the library live here.

// Absolute tolerance for amplitude and norm equality checks.
inline constexpr double kAmplitude = 1e-12;

// A projection with probability at or below this is reported as null.
inline constexpr double kNullProjection = 1e-24;

// Amplitudes below this are dropped from debug dumps.
inline constexpr double kDumpCutoff = 1e-14;

// Normalization slack accepted on operation inputs.
inline constexpr double kInputNorm = 1e-9;

// Default "much smaller than" threshold for regime checks.
inline constexpr double kRegimeRatio = 0.1;

}  // namespace freqlink::tol
