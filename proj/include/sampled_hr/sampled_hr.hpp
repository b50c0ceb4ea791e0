// Copyright 2026 The sampled-hr Authors
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

#ifndef SAMPLED_HR_SAMPLED_HR_HPP_
#define SAMPLED_HR_SAMPLED_HR_HPP_

#include "sampled_hr/analysis.hpp"
#include "sampled_hr/core.hpp"
#include "sampled_hr/dist.hpp"
#include "sampled_hr/errors.hpp"
#include "sampled_hr/io.hpp"
#include "sampled_hr/mapping.hpp"
#include "sampled_hr/metrics.hpp"
#include "sampled_hr/rank_file.hpp"
#include "sampled_hr/rng.hpp"

#endif  // SAMPLED_HR_SAMPLED_HR_HPP_
