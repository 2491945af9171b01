// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DUM_DUM_HPP_
#define DUM_DUM_HPP_

#include "dum/core.hpp"
#include "dum/data.hpp"
#include "dum/diversity.hpp"
#include "dum/experiment.hpp"
#include "dum/factor_model.hpp"
#include "dum/metrics.hpp"
#include "dum/rankers.hpp"
#include "dum/verify.hpp"

#endif  // DUM_DUM_HPP_
