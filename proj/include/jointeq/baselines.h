// Copyright 2026 The jointeq Authors
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

#ifndef JOINTEQ_BASELINES_H_
#define JOINTEQ_BASELINES_H_

#include <cstdint>

#include "jointeq/normal_form.h"
#include "jointeq/rng.h"

namespace jointeq {

// Non-equilibrium baseline distributions over joint actions.

// Equal mass on every joint action.
JointDistribution UniformJoint(int64_t n_joint);

// Uniform draw from the probability simplex (Dirichlet with all
// concentration parameters 1): normalized Exponential(1) variates.
JointDistribution RandomDirichlet(int64_t n_joint, SeededSampler* sampler);

// Point mass on one uniformly drawn joint action.
JointDistribution RandomJoint(int64_t n_joint, SeededSampler* sampler);

}  // namespace jointeq

#endif  // JOINTEQ_BASELINES_H_
