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

#include "jointeq/baselines.h"

#include "jointeq/check.h"

namespace jointeq {

JointDistribution UniformJoint(int64_t n_joint) {
  JEQ_CHECK_GT(n_joint, 0);
  JointDistribution d;
  d.probs.assign(n_joint, 1.0 / static_cast<double>(n_joint));
  return d;
}

JointDistribution RandomDirichlet(int64_t n_joint, SeededSampler* sampler) {
  JEQ_CHECK_GT(n_joint, 0);
  std::vector<double> draws(n_joint);
  for (double& v : draws) v = sampler->Exponential();
  return ClampAndNormalize(std::move(draws), 0.0);
}

JointDistribution RandomJoint(int64_t n_joint, SeededSampler* sampler) {
  JEQ_CHECK_GT(n_joint, 0);
  JointDistribution d;
  d.probs.assign(n_joint, 0.0);
  d.probs[sampler->UniformInt(n_joint)] = 1.0;
  return d;
}

}  // namespace jointeq
