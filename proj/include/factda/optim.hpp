// Copyright 2026 The factda Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FACTDA_OPTIM_HPP_
#define FACTDA_OPTIM_HPP_

#include <cmath>

#include <Eigen/Core>

#include "factda/types.hpp"

namespace factda {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias correction. One instance per trainable component.
class Adam {
 public:
  Adam() = default;
  Adam(Index size, const AdamOptions& options)
      : options_(options), m_(Vector::Zero(size)), v_(Vector::Zero(size)) {}

  void step(Eigen::Ref<Vector> params, const Eigen::Ref<const Vector>& grad) {
    ++t_;
    m_ = options_.beta1 * m_ + (1.0 - options_.beta1) * grad;
    v_ = options_.beta2 * v_ + (1.0 - options_.beta2) * grad.cwiseAbs2();
    const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
    params.array() -= options_.learning_rate * (m_.array() / c1) /
                      ((v_.array() / c2).sqrt() + options_.epsilon);
  }

  long steps() const { return t_; }

 private:
  AdamOptions options_;
  Vector m_;
  Vector v_;
  long t_ = 0;
};

}  // namespace factda

#endif  // FACTDA_OPTIM_HPP_
