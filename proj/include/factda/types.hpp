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

#ifndef FACTDA_TYPES_HPP_
#define FACTDA_TYPES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace factda {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Index = Eigen::Index;

/// Veracity classes. The numeric value is the class index and also the
/// tie-break order used when taking an argmax.
enum class VeracityLabel : int { kSupport = 0, kRefute = 1, kNeutral = 2 };

inline constexpr std::array<VeracityLabel, 3> kAllLabels = {
    VeracityLabel::kSupport, VeracityLabel::kRefute, VeracityLabel::kNeutral};

std::string_view to_string(VeracityLabel label);
/// Accepts the canonical names case-insensitively; nullopt otherwise.
std::optional<VeracityLabel> parse_label(std::string_view name);

/// The label set a corpus declares: binary {Support, Refute} or ternary
/// {Support, Refute, Neutral}.
class LabelSet {
 public:
  static LabelSet binary() { return LabelSet(2); }
  static LabelSet ternary() { return LabelSet(3); }
  static LabelSet with_classes(int n);

  int size() const { return num_classes_; }
  bool contains(VeracityLabel label) const {
    return static_cast<int>(label) < num_classes_;
  }
  VeracityLabel at(int index) const { return static_cast<VeracityLabel>(index); }
  std::vector<VeracityLabel> labels() const;

  friend bool operator==(const LabelSet&, const LabelSet&) = default;

 private:
  explicit LabelSet(int n) : num_classes_(n) {}
  int num_classes_;
};

inline int class_index(VeracityLabel label) { return static_cast<int>(label); }

/// Index of the largest entry; earlier entries win ties.
template <typename Derived>
Index argmax_first(const Eigen::DenseBase<Derived>& values) {
  Index best = 0;
  for (Index i = 1; i < values.size(); ++i) {
    if (values(i) > values(best)) best = i;
  }
  return best;
}

}  // namespace factda

#endif  // FACTDA_TYPES_HPP_
