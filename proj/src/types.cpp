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

#include "factda/types.hpp"

#include <algorithm>
#include <cctype>

#include "factda/error.hpp"

namespace factda {

std::string_view to_string(VeracityLabel label) {
  switch (label) {
    case VeracityLabel::kSupport:
      return "Support";
    case VeracityLabel::kRefute:
      return "Refute";
    case VeracityLabel::kNeutral:
      return "Neutral";
  }
  return "?";
}

std::optional<VeracityLabel> parse_label(std::string_view name) {
  std::string lowered(name);
  std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lowered == "support") return VeracityLabel::kSupport;
  if (lowered == "refute") return VeracityLabel::kRefute;
  if (lowered == "neutral") return VeracityLabel::kNeutral;
  return std::nullopt;
}

LabelSet LabelSet::with_classes(int n) {
  if (n != 2 && n != 3) {
    throw LabelError("label set must have 2 or 3 classes, got " + std::to_string(n));
  }
  return LabelSet(n);
}

std::vector<VeracityLabel> LabelSet::labels() const {
  return {kAllLabels.begin(), kAllLabels.begin() + num_classes_};
}

}  // namespace factda
