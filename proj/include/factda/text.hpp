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

#ifndef FACTDA_TEXT_HPP_
#define FACTDA_TEXT_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace factda {

inline constexpr std::string_view kPadToken = "[pad]";
inline constexpr std::string_view kSepToken = "[sep]";

/// Lowercases and splits on ASCII whitespace.
std::vector<std::string> tokenize(std::string_view text);

/// Drops padding tokens and keeps at most `max_tokens` of the rest.
std::vector<std::string> truncate_tokens(std::vector<std::string> tokens,
                                         std::size_t max_tokens);

std::string join_tokens(const std::vector<std::string>& tokens);

/// `first [sep] second`, with each side truncated to its own cap.
std::string join_segments(std::string_view first, std::size_t first_cap,
                          std::string_view second, std::size_t second_cap);

/// 64-bit FNV-1a. Stable across platforms, unlike std::hash.
std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t seed = 0xcbf29ce484222325ULL);

}  // namespace factda

#endif  // FACTDA_TEXT_HPP_
