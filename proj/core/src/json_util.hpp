// Copyright 2026 The speechscale Authors. All Rights Reserved.
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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace speechscale::detail {

using Json = nlohmann::json;

// Sorted keys, two-space indent, %.9g floats, null for non-finite values,
// trailing newline.
std::string canonical_dump(const Json& value);

// Throws ParseError with `what` as context.
Json parse_json(std::string_view text, std::string_view what);

// Typed field access that throws ParseError naming the missing/mistyped key.
const Json& require(const Json& object, const char* key);
double number_or_nan(const Json& value);
std::vector<double> number_array(const Json& value, const char* key);

}  // namespace speechscale::detail
