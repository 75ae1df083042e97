/*
 * Copyright 2026 The lossfair Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <filesystem>
#include <iosfwd>

#include "lossfair/metrics.hpp"

namespace lossfair {

// Plain-text model file:
//
//   lossfair-model dim=<d> tag=<dataset tag>
//   <theta_1>
//   ...
//   <theta_d>
//
// Values are written with 17 significant digits so a save/load round trip is
// exact. The tag must not contain whitespace.
void WriteModel(const LinearModel& model, std::ostream& out);
void SaveModel(const LinearModel& model, const std::filesystem::path& path);
LinearModel ReadModel(std::istream& in);
LinearModel LoadModel(const std::filesystem::path& path);

}  // namespace lossfair
