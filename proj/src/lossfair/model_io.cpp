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

#include "lossfair/model_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lossfair/error.hpp"

namespace lossfair {
namespace {

constexpr const char* kMagic = "lossfair-model";

std::string SanitizeTag(const std::string& tag) {
  std::string out = tag.empty() ? std::string("untagged") : tag;
  for (char& ch : out) {
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') ch = '_';
  }
  return out;
}

}  // namespace

void WriteModel(const LinearModel& model, std::ostream& out) {
  out << kMagic << " dim=" << model.dim() << " tag=" << SanitizeTag(model.tag())
      << '\n';
  char buf[64];
  for (Index i = 0; i < model.dim(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", model.theta()[i]);
    out << buf << '\n';
  }
}

void SaveModel(const LinearModel& model, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) Fail(ErrorCode::kIo, "cannot write model file " + path.string());
  WriteModel(model, out);
  if (!out) Fail(ErrorCode::kIo, "write failed for " + path.string());
}

LinearModel ReadModel(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) Fail(ErrorCode::kData, "model: empty file");
  std::istringstream header(line);
  std::string magic, dim_field, tag_field;
  header >> magic >> dim_field >> tag_field;
  if (magic != kMagic || dim_field.rfind("dim=", 0) != 0 ||
      tag_field.rfind("tag=", 0) != 0) {
    Fail(ErrorCode::kData, "model: malformed header '" + line + "'");
  }
  long long dim = -1;
  const std::string dim_text = dim_field.substr(4);
  const auto [ptr, ec] =
      std::from_chars(dim_text.data(), dim_text.data() + dim_text.size(), dim);
  if (ec != std::errc() || ptr != dim_text.data() + dim_text.size() || dim <= 0) {
    Fail(ErrorCode::kData, "model: bad dimension '" + dim_text + "'");
  }
  Eigen::VectorXd theta(dim);
  for (long long i = 0; i < dim; ++i) {
    if (!std::getline(in, line)) {
      Fail(ErrorCode::kData, "model: expected " + std::to_string(dim) +
                                 " values, got " + std::to_string(i));
    }
    double v = 0.0;
    const auto r = std::from_chars(line.data(), line.data() + line.size(), v);
    if (r.ec != std::errc()) Fail(ErrorCode::kData, "model: bad value '" + line + "'");
    theta[static_cast<Index>(i)] = v;
  }
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      Fail(ErrorCode::kData, "model: trailing data after " + std::to_string(dim) +
                                 " values");
    }
  }
  return LinearModel(std::move(theta), tag_field.substr(4));
}

LinearModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCode::kIo, "cannot open model file " + path.string());
  return ReadModel(in);
}

}  // namespace lossfair
