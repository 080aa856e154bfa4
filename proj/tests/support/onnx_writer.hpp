// Copyright 2026 The Scriptor Authors
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

// Minimal protobuf wire-format writer for ONNX models. Test-only: used to
// build small fixture detectors without a Python toolchain.

#include <cstdint>
#include <string>
#include <vector>

namespace scriptor::testing {

struct OnnxTensor {
  std::string name;
  std::vector<std::int64_t> dims;
  std::vector<float> floats;        // used when is_int64 == false
  std::vector<std::int64_t> int64s; // used when is_int64 == true
  bool is_int64 = false;
};

struct OnnxAttribute {
  std::string name;
  std::vector<std::int64_t> ints;
  bool single_int = false;
};

struct OnnxNode {
  std::string op_type;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<OnnxAttribute> attributes;
};

struct OnnxValue {
  std::string name;
  std::vector<std::int64_t> dims;
};

struct OnnxGraph {
  std::vector<OnnxNode> nodes;
  std::vector<OnnxTensor> initializers;
  std::vector<OnnxValue> inputs;
  std::vector<OnnxValue> outputs;
};

std::string encode_onnx_model(const OnnxGraph& graph, int opset = 12);

}  // namespace scriptor::testing
