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

#include <gtest/gtest.h>

#include "pipeline.hpp"
#include "testing.hpp"

namespace st = scriptor::testing;

TEST(Pipeline, SyntheticManuscriptEndToEnd) {
  st::TempDir dir("scriptor-e2e");
  auto rep = st::run_synthetic_pipeline(dir.path());
  for (const auto& n : rep.notes) std::cout << "  " << n << "\n";

  EXPECT_EQ(rep.pages, 60);
  EXPECT_EQ(rep.columns, 120);
  EXPECT_EQ(rep.cycle1_training_columns, 60);
  EXPECT_EQ(rep.cycle1_inference_columns, 60);
  EXPECT_EQ(rep.cycle1_label_files, rep.cycle1_training_columns);
  EXPECT_GT(rep.planted, 0);
  EXPECT_GE(rep.tm_recall, 0.95);
  EXPECT_EQ(rep.accepted + rep.rejected + rep.adjusted, rep.detections);
  EXPECT_GT(rep.rejected, 0);
  EXPECT_GT(rep.adjusted, 0);
  EXPECT_EQ(rep.http_errors, 0);
  EXPECT_EQ(rep.pending_after_review, 0);
  EXPECT_TRUE(rep.image_endpoint_ok);
  EXPECT_TRUE(rep.merged);
  EXPECT_TRUE(rep.cycle2_superset);
  EXPECT_EQ(rep.cycle2_training_columns, 120);
  EXPECT_GT(rep.cycle2_training_annotations, rep.cycle1_training_annotations);
  EXPECT_LT(rep.seconds, 120.0);
}
