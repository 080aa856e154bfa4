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

#include <algorithm>
#include <cmath>
#include <mutex>

#include "scriptor/core/error.hpp"
#include "scriptor/detect/gateway.hpp"
#include "scriptor/match/nms.hpp"

#ifdef SCRIPTOR_WITH_ONNX
#include <opencv2/core.hpp>
#include <opencv2/dnn.hpp>
#endif

namespace scriptor::detect {

#ifdef SCRIPTOR_WITH_ONNX
namespace {

// Tile origins along one axis: a regular stride, with the last tile pushed
// back so it ends at the image edge.
std::vector<int> tile_origins(int extent, int tile, int stride) {
  if (extent <= tile) return {0};
  std::vector<int> out;
  for (int p = 0; p + tile < extent; p += stride) out.push_back(p);
  out.push_back(extent - tile);
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace
#endif

bool embedded_inference_available() noexcept {
#ifdef SCRIPTOR_WITH_ONNX
  return true;
#else
  return false;
#endif
}

struct EmbeddedDetector::Impl {
  ModelMetadata meta;
#ifdef SCRIPTOR_WITH_ONNX
  mutable std::mutex mutex;  // cv::dnn::Net::forward mutates internal buffers
  mutable cv::dnn::Net net;
#endif
};

EmbeddedDetector::EmbeddedDetector(const DetectorHandle& handle) : impl_(std::make_unique<Impl>()) {
  if (handle.kind != DetectorKind::embedded_model) {
    throw Error(ErrorCode::InvalidArgument, "handle does not name an embedded model");
  }
  impl_->meta = ModelMetadata::load(sidecar_path(handle.source));
#ifdef SCRIPTOR_WITH_ONNX
  try {
    impl_->net = cv::dnn::readNetFromONNX(handle.source.string());
  } catch (const cv::Exception& e) {
    throw Error(ErrorCode::ModelLoadError, handle.source.string() + ": " + e.what());
  }
  if (impl_->net.empty()) throw Error(ErrorCode::ModelLoadError, "empty network " + handle.source.string());
#else
  throw Error(ErrorCode::ModelLoadError, "built without embedded inference (SCRIPTOR_WITH_ONNX=OFF)");
#endif
}

EmbeddedDetector::~EmbeddedDetector() = default;
EmbeddedDetector::EmbeddedDetector(EmbeddedDetector&&) noexcept = default;
EmbeddedDetector& EmbeddedDetector::operator=(EmbeddedDetector&&) noexcept = default;

const ModelMetadata& EmbeddedDetector::metadata() const noexcept { return impl_->meta; }

std::vector<DetectionRecord> EmbeddedDetector::infer(const preprocess::ColumnImage& column,
                                                     const InferOptions& options) const {
  if (!(options.conf_floor >= 0.0 && options.conf_floor <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "conf_floor must lie in [0,1]");
  }
  if (!(options.nms_iou >= 0.0 && options.nms_iou < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "nms_iou must lie in [0,1)");
  }
  const GrayImage& raster = column.gray();
  if (raster.empty()) throw Error(ErrorCode::EmptyImage, "column " + column.key().str() + " is empty");

#ifdef SCRIPTOR_WITH_ONNX
  const int S = impl_->meta.input_size;
  const int overlap =
      std::clamp(options.tile_overlap > 0 ? options.tile_overlap : 2 * impl_->meta.max_glyph_px, 0, S - 1);
  const int stride = S - overlap;
  const int W = raster.width();
  const int H = raster.height();

  std::vector<DetectionRecord> found;
  for (int ty : tile_origins(H, S, stride)) {
    for (int tx : tile_origins(W, S, stride)) {
      cv::Mat tile(S, S, CV_8UC3, cv::Scalar(255, 255, 255));
      const int cw = std::min(S, W - tx);
      const int ch = std::min(S, H - ty);
      for (int y = 0; y < ch; ++y) {
        const auto src = raster.row(ty + y);
        auto* dst = tile.ptr<std::uint8_t>(y);
        for (int x = 0; x < cw; ++x) dst[3 * x] = dst[3 * x + 1] = dst[3 * x + 2] = src[tx + x];
      }
      cv::Mat out;
      try {
        std::lock_guard lock(impl_->mutex);
        impl_->net.setInput(cv::dnn::blobFromImage(tile, 1.0 / 255.0));
        out = impl_->net.forward().clone();
      } catch (const cv::Exception& e) {
        throw Error(ErrorCode::InferenceError, e.what());
      }

      int rows = 0;
      int cols = 0;
      if (out.dims == 3 && out.size[0] == 1) {
        rows = out.size[1];
        cols = out.size[2];
      } else if (out.dims == 2) {
        rows = out.size[0];
        cols = out.size[1];
      }
      if (cols < 7) throw Error(ErrorCode::InferenceError, "unexpected detector output shape");
      const float* data = out.ptr<float>();
      for (int r = 0; r < rows; ++r) {
        const float* row = data + static_cast<std::size_t>(r) * cols;
        const auto best = std::max_element(row + 5, row + cols);
        const double conf = std::clamp(static_cast<double>(row[4]) * *best, 0.0, 1.0);
        if (!(conf > options.conf_floor)) continue;
        const int cls = static_cast<int>(best - (row + 5));
        if (cls > 1) continue;

        const double x0 = std::clamp(tx + row[0] - row[2] / 2.0, 0.0, static_cast<double>(W));
        const double y0 = std::clamp(ty + row[1] - row[3] / 2.0, 0.0, static_cast<double>(H));
        const double x1 = std::clamp(tx + row[0] + row[2] / 2.0, 0.0, static_cast<double>(W));
        const double y1 = std::clamp(ty + row[1] + row[3] / 2.0, 0.0, static_cast<double>(H));
        BBox box{static_cast<int>(std::lround(x0)), static_cast<int>(std::lround(y0)), 0, 0};
        box.w = static_cast<int>(std::lround(x1)) - box.x;
        box.h = static_cast<int>(std::lround(y1)) - box.y;
        if (!box.fits(W, H)) continue;
        found.push_back({column.key(), box, static_cast<ClassId>(cls), conf, impl_->meta.model_id});
      }
    }
  }
  auto kept = nms(found, options.nms_iou);
  std::sort(kept.begin(), kept.end(), [](const DetectionRecord& a, const DetectionRecord& b) {
    return std::tie(a.box.y, a.box.x) < std::tie(b.box.y, b.box.x);
  });
  return kept;
#else
  (void)options;
  throw Error(ErrorCode::ModelLoadError, "built without embedded inference (SCRIPTOR_WITH_ONNX=OFF)");
#endif
}

}  // namespace scriptor::detect
