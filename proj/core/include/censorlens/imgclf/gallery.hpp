#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "censorlens/image.hpp"
#include "censorlens/imgclf/network.hpp"
#include "censorlens/scores.hpp"

namespace censorlens::imgclf {

struct GalleryItem {
  std::string id;
  Image image;
  Category predicted = Category::Other;
  ClassScores scores;
};

/// One manifest row; `confidence` is the score of the predicted category and
/// the peak is in original-image pixel coordinates.
struct GalleryRow {
  std::string id;
  Category predicted = Category::Other;
  double confidence = 0.0;
  int peak_x = 0;
  int peak_y = 0;
};

/// Writes `<id>_original.png` and `<id>_overlay.png` per item and
/// `manifest.csv` (id,predicted,confidence,peak_x,peak_y) sorted by
/// descending confidence. Returns the manifest rows in file order. Throws
/// IoError when `out_dir` cannot be created or written.
std::vector<GalleryRow> export_cam_gallery(const ConvNet& model, std::span<const GalleryItem> items,
                                           const std::filesystem::path& out_dir);

std::vector<GalleryRow> read_gallery_manifest(const std::filesystem::path& manifest);

}  // namespace censorlens::imgclf
