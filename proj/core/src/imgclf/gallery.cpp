#include "censorlens/imgclf/gallery.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>

#include <fmt/format.h>

#include "censorlens/error.hpp"
#include "censorlens/imgclf/cam.hpp"

namespace censorlens::imgclf {

namespace fs = std::filesystem;

std::vector<GalleryRow> export_cam_gallery(const ConvNet& model, std::span<const GalleryItem> items,
                                           const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create gallery directory " + out_dir.string());

  std::vector<std::size_t> order(items.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ca = items[a].scores[items[a].predicted];
    const double cb = items[b].scores[items[b].predicted];
    return ca != cb ? ca > cb : items[a].id < items[b].id;
  });

  std::vector<GalleryRow> rows;
  rows.reserve(items.size());
  for (auto i : order) {
    const auto& item = items[i];
    const Heatmap map = cam(model, item.image, item.predicted);
    const Peak p = peak(map);
    save_image(out_dir / (item.id + "_original.png"), item.image);
    save_image(out_dir / (item.id + "_overlay.png"), render_overlay(item.image, map));
    rows.push_back({item.id, item.predicted, item.scores[item.predicted], p.x, p.y});
  }

  std::ofstream manifest(out_dir / "manifest.csv");
  if (!manifest) throw IoError("cannot write gallery manifest in " + out_dir.string());
  manifest << "id,predicted,confidence,peak_x,peak_y\n";
  for (const auto& r : rows) {
    manifest << fmt::format("{},{},{:.6f},{},{}\n", r.id, slug(r.predicted), r.confidence, r.peak_x, r.peak_y);
  }
  return rows;
}

std::vector<GalleryRow> read_gallery_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read gallery manifest " + path.string());
  std::vector<GalleryRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, predicted, confidence, px, py;
    if (!std::getline(ss, id, ',') || !std::getline(ss, predicted, ',') || !std::getline(ss, confidence, ',') ||
        !std::getline(ss, px, ',') || !std::getline(ss, py, ',')) {
      throw InvalidArgument("malformed manifest row: " + line);
    }
    rows.push_back({id, category_from_string(predicted), std::stod(confidence), std::stoi(px), std::stoi(py)});
  }
  return rows;
}

}  // namespace censorlens::imgclf
