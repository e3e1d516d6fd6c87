#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "censorlens/category.hpp"
#include "censorlens/image.hpp"
#include "censorlens/imgclf/network.hpp"

namespace censorlens::imgclf {

struct LabeledImage {
  std::string id;
  Image image;
  Category label = Category::Other;
};

/// Reads `<root>/<category>/<id>.<png|jpg|jpeg>`; category directories may
/// use the slug or display name. Unknown directories are skipped with a
/// warning. Items are ordered by (category, file name).
std::vector<LabeledImage> load_labeled_image_dir(const std::filesystem::path& root);

/// Writes images as `<root>/<slug>/<id>.png`.
void write_labeled_image_dir(const std::filesystem::path& root, const std::vector<LabeledImage>& items);

struct Checkpoint {
  ConvNet model;
  double threshold = 0.80;
};

/// JSON archive holding the architecture descriptor, the category list,
/// the decision threshold and every parameter.
void save_checkpoint(const std::filesystem::path& path, const ConvNet& model, double threshold);

/// Throws IoError on unreadable files and InvalidArgument on a malformed or
/// incompatible archive.
Checkpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace censorlens::imgclf
