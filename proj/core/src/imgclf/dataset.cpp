#include "censorlens/imgclf/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>

#include <nlohmann/json.hpp>
#include <spdlog/spdlog.h>

#include "censorlens/error.hpp"

namespace censorlens::imgclf {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

bool is_image_file(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

constexpr const char* kFormat = "censorlens-imgclf";
constexpr int kVersion = 1;

}  // namespace

std::vector<LabeledImage> load_labeled_image_dir(const fs::path& root) {
  if (!fs::is_directory(root)) throw IoError("labeled image directory not found: " + root.string());
  std::vector<std::pair<Category, fs::path>> files;
  for (const auto& dir : fs::directory_iterator(root)) {
    if (!dir.is_directory()) continue;
    const auto category = parse_category(dir.path().filename().string());
    if (!category) {
      spdlog::warn("skipping directory with unknown category name: {}", dir.path().string());
      continue;
    }
    for (const auto& f : fs::directory_iterator(dir.path())) {
      if (f.is_regular_file() && is_image_file(f.path())) files.emplace_back(*category, f.path());
    }
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) {
    return a.first != b.first ? a.first < b.first : a.second.filename() < b.second.filename();
  });
  std::vector<LabeledImage> out;
  out.reserve(files.size());
  for (const auto& [category, path] : files) {
    out.push_back({path.stem().string(), load_image(path), category});
  }
  return out;
}

void write_labeled_image_dir(const fs::path& root, const std::vector<LabeledImage>& items) {
  for (const auto& item : items) {
    const fs::path dir = root / std::string(slug(item.label));
    fs::create_directories(dir);
    save_image(dir / (item.id + ".png"), item.image);
  }
}

void save_checkpoint(const fs::path& path, const ConvNet& model, double threshold) {
  json j;
  j["format"] = kFormat;
  j["version"] = kVersion;
  j["architecture"] = {{"input_side", model.architecture().input_side},
                       {"channels", model.architecture().channels},
                       {"kernel", 3},
                       {"pooling", "max2x2-between-stages"},
                       {"head", "global-average-pool+linear"}};
  std::vector<std::string> names;
  for (auto c : all_categories()) names.emplace_back(display_name(c));
  j["categories"] = names;
  j["threshold"] = threshold;
  const auto params = model.parameters();
  j["parameters"] = std::vector<double>(params.begin(), params.end());

  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw IoError("cannot write checkpoint " + path.string());
  out << j.dump();
}

Checkpoint load_checkpoint(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read checkpoint " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed checkpoint " + path.string() + ": " + e.what());
  }
  try {
    if (j.at("format") != kFormat || j.at("version") != kVersion) {
      throw InvalidArgument("unsupported checkpoint format in " + path.string());
    }
    const auto names = j.at("categories").get<std::vector<std::string>>();
    if (names.size() != kNumCategories) throw InvalidArgument("checkpoint category list has the wrong size");
    for (std::size_t i = 0; i < names.size(); ++i) {
      if (parse_category(names[i]) != category_at(i)) {
        throw InvalidArgument("checkpoint category order does not match: " + names[i]);
      }
    }
    Architecture arch;
    arch.input_side = j.at("architecture").at("input_side").get<int>();
    arch.channels = j.at("architecture").at("channels").get<std::vector<int>>();
    Checkpoint ck{ConvNet(arch), j.at("threshold").get<double>()};
    const auto params = j.at("parameters").get<std::vector<double>>();
    if (params.size() != ck.model.parameter_count()) {
      throw InvalidArgument("checkpoint parameter count does not match its architecture");
    }
    std::copy(params.begin(), params.end(), ck.model.parameters().begin());
    return ck;
  } catch (const json::exception& e) {
    throw InvalidArgument("malformed checkpoint " + path.string() + ": " + e.what());
  }
}

}  // namespace censorlens::imgclf
