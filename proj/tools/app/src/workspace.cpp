#include "censorlens/app/workspace.hpp"

namespace censorlens::app {

MissingDependency::MissingDependency(std::string stage, const std::filesystem::path& artifact)
    : std::runtime_error("missing output of stage '" + stage + "': " + artifact.string() + " (run `censorlens " +
                         stage + "` first)"),
      stage_(std::move(stage)) {}

void Workspace::require(const std::filesystem::path& artifact, const std::string& stage) {
  if (!std::filesystem::exists(artifact)) throw MissingDependency(stage, artifact);
}

}  // namespace censorlens::app
