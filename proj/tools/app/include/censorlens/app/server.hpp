#pragma once

#include <filesystem>

#include <httplib.h>

#include "censorlens/review.hpp"

namespace censorlens::app {

struct ServerOptions {
  review::Order default_order = review::Order::AscendingConfidence;
  std::size_t default_limit = 50;
  /// Where POST /export writes its CSV.
  std::filesystem::path export_dir = "review";
};

/// Registers the review API on `server`. The store must outlive the server.
///
///   GET  /categories                 category palette in label order
///   GET  /items?status=&order=&offset=&limit=
///   GET  /items/{id}
///   GET  /items/{id}/image           original media (PNG/JPEG bytes)
///   GET  /items/{id}/cam             CAM overlay PNG
///   POST /items/{id}/decision        {"rater": str, "category": str}
///   POST /items/{id}/resolution      {"category": str}
///   POST /items/{id}/triage          {"accept": bool}
///   GET  /stats/kappa
///   GET  /stats/counts
///   POST /export
///
/// Errors carry {"error": message} with 400, 404 or 409.
void register_review_routes(httplib::Server& server, review::ReviewStore& store, const ServerOptions& options);

}  // namespace censorlens::app
