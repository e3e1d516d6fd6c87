#include "censorlens/app/server.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "censorlens/error.hpp"

namespace censorlens::app {

using nlohmann::json;

namespace {

json category_json(Category c) { return {{"index", index_of(c)}, {"name", display_name(c)}, {"slug", slug(c)}}; }

json item_json(const review::ReviewItem& item) {
  json raters = json::array();
  for (const auto& r : item.raters) raters.push_back({{"rater", r.rater}, {"category", slug(r.category)}});
  const auto label = item.label();
  return {{"id", item.id},
          {"image_path", item.image_path ? json(*item.image_path) : json(nullptr)},
          {"text", item.text ? json(*item.text) : json(nullptr)},
          {"decision", slug(item.decision)},
          {"confidence", item.confidence},
          {"has_cam", item.cam_path.has_value()},
          {"status", review::to_string(item.status)},
          {"raters", raters},
          {"expert", item.expert ? json(slug(*item.expert)) : json(nullptr)},
          {"triage", item.triage_accepted ? json(*item.triage_accepted ? "accept" : "reject") : json(nullptr)},
          {"label", label ? json(slug(*label)) : json(nullptr)}};
}

void send_json(httplib::Response& res, int status, const json& body) {
  res.status = status;
  res.set_content(body.dump(-1, ' ', false, json::error_handler_t::replace), "application/json");
}

/// Maps library errors onto HTTP status codes.
template <class F>
httplib::Server::Handler guarded(F f) {
  return [f](const httplib::Request& req, httplib::Response& res) {
    try {
      f(req, res);
    } catch (const NotFound& e) {
      send_json(res, 404, {{"error", e.what()}});
    } catch (const Conflict& e) {
      send_json(res, 409, {{"error", e.what()}});
    } catch (const InvalidArgument& e) {
      send_json(res, 400, {{"error", e.what()}});
    } catch (const json::exception& e) {
      send_json(res, 400, {{"error", std::string("malformed request body: ") + e.what()}});
    } catch (const std::exception& e) {
      send_json(res, 500, {{"error", e.what()}});
    }
  };
}

json parse_body(const httplib::Request& req) {
  auto body = json::parse(req.body.empty() ? std::string("{}") : req.body);
  if (!body.is_object()) throw InvalidArgument("request body must be a JSON object");
  return body;
}

std::size_t size_param(const httplib::Request& req, const char* name, std::size_t fallback) {
  if (!req.has_param(name)) return fallback;
  const auto text = req.get_param_value(name);
  std::size_t v = 0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || end != text.data() + text.size() || text.empty()) {
    throw InvalidArgument(fmt::format("parameter {} must be a non-negative integer", name));
  }
  return v;
}

void send_file(httplib::Response& res, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw NotFound("media file is not available: " + path);
  std::ostringstream bytes;
  bytes << in.rdbuf();
  const bool jpeg = path.ends_with(".jpg") || path.ends_with(".jpeg");
  res.status = 200;
  res.set_content(bytes.str(), jpeg ? "image/jpeg" : "image/png");
}

}  // namespace

void register_review_routes(httplib::Server& server, review::ReviewStore& store, const ServerOptions& options) {
  server.Get("/categories", guarded([](const httplib::Request&, httplib::Response& res) {
               json out = json::array();
               for (auto c : all_categories()) out.push_back(category_json(c));
               send_json(res, 200, out);
             }));

  server.Get("/items", guarded([&store, options](const httplib::Request& req, httplib::Response& res) {
               std::optional<review::Status> status;
               if (req.has_param("status") && !req.get_param_value("status").empty()) {
                 status = review::parse_status(req.get_param_value("status"));
                 if (!status) throw InvalidArgument("unknown status '" + req.get_param_value("status") + "'");
               }
               auto order = options.default_order;
               if (req.has_param("order")) {
                 const auto o = req.get_param_value("order");
                 if (o == "asc") {
                   order = review::Order::AscendingConfidence;
                 } else if (o == "desc") {
                   order = review::Order::DescendingConfidence;
                 } else {
                   throw InvalidArgument("order must be 'asc' or 'desc'");
                 }
               }
               const auto page = store.list(status, order, size_param(req, "offset", 0),
                                            size_param(req, "limit", options.default_limit));
               json items = json::array();
               for (const auto& item : page.items) items.push_back(item_json(item));
               send_json(res, 200, {{"total", page.total}, {"offset", page.offset}, {"items", items}});
             }));

  server.Get(R"(/items/([^/]+))", guarded([&store](const httplib::Request& req, httplib::Response& res) {
               send_json(res, 200, item_json(store.get(req.matches[1].str())));
             }));

  server.Get(R"(/items/([^/]+)/image)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
               const auto item = store.get(req.matches[1].str());
               if (!item.image_path) throw NotFound("item " + item.id + " has no image");
               send_file(res, *item.image_path);
             }));

  server.Get(R"(/items/([^/]+)/cam)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
               const auto item = store.get(req.matches[1].str());
               if (!item.cam_path) throw NotFound("item " + item.id + " has no CAM overlay");
               send_file(res, *item.cam_path);
             }));

  server.Post(R"(/items/([^/]+)/decision)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                const auto item = store.submit_decision(req.matches[1].str(), body.at("rater").get<std::string>(),
                                                        category_from_string(body.at("category").get<std::string>()));
                send_json(res, 200, item_json(item));
              }));

  server.Post(R"(/items/([^/]+)/resolution)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                const auto item = store.submit_resolution(req.matches[1].str(),
                                                          category_from_string(body.at("category").get<std::string>()));
                send_json(res, 200, item_json(item));
              }));

  server.Post(R"(/items/([^/]+)/triage)", guarded([&store](const httplib::Request& req, httplib::Response& res) {
                const auto body = parse_body(req);
                bool accept = false;
                if (body.contains("accept")) {
                  accept = body.at("accept").get<bool>();
                } else {
                  const auto action = body.at("action").get<std::string>();
                  if (action != "accept" && action != "reject") throw InvalidArgument("action must be accept or reject");
                  accept = action == "accept";
                }
                send_json(res, 200, item_json(store.submit_triage(req.matches[1].str(), accept)));
              }));

  server.Get("/stats/kappa", guarded([&store](const httplib::Request&, httplib::Response& res) {
               const auto k = store.kappa();
               send_json(res, 200,
                         {{"n", k.n},
                          {"observed", k.observed},
                          {"expected", k.expected},
                          {"kappa", k.kappa ? json(*k.kappa) : json(nullptr)}});
             }));

  server.Get("/stats/counts", guarded([&store](const httplib::Request&, httplib::Response& res) {
               json out = json::object();
               for (const auto& [status, n] : store.counts()) out[std::string(review::to_string(status))] = n;
               send_json(res, 200, out);
             }));

  server.Post("/export", guarded([&store, options](const httplib::Request&, httplib::Response& res) {
                const auto rows = store.export_accepted();
                const auto path = options.export_dir / "export.csv";
                review::write_export_csv(path, rows);
                json labels = json::array();
                for (const auto& r : rows) labels.push_back({{"id", r.id}, {"category", slug(r.label)}});
                send_json(res, 200, {{"count", rows.size()}, {"path", path.string()}, {"labels", labels}});
              }));
}

}  // namespace censorlens::app
