#ifndef MWE_TRIAGE_HTTP_HPP
#define MWE_TRIAGE_HTTP_HPP

// HTTP binding of the session protocol:
//   GET  /session/:id/next-question
//   POST /session/:id/answer        body {"question_id","answer","note"}
//   GET  /session/:id/verdicts
//   GET  /tree/:variant

#include <httplib.h>

#include "mwe_triage/protocol.hpp"

namespace mwe {

namespace detail {

inline void reply(httplib::Response& res, const Json& body) {
  res.status = http_status(body);
  res.set_content(body.dump(), "application/json");
}

}  // namespace detail

inline void install_routes(httplib::Server& server, SessionHub& hub) {
  server.Get(R"(/session/([^/]+)/next-question)",
             [&hub](const httplib::Request& req, httplib::Response& res) {
               detail::reply(res, hub.handle({{"op", "next-question"},
                                              {"session", req.matches[1].str()}}));
             });
  server.Get(R"(/session/([^/]+)/verdicts)",
             [&hub](const httplib::Request& req, httplib::Response& res) {
               detail::reply(res, hub.handle({{"op", "verdicts"},
                                              {"session", req.matches[1].str()}}));
             });
  server.Post(R"(/session/([^/]+)/answer)",
              [&hub](const httplib::Request& req, httplib::Response& res) {
                Json body;
                try {
                  body = Json::parse(req.body);
                } catch (const nlohmann::json::parse_error& e) {
                  detail::reply(res, error_json("bad_request", e.what()));
                  return;
                }
                if (!body.is_object()) {
                  detail::reply(res, error_json("bad_request", "body must be a JSON object"));
                  return;
                }
                body["op"] = "answer";
                body["session"] = req.matches[1].str();
                detail::reply(res, hub.handle(body));
              });
  server.Get(R"(/tree/([^/]+))", [&hub](const httplib::Request& req, httplib::Response& res) {
    detail::reply(res, hub.handle({{"op", "tree"}, {"variant", req.matches[1].str()}}));
  });
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
}

}  // namespace mwe

#endif  // MWE_TRIAGE_HTTP_HPP
