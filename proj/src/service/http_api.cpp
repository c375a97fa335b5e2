#include "cofee/service/http_api.hpp"

#include <httplib.h>

#include <json.hpp>

#include "cofee/annotation_json.hpp"
#include "cofee/service/record_json.hpp"
#include "cofee/service/service.hpp"

namespace cofee::service {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
using Handler = std::function<void(const httplib::Request&, httplib::Response&, const User&)>;

void send_json(httplib::Response& res, const ordered_json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json");
}

void send_error(httplib::Response& res, int status, const std::string& message,
                ordered_json extra = ordered_json::object()) {
  ordered_json body;
  body["error"] = message;
  for (auto& [k, v] : extra.items()) body[k] = v;
  send_json(res, body, status);
}

std::string bearer_token(const httplib::Request& req) {
  std::string h = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (h.size() <= kPrefix.size() || h.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return h.substr(kPrefix.size());
}

json parse_body(const httplib::Request& req) {
  try {
    json j = json::parse(req.body);
    if (!j.is_object()) throw BadRequestError("request body must be a JSON object");
    return j;
  } catch (const json::parse_error& e) {
    throw BadRequestError(std::string("malformed JSON: ") + e.what());
  }
}

std::string string_field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw BadRequestError(std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw BadRequestError(std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<std::string> string_list(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) return {};
  if (!it->is_array()) throw BadRequestError(std::string("field '") + key + "' must be an array");
  std::vector<std::string> out;
  for (const auto& v : *it) {
    if (!v.is_string()) throw BadRequestError(std::string("field '") + key + "' must hold strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

const std::string& param(const httplib::Request& req, const char* name) {
  return req.path_params.at(name);
}

ordered_json violations_json(const std::vector<Violation>& violations) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : violations) {
    arr.push_back({{"element", v.element_id}, {"rule", v.rule}, {"message", v.message}});
  }
  return arr;
}

// Authenticates, runs the handler and maps exceptions to responses.
httplib::Server::Handler guarded(AnnotationService& service, Handler handler) {
  return [&service, handler = std::move(handler)](const httplib::Request& req,
                                                   httplib::Response& res) {
    try {
      User caller = service.authenticate(bearer_token(req));
      handler(req, res, caller);
    } catch (const ValidationError& e) {
      send_error(res, e.status(), e.what(),
                 {{"document", e.doc_id()}, {"violations", violations_json(e.violations())}});
    } catch (const ConflictError& e) {
      ordered_json extra = ordered_json::object();
      if (e.current_version() >= 0) extra["current_version"] = e.current_version();
      send_error(res, e.status(), e.what(), std::move(extra));
    } catch (const ServiceError& e) {
      send_error(res, e.status(), e.what());
    } catch (const ParseError& e) {
      send_error(res, 400, e.what());
    } catch (const UnknownElementError& e) {
      send_error(res, 404, e.what());
    } catch (const json::exception& e) {
      send_error(res, 400, e.what());
    } catch (const std::exception& e) {
      send_error(res, 500, e.what());
    }
  };
}

void post_users(const httplib::Request& req, httplib::Response& res, const User& caller,
                AnnotationService& service) {
  json body = parse_body(req);
  std::string role_name = optional_string(body, "role").value_or("annotator");
  auto role = parse_user_role(role_name);
  if (!role) throw BadRequestError("unknown role '" + role_name + "'");
  IssuedCredential issued = service.create_user(caller, string_field(body, "name"), *role);
  ordered_json out = to_json(issued.user);
  out["token"] = issued.token;
  send_json(res, out, 201);
}

void post_documents(const httplib::Request& req, httplib::Response& res, const User& caller,
                    AnnotationService& service) {
  json body = parse_body(req);
  const std::string& project = param(req, "project");
  std::size_t n = 0;
  if (body.contains("csv")) {
    ColumnMap columns;
    if (auto v = optional_string(body, "text_column")) columns.text_column = *v;
    columns.id_column = optional_string(body, "id_column");
    columns.language_column = optional_string(body, "language_column");
    columns.entities_column = optional_string(body, "entities_column");
    if (auto v = optional_string(body, "language")) columns.default_language = *v;
    n = service.import_csv(caller, project, string_field(body, "csv"), columns);
  } else if (body.contains("documents") && body["documents"].is_array()) {
    std::vector<SentenceAnnotation> docs;
    for (const auto& d : body["documents"]) docs.push_back(sentence_from_json(d));
    n = service.import_documents(caller, project, std::move(docs));
  } else {
    throw BadRequestError("body needs 'csv' or a 'documents' array");
  }
  send_json(res, {{"imported", n}}, 201);
}

void put_annotations(const httplib::Request& req, httplib::Response& res, const User& caller,
                     AnnotationService& service) {
  json body = parse_body(req);
  auto version = body.find("expected_version");
  if (version == body.end() || !version->is_number_integer()) {
    throw BadRequestError("field 'expected_version' must be an integer");
  }
  auto annotations = body.find("annotations");
  if (annotations == body.end() || !annotations->is_object()) {
    throw BadRequestError("field 'annotations' must be an object");
  }
  Submission submission;
  submission.expected_version = version->get<std::int64_t>();
  submission.annotations = payload_from_json(*annotations);
  if (auto done = body.find("done"); done != body.end()) {
    if (!done->is_boolean()) throw BadRequestError("field 'done' must be a boolean");
    submission.done = done->get<bool>();
  }
  std::int64_t v = service.submit_annotation(caller, param(req, "doc"), submission);
  ordered_json out = summary_json(service.get_document(caller, param(req, "doc")));
  out["version"] = v;
  send_json(res, out);
}

}  // namespace

void install_routes(httplib::Server& server, AnnotationService& service) {
  auto route = [&service](Handler h) { return guarded(service, std::move(h)); };

  server.Get("/api/health", [](const httplib::Request&, httplib::Response& res) {
    send_json(res, {{"status", "ok"}});
  });

  server.Post("/api/users", route([&service](auto& req, auto& res, auto& caller) {
                post_users(req, res, caller, service);
              }));
  server.Get("/api/users", route([&service](auto&, auto& res, auto& caller) {
               ordered_json out = ordered_json::array();
               for (const auto& u : service.list_users(caller)) out.push_back(to_json(u));
               send_json(res, out);
             }));

  server.Post("/api/projects", route([&service](auto& req, auto& res, auto& caller) {
                json body = parse_body(req);
                Project p = service.create_project(caller, string_field(body, "name"),
                                                   string_list(body, "members"));
                send_json(res, to_json(p), 201);
              }));
  server.Get("/api/projects", route([&service](auto&, auto& res, auto& caller) {
               ordered_json out = ordered_json::array();
               for (const auto& p : service.list_projects(caller)) out.push_back(to_json(p));
               send_json(res, out);
             }));
  server.Get("/api/projects/:project", route([&service](auto& req, auto& res, auto& caller) {
               send_json(res, to_json(service.get_project(caller, param(req, "project"))));
             }));
  server.Post("/api/projects/:project/members",
              route([&service](auto& req, auto& res, auto& caller) {
                json body = parse_body(req);
                Project p = service.add_members(caller, param(req, "project"),
                                                string_list(body, "members"));
                send_json(res, to_json(p));
              }));

  server.Post("/api/projects/:project/documents",
              route([&service](auto& req, auto& res, auto& caller) {
                post_documents(req, res, caller, service);
              }));
  server.Get("/api/projects/:project/documents",
             route([&service](auto& req, auto& res, auto& caller) {
               ordered_json out = ordered_json::array();
               for (const auto& d : service.list_documents(caller, param(req, "project"))) {
                 out.push_back(summary_json(d));
               }
               send_json(res, out);
             }));
  server.Post("/api/projects/:project/assign",
              route([&service](auto& req, auto& res, auto& caller) {
                json body = parse_body(req);
                auto counts = service.assign_documents(caller, param(req, "project"),
                                                       string_list(body, "users"),
                                                       string_list(body, "documents"));
                ordered_json out = ordered_json::object();
                for (const auto& [user, n] : counts) out[user] = n;
                send_json(res, {{"assigned", out}});
              }));

  server.Get("/api/documents/:doc", route([&service](auto& req, auto& res, auto& caller) {
               send_json(res, to_json(service.get_document(caller, param(req, "doc"))));
             }));
  server.Put("/api/documents/:doc/annotations",
             route([&service](auto& req, auto& res, auto& caller) {
               put_annotations(req, res, caller, service);
             }));

  server.Get("/api/projects/:project/export",
             route([&service](auto& req, auto& res, auto& caller) {
               std::string name = req.has_param("format") ? req.get_param_value("format") : "jsonl";
               auto format = parse_export_format(name);
               if (!format) throw BadRequestError("unknown export format '" + name + "'");
               std::string body = service.export_project(caller, param(req, "project"), *format);
               res.set_content(body, *format == ExportFormat::kCsv ? "text/csv; charset=utf-8"
                                                                   : "application/x-ndjson");
             }));

  server.Get("/api/projects/:project/ontology",
             route([&service](auto& req, auto& res, auto& caller) {
               Project p = service.get_project(caller, param(req, "project"));
               res.set_header("X-Ontology-Version", p.ontology_version);
               res.set_content(p.ontology_document, "text/plain; charset=utf-8");
             }));
  server.Post("/api/projects/:project/ontology",
              route([&service](auto& req, auto& res, auto& caller) {
                OntologyElement element = ontology_element_from_json(parse_body(req));
                Project p = service.extend_ontology(caller, param(req, "project"), element);
                send_json(res, to_json(p), 201);
              }));
  server.Get("/api/projects/:project/ontology/subtypes/:subtype/roles",
             route([&service](auto& req, auto& res, auto& caller) {
               auto ontology = service.project_ontology(caller, param(req, "project"));
               ordered_json out = ordered_json::array();
               for (const auto& slot : ontology->allowed_roles(param(req, "subtype"))) {
                 out.push_back(to_json(slot));
               }
               send_json(res, out);
             }));
}

}  // namespace cofee::service
