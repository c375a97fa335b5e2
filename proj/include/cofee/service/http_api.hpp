#pragma once

namespace httplib {
class Server;
}

namespace cofee::service {

class AnnotationService;

// Registers the /api routes on the server. Requests other than
// GET /api/health need "Authorization: Bearer <token>". Error responses are
// {"error": message}, with "violations" on 422 and "current_version" on a
// stale-version 409.
void install_routes(httplib::Server& server, AnnotationService& service);

}  // namespace cofee::service
