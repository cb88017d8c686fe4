#pragma once

#include <map>
#include <string>

#include "examsched/workspace.hpp"

namespace httplib {
class Server;
}

namespace examsched {

struct ServiceRequest {
  std::string method;  // GET, POST, PUT
  std::string path;    // without query string
  std::map<std::string, std::string> query;
  std::string body;
};

struct ServiceResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

// JSON-over-HTTP front end of a Workspace. Routing is transport-free so the
// handlers can be exercised without sockets; mount() binds them to httplib.
//
//   POST /instances                        upload source files or an instance document
//   GET  /instances/{id}                   instance document
//   GET  /instances/{id}/validation
//   GET  /instances/{id}/groups            PUT with {"edits": [...]}
//   GET  /instances/{id}/overlap-matrix    ?historical=<instance id>
//   PUT  /instances/{id}/constraints       {"csv": "..."}
//   POST /instances/{id}/portfolio         -> job
//   POST /instances/{id}/whatif            -> job
//   GET  /jobs/{id}
//   POST /schedules                        {"instance_id", "schedule", ...}
//   GET  /schedules/{id}
//   POST /schedules/{id}/moves             {"group", "slot"}
//   POST /schedules/{id}/undo
//   GET  /schedules/{id}/export            ?format=json|csv
class Service {
 public:
  explicit Service(Workspace& workspace) : ws_(workspace) {}

  ServiceResponse handle(const ServiceRequest& request);
  void mount(httplib::Server& server);

 private:
  Workspace& ws_;
};

int http_status(ErrorCode code);

}  // namespace examsched
