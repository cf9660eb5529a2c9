#include "skelforge/service.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include "skelforge/error.hpp"

namespace skelforge {

namespace {

using Clock = std::chrono::steady_clock;

double us_since(Clock::time_point t0) {
  return std::chrono::duration<double, std::micro>(Clock::now() - t0).count();
}

RawStroke stroke_from_json(const Json& payload) {
  RawStroke s;
  if (!payload.contains("points") || !payload["points"].is_array()) {
    throw Error(ErrorCode::InvalidArgument, "CreatePart needs a points array");
  }
  for (const Json& p : payload["points"]) {
    if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
      throw Error(ErrorCode::InvalidArgument, "stroke point must be [x, y]");
    }
    s.points.push_back(Point::checked(p[0].get<double>(), p[1].get<double>()));
  }
  s.closed = payload.value("closed", true);
  return s;
}

RefineScope scope_from_json(const Json& payload) {
  const std::string kind = payload.value("scope", std::string("GLOBAL"));
  if (kind == "GLOBAL") return RefineScope::global();
  if (kind == "SUBPART") return RefineScope::subpart(payload.at("part").get<PartId>());
  if (kind == "BRANCH") return RefineScope::single_branch(payload.at("branch").get<std::size_t>());
  throw Error(ErrorCode::InvalidArgument, "unknown scope '" + kind + "'");
}

Json scope_to_json(const RefineScope& s) {
  switch (s.kind) {
    case ScopeKind::Global: return {{"scope", "GLOBAL"}};
    case ScopeKind::Subpart: return {{"scope", "SUBPART"}, {"part", s.part}};
    case ScopeKind::Branch: return {{"scope", "BRANCH"}, {"branch", s.branch}};
  }
  return {};
}

Json hierarchy_json(const Scene& scene) {
  Json out = Json::array();
  for (const HierarchyEdge& e : scene.hierarchy()) out.push_back(edge_to_json(e));
  return out;
}

}  // namespace

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SKELFORGE_DATA_DIR"); env && *env) return env;
  return std::filesystem::current_path() / "skelforge-data";
}

bool SceneStore::valid_id(std::string_view id) {
  if (id.empty() || id.size() > 64) return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

void SceneStore::put(std::string_view id, const std::string& document) const {
  if (!valid_id(id)) throw Error(ErrorCode::InvalidArgument, "invalid scene id");
  std::filesystem::create_directories(dir_);
  const auto target = dir_ / (std::string(id) + ".json");
  const auto tmp = dir_ / (std::string(id) + ".json.tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << document;
    if (!out) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

std::optional<std::string> SceneStore::get(std::string_view id) const {
  if (!valid_id(id)) throw Error(ErrorCode::InvalidArgument, "invalid scene id");
  std::ifstream in(dir_ / (std::string(id) + ".json"), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json Session::handle(const Json& request) {
  const auto start = Clock::now();
  Json reply = {{"proto", kProtoVersion}};
  Json timing = Json::object();
  try {
    if (!request.is_object()) throw Error(ErrorCode::InvalidArgument, "request must be an object");
    if (request.contains("id")) reply["id"] = request["id"];
    if (request.contains("proto") && request["proto"] != kProtoVersion) {
      throw Error(ErrorCode::SchemaVersionMismatch, "unsupported protocol version");
    }
    if (!request.contains("id") || !(request["id"].is_string() || request["id"].is_number_integer())) {
      throw Error(ErrorCode::InvalidArgument, "request needs a string or integer id");
    }
    if (!seen_ids_.insert(request["id"].dump()).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate request id " + request["id"].dump());
    }
    if (!request.contains("kind") || !request["kind"].is_string()) {
      throw Error(ErrorCode::InvalidArgument, "request needs a kind");
    }
    const Json payload = request.value("payload", Json::object());
    Json body = dispatch(request["kind"].get<std::string>(), payload, timing);
    reply["status"] = "OK";
    for (auto& [k, v] : body.items()) reply[k] = v;
  } catch (const Error& e) {
    reply["status"] = "ERROR";
    reply["error"] = {{"code", to_string(e.code())}, {"message", e.what()}};
  } catch (const Json::exception& e) {
    reply["status"] = "ERROR";
    reply["error"] = {{"code", to_string(ErrorCode::InvalidArgument)}, {"message", e.what()}};
  }
  timing["total"] = us_since(start);
  reply["timing"] = timing;
  return reply;
}

Json Session::dispatch(const std::string& kind, const Json& payload, Json& timing) {
  Json parts = Json::array();
  Json result = Json::object();

  if (kind == "CreatePart") {
    StageTimings t;
    const PartId id = scene_.add_part(stroke_from_json(payload), &t);
    timing["polygon"] = t.polygon * 1e3;
    timing["sskel"] = t.sskel * 1e3;
    timing["clean"] = t.clean * 1e3;
    timing["boundeddp"] = t.boundeddp * 1e3;
    timing["connect"] = t.connect * 1e3;
    parts.push_back(part_to_json(scene_.part(id)));
    result["part"] = id;
  } else if (kind == "MovePart") {
    const PartId id = payload.at("part").get<PartId>();
    const auto t0 = Clock::now();
    scene_.move_part(id, transform_from_json(payload.at("transform")));
    timing["connect"] = us_since(t0);
    parts.push_back(part_to_json(scene_.part(id)));
    result["part"] = id;
  } else if (kind == "SetConfig") {
    SceneConfig c = scene_.config();
    apply_config_json(c, payload);
    scene_.set_config(c);
    result["config"] = config_to_json(scene_.config());
  } else if (kind == "SetScope") {
    scene_.set_scope(scope_from_json(payload));
    result["scope"] = scope_to_json(scene_.config().refine.scope);
  } else if (kind == "GetScene") {
    for (const Subpart& p : scene_.parts()) parts.push_back(part_to_json(p));
    result["config"] = config_to_json(scene_.config());
  } else if (kind == "SaveScene") {
    const std::string doc = scene_.save();
    if (payload.contains("scene_id")) {
      store_.put(payload["scene_id"].get<std::string>(), doc);
      result["scene_id"] = payload["scene_id"];
    }
    result["document"] = Json::parse(doc);
  } else if (kind == "LoadScene") {
    std::string doc;
    if (payload.contains("document")) {
      doc = payload["document"].dump();
    } else if (payload.contains("scene_id")) {
      auto stored = store_.get(payload["scene_id"].get<std::string>());
      if (!stored) throw Error(ErrorCode::InvalidArgument, "no stored scene with that id");
      doc = *stored;
    } else {
      throw Error(ErrorCode::InvalidArgument, "LoadScene needs a document or scene_id");
    }
    scene_ = Scene::load(doc);
    for (const Subpart& p : scene_.parts()) parts.push_back(part_to_json(p));
  } else {
    throw Error(ErrorCode::InvalidArgument, "unknown message kind '" + kind + "'");
  }

  double refine_ms = 0.0;
  const auto t0 = Clock::now();
  const Skeleton global = scene_.assemble_global_skeleton(&refine_ms);
  timing["refine"] = us_since(t0);
  Json out = {{"delta", {{"parts", std::move(parts)},
                         {"hierarchy", hierarchy_json(scene_)},
                         {"global_skeleton", skeleton_to_json(global)}}}};
  if (!result.empty()) out["result"] = std::move(result);
  return out;
}

std::string Session::handle_line(std::string_view line) {
  Json request;
  try {
    request = Json::parse(line);
  } catch (const Json::exception& e) {
    Json reply = {{"proto", kProtoVersion},
                  {"status", "ERROR"},
                  {"error", {{"code", to_string(ErrorCode::MalformedDocument)}, {"message", e.what()}}}};
    return reply.dump();
  }
  return handle(request).dump();
}

struct Server::Http {
  httplib::Server server;
};

Server::Server(ServerOptions options) : options_(std::move(options)), http_(std::make_unique<Http>()) {}

Server::~Server() { stop(); }

void Server::start() {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw std::runtime_error("socket() failed");
  int yes = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof yes);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(static_cast<std::uint16_t>(options_.port));
  if (::inet_pton(AF_INET, options_.host.c_str(), &addr.sin_addr) != 1) {
    throw std::runtime_error("bad host address " + options_.host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0 || ::listen(listen_fd_, 16) != 0) {
    ::close(listen_fd_);
    throw std::runtime_error("cannot listen on port " + std::to_string(options_.port));
  }
  socklen_t len = sizeof addr;
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&addr), &len);
  port_ = ntohs(addr.sin_port);

  SceneStore store(options_.data_dir);
  auto& http = http_->server;
  http.Get(R"(/scenes/([A-Za-z0-9_\-]+))", [store](const httplib::Request& req, httplib::Response& res) {
    const auto doc = store.get(req.matches[1].str());
    if (!doc) {
      res.status = 404;
      res.set_content(R"({"error":"not found"})", "application/json");
      return;
    }
    res.set_content(*doc, "application/json");
  });
  http.Put(R"(/scenes/([A-Za-z0-9_\-]+))", [store](const httplib::Request& req, httplib::Response& res) {
    try {
      const Scene scene = Scene::load(req.body);
      store.put(req.matches[1].str(), scene.save());
      res.status = 204;
    } catch (const Error& e) {
      res.status = 400;
      const Json body = {{"code", to_string(e.code())}, {"message", e.what()}};
      res.set_content(body.dump(), "application/json");
    }
  });
  const int wanted = options_.http_port < 0 ? port_ + 1 : options_.http_port;
  http_port_ = wanted == 0 ? http.bind_to_any_port(options_.host) : wanted;
  if (wanted != 0 && !http.bind_to_port(options_.host, wanted)) {
    throw std::runtime_error("cannot listen on HTTP port " + std::to_string(wanted));
  }
  if (http_port_ < 0) throw std::runtime_error("cannot bind HTTP port");

  running_ = true;
  accept_thread_ = std::thread([this] { accept_loop(); });
  http_thread_ = std::thread([this] { http_->server.listen_after_bind(); });
  http_->server.wait_until_ready();
}

void Server::accept_loop() {
  while (running_) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) {
      if (!running_) break;
      continue;
    }
    std::lock_guard lock(conn_mutex_);
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void Server::serve_connection(int fd) {
  Session session(options_.data_dir);
  std::string buffer;
  char chunk[4096];
  for (;;) {
    const ssize_t n = ::recv(fd, chunk, sizeof chunk, 0);
    if (n <= 0) break;
    buffer.append(chunk, static_cast<std::size_t>(n));
    std::size_t nl;
    while ((nl = buffer.find('\n')) != std::string::npos) {
      std::string line = buffer.substr(0, nl);
      buffer.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.empty()) continue;
      const std::string reply = session.handle_line(line) + "\n";
      std::size_t sent = 0;
      while (sent < reply.size()) {
        const ssize_t w = ::send(fd, reply.data() + sent, reply.size() - sent, MSG_NOSIGNAL);
        if (w <= 0) return;
        sent += static_cast<std::size_t>(w);
      }
    }
  }
}

void Server::stop() {
  if (!running_.exchange(false)) return;
  ::shutdown(listen_fd_, SHUT_RDWR);
  ::close(listen_fd_);
  http_->server.stop();
  if (accept_thread_.joinable()) accept_thread_.join();
  if (http_thread_.joinable()) http_thread_.join();
  std::vector<std::thread> threads;
  {
    std::lock_guard lock(conn_mutex_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
    threads.swap(conn_threads_);
  }
  for (auto& t : threads) t.join();
  std::lock_guard lock(conn_mutex_);
  for (int fd : conn_fds_) ::close(fd);
  conn_fds_.clear();
}

void Server::wait() {
  if (accept_thread_.joinable()) accept_thread_.join();
  if (http_thread_.joinable()) http_thread_.join();
}

}  // namespace skelforge
