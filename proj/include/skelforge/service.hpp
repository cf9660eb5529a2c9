#pragma once

#include <atomic>
#include <filesystem>
#include <memory>
#include <mutex>
#include <set>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "skelforge/json_io.hpp"
#include "skelforge/scene.hpp"

namespace skelforge {

inline constexpr std::string_view kProtoVersion = "skelforge-proto/1";

// $SKELFORGE_DATA_DIR, else ./skelforge-data.
std::filesystem::path default_data_dir();

// Scene documents stored as <dir>/<id>.json. Ids are [A-Za-z0-9_-]{1,64}.
class SceneStore {
 public:
  explicit SceneStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  static bool valid_id(std::string_view id);
  void put(std::string_view id, const std::string& document) const;
  std::optional<std::string> get(std::string_view id) const;
  const std::filesystem::path& dir() const { return dir_; }

 private:
  std::filesystem::path dir_;
};

// One scene driven by protocol messages. Not thread-safe; the server gives
// every connection its own session and handles its messages in order.
class Session {
 public:
  explicit Session(std::filesystem::path data_dir = default_data_dir()) : store_(std::move(data_dir)) {}

  Json handle(const Json& request);
  // Parses one NDJSON line and returns the single-line reply (no newline).
  std::string handle_line(std::string_view line);

  const Scene& scene() const { return scene_; }

 private:
  Json dispatch(const std::string& kind, const Json& payload, Json& timing);

  Scene scene_;
  SceneStore store_;
  std::set<std::string> seen_ids_;
};

struct ServerOptions {
  std::string host = "127.0.0.1";
  int port = 7070;        // NDJSON socket; 0 picks a free port
  int http_port = -1;     // -1: port + 1; 0 picks a free port
  std::filesystem::path data_dir = default_data_dir();
};

// NDJSON session socket plus the HTTP save/load endpoint.
class Server {
 public:
  explicit Server(ServerOptions options);
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  void start();
  void stop();
  void wait();

  int port() const { return port_; }
  int http_port() const { return http_port_; }

 private:
  void accept_loop();
  void serve_connection(int fd);

  ServerOptions options_;
  int listen_fd_ = -1;
  int port_ = 0;
  int http_port_ = 0;
  std::atomic<bool> running_{false};
  std::thread accept_thread_;
  std::thread http_thread_;
  std::mutex conn_mutex_;
  std::vector<int> conn_fds_;
  std::vector<std::thread> conn_threads_;
  struct Http;
  std::unique_ptr<Http> http_;
};

}  // namespace skelforge
