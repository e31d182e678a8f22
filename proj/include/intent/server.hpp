#pragma once

// HTTP + WebSocket front end for the estimator.
//
//   GET /health  build and protocol metadata as JSON
//   GET /ws      upgrades to a WebSocket speaking the protocol in protocol.hpp
//   GET /<path>  static files from the configured directory (index.html for /)
//
// Each connection owns one protocol::Connection. Frames of one connection are
// handled in arrival order; connections share nothing.

#include <filesystem>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "intent/protocol.hpp"

namespace intent {

class BindError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ServerOptions {
    std::string address = "127.0.0.1";
    unsigned short port = 8080;  ///< 0 picks a free port
    std::optional<std::filesystem::path> static_dir;
    int threads = 1;
    bool stop_on_signals = false;  ///< SIGINT / SIGTERM end run()
    protocol::ConnectionOptions connection;
};

/// Parses "host:port" or ":port". Throws InvalidInputError.
std::pair<std::string, unsigned short> parse_bind_address(const std::string& text);

/// JSON body served by /health.
std::string health_document();

class Server {
public:
    /// Binds and listens immediately. Throws BindError.
    explicit Server(ServerOptions options);
    ~Server();
    Server(const Server&) = delete;
    Server& operator=(const Server&) = delete;

    unsigned short port() const;
    /// Serves until stop() is called.
    void run();
    /// Thread-safe.
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace intent
