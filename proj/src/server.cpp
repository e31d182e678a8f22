#include "intent/server.hpp"

#include <boost/asio/ip/tcp.hpp>
#include <boost/asio/signal_set.hpp>
#include <boost/asio/steady_timer.hpp>
#include <boost/asio/strand.hpp>
#include <boost/beast/core.hpp>
#include <boost/beast/http.hpp>
#include <boost/beast/websocket.hpp>
#include <charconv>
#include <chrono>
#include <deque>
#include <fstream>
#include <sstream>
#include <thread>
#include <vector>

#include "intent/error.hpp"
#include "intent/kernels.hpp"

namespace intent {

namespace beast = boost::beast;
namespace http = beast::http;
namespace websocket = beast::websocket;
namespace net = boost::asio;
using tcp = net::ip::tcp;

std::pair<std::string, unsigned short> parse_bind_address(const std::string& text) {
    const auto colon = text.rfind(':');
    if (colon == std::string::npos) {
        throw InvalidInputError("bind address must look like host:port");
    }
    std::string host = text.substr(0, colon);
    const std::string port_text = text.substr(colon + 1);
    unsigned port = 0;
    const auto res = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (port_text.empty() || res.ec != std::errc{} || res.ptr != port_text.data() + port_text.size() || port > 65535) {
        throw InvalidInputError("invalid port '" + port_text + "'");
    }
    if (host.empty() || host == "localhost") {
        host = "127.0.0.1";
    }
    beast::error_code ec;
    net::ip::make_address(host, ec);
    if (ec) {
        throw InvalidInputError("invalid host '" + host + "'");
    }
    return {host, static_cast<unsigned short>(port)};
}

std::string health_document() {
    return protocol::json{{"status", "ok"},
                          {"name", "intent_estimation"},
                          {"version", INTENT_VERSION},
                          {"protocol", protocol::kVersion},
                          {"isa", std::string(kernels::isa_name(kernels::active_isa()))}}
        .dump();
}

namespace {

std::string_view mime_type(const std::filesystem::path& path) {
    const std::string ext = path.extension().string();
    if (ext == ".html" || ext == ".htm") return "text/html";
    if (ext == ".js" || ext == ".mjs") return "text/javascript";
    if (ext == ".css") return "text/css";
    if (ext == ".json") return "application/json";
    if (ext == ".svg") return "image/svg+xml";
    if (ext == ".png") return "image/png";
    if (ext == ".ico") return "image/x-icon";
    return "application/octet-stream";
}

class WsSession : public std::enable_shared_from_this<WsSession> {
public:
    WsSession(tcp::socket&& socket, const protocol::ConnectionOptions& options)
        : ws_(std::move(socket)), timer_(ws_.get_executor()), conn_(options) {}

    void run(http::request<http::string_body> req) {
        ws_.set_option(websocket::stream_base::timeout::suggested(beast::role_type::server));
        ws_.async_accept(req, beast::bind_front_handler(&WsSession::on_accept, shared_from_this()));
    }

private:
    void on_accept(beast::error_code ec) {
        if (ec) {
            return;
        }
        send(conn_.snapshot());
        do_read();
    }

    void do_read() {
        ws_.async_read(buffer_, beast::bind_front_handler(&WsSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            timer_.cancel();
            return;
        }
        const std::string frame = beast::buffers_to_string(buffer_.data());
        buffer_.consume(buffer_.size());
        for (auto& reply : conn_.handle(std::string_view(frame))) {
            send(reply);
        }
        schedule_playback();
        do_read();
    }

    void schedule_playback() {
        if (!conn_.playing() || ticking_) {
            return;
        }
        ticking_ = true;
        const auto interval = std::chrono::duration<double>(conn_.playback_interval());
        timer_.expires_after(std::chrono::duration_cast<std::chrono::steady_clock::duration>(interval));
        timer_.async_wait(beast::bind_front_handler(&WsSession::on_tick, shared_from_this()));
    }

    void on_tick(beast::error_code ec) {
        ticking_ = false;
        if (ec) {
            return;
        }
        for (auto& reply : conn_.play_next()) {
            send(reply);
        }
        schedule_playback();
    }

    void send(const protocol::json& msg) {
        queue_.push_back(msg.dump());
        if (queue_.size() == 1) {
            do_write();
        }
    }

    void do_write() {
        ws_.text(true);
        ws_.async_write(net::buffer(queue_.front()), beast::bind_front_handler(&WsSession::on_write, shared_from_this()));
    }

    void on_write(beast::error_code ec, std::size_t) {
        if (ec) {
            queue_.clear();
            timer_.cancel();
            return;
        }
        queue_.pop_front();
        if (!queue_.empty()) {
            do_write();
        }
    }

    websocket::stream<beast::tcp_stream> ws_;
    net::steady_timer timer_;
    beast::flat_buffer buffer_;
    std::deque<std::string> queue_;
    protocol::Connection conn_;
    bool ticking_ = false;
};

class HttpSession : public std::enable_shared_from_this<HttpSession> {
public:
    HttpSession(tcp::socket&& socket, const ServerOptions& options) : stream_(std::move(socket)), options_(options) {}

    void run() {
        net::dispatch(stream_.get_executor(), beast::bind_front_handler(&HttpSession::do_read, shared_from_this()));
    }

private:
    void do_read() {
        req_ = {};
        stream_.expires_after(std::chrono::seconds(30));
        http::async_read(stream_, buffer_, req_, beast::bind_front_handler(&HttpSession::on_read, shared_from_this()));
    }

    void on_read(beast::error_code ec, std::size_t) {
        if (ec) {
            stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
            return;
        }
        if (websocket::is_upgrade(req_)) {
            if (req_.target() == "/ws") {
                stream_.expires_never();
                std::make_shared<WsSession>(stream_.release_socket(), options_.connection)->run(std::move(req_));
                return;
            }
            write(respond(http::status::not_found, "text/plain", "no websocket at this path"));
            return;
        }
        write(route());
    }

    http::response<http::string_body> respond(http::status status, std::string_view type, std::string body) const {
        http::response<http::string_body> res{status, req_.version()};
        res.set(http::field::server, "intent_estimation/" INTENT_VERSION);
        res.set(http::field::content_type, beast::string_view(type.data(), type.size()));
        res.keep_alive(req_.keep_alive());
        res.body() = std::move(body);
        res.prepare_payload();
        return res;
    }

    http::response<http::string_body> route() const {
        if (req_.method() != http::verb::get && req_.method() != http::verb::head) {
            return respond(http::status::method_not_allowed, "text/plain", "method not allowed");
        }
        const std::string target(req_.target().substr(0, req_.target().find('?')));
        if (target == "/health") {
            return respond(http::status::ok, "application/json", health_document());
        }
        if (!options_.static_dir || target.empty() || target[0] != '/' || target.find("..") != std::string::npos) {
            return respond(http::status::not_found, "text/plain", "not found");
        }
        std::filesystem::path path = *options_.static_dir / target.substr(1);
        if (target.back() == '/') {
            path /= "index.html";
        }
        std::ifstream in(path, std::ios::binary);
        if (!in || std::filesystem::is_directory(path)) {
            return respond(http::status::not_found, "text/plain", "not found");
        }
        std::ostringstream body;
        body << in.rdbuf();
        return respond(http::status::ok, mime_type(path), body.str());
    }

    void write(http::response<http::string_body> res) {
        auto sp = std::make_shared<http::response<http::string_body>>(std::move(res));
        http::async_write(stream_, *sp, [self = shared_from_this(), sp](beast::error_code ec, std::size_t) {
            if (ec) {
                return;
            }
            if (!sp->keep_alive()) {
                self->stream_.socket().shutdown(tcp::socket::shutdown_send, ec);
                return;
            }
            self->do_read();
        });
    }

    beast::tcp_stream stream_;
    beast::flat_buffer buffer_;
    http::request<http::string_body> req_;
    const ServerOptions& options_;
};

}  // namespace

struct Server::Impl {
    ServerOptions options;
    net::io_context ioc;
    tcp::acceptor acceptor{ioc};
    net::signal_set signals{ioc};

    explicit Impl(ServerOptions opts) : options(std::move(opts)), ioc(std::max(1, options.threads)) {}

    void do_accept() {
        acceptor.async_accept(net::make_strand(ioc), [this](beast::error_code ec, tcp::socket socket) {
            if (!ec) {
                std::make_shared<HttpSession>(std::move(socket), options)->run();
            }
            if (acceptor.is_open()) {
                do_accept();
            }
        });
    }
};

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
    // Fail early on a bad session configuration rather than per connection.
    protocol::Connection probe(impl_->options.connection);
    beast::error_code ec;
    const auto address = net::ip::make_address(impl_->options.address, ec);
    if (ec) {
        throw BindError("invalid address '" + impl_->options.address + "'");
    }
    const tcp::endpoint endpoint{address, impl_->options.port};
    auto& acc = impl_->acceptor;
    acc.open(endpoint.protocol(), ec);
    if (!ec) acc.set_option(net::socket_base::reuse_address(true), ec);
    if (!ec) acc.bind(endpoint, ec);
    if (!ec) acc.listen(net::socket_base::max_listen_connections, ec);
    if (ec) {
        throw BindError("cannot listen on " + impl_->options.address + ":" + std::to_string(impl_->options.port) +
                        ": " + ec.message());
    }
    impl_->do_accept();
    if (impl_->options.stop_on_signals) {
        impl_->signals.add(SIGINT);
        impl_->signals.add(SIGTERM);
        impl_->signals.async_wait([this](beast::error_code, int) { stop(); });
    }
}

Server::~Server() = default;

unsigned short Server::port() const { return impl_->acceptor.local_endpoint().port(); }

void Server::run() {
    std::vector<std::thread> extra;
    for (int i = 1; i < impl_->options.threads; ++i) {
        extra.emplace_back([this] { impl_->ioc.run(); });
    }
    impl_->ioc.run();
    for (auto& t : extra) {
        t.join();
    }
}

void Server::stop() { impl_->ioc.stop(); }

}  // namespace intent
