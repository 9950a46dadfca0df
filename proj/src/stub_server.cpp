#include "slotkit/stub_server.hpp"

#include <atomic>
#include <mutex>
#include <stdexcept>
#include <thread>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "slotkit/image_io.hpp"

namespace slotkit {

namespace {

using nlohmann::json;

RgbImage resample_nearest(const RgbImage& src, int width, int height) {
    RgbImage out(width, height);
    for (int y = 0; y < height; ++y) {
        const int sy = static_cast<int>(static_cast<long long>(y) * src.height / height);
        for (int x = 0; x < width; ++x) {
            const int sx = static_cast<int>(static_cast<long long>(x) * src.width / width);
            out.set(x, y, src.at(sx, sy));
        }
    }
    return out;
}

}  // namespace

struct StubServer::Impl {
    enum class Mode { Echo, Resize, Refuse, Garble, Transform };

    Mode mode = Mode::Echo;
    int resize_w = 0;
    int resize_h = 0;
    Transform fn;

    httplib::Server server;
    std::thread worker;
    int port = 0;
    std::atomic<int> requests{0};
    mutable std::mutex state;
    std::string last_auth;

    void handle(const httplib::Request& req, httplib::Response& res) {
        ++requests;
        {
            const std::lock_guard<std::mutex> lock(state);
            last_auth = req.get_header_value("Authorization");
        }
        if (mode == Mode::Refuse) {
            res.status = 503;
            res.set_content("unavailable", "text/plain");
            return;
        }
        if (mode == Mode::Garble) {
            res.set_content("not a json document", "text/plain");
            return;
        }
        const json body = json::parse(req.body, nullptr, false);
        if (body.is_discarded() || !body.contains("image") || !body["image"].is_string() ||
            !body.contains("prompt") || !body["prompt"].is_string()) {
            res.status = 400;
            res.set_content("bad request", "text/plain");
            return;
        }
        if (mode == Mode::Echo) {
            res.set_content(json{{"image", body["image"]}}.dump(), "application/json");
            return;
        }
        const RgbImage input = decode_png(base64_decode(body["image"].get<std::string>()));
        const RgbImage output = mode == Mode::Resize
                                    ? resample_nearest(input, resize_w, resize_h)
                                    : fn(input, body["prompt"].get<std::string>());
        res.set_content(json{{"image", base64_encode(encode_png(output))}}.dump(),
                        "application/json");
    }
};

StubServer::StubServer() : impl_(std::make_unique<Impl>()) {}
StubServer::StubServer(StubServer&&) noexcept = default;
StubServer& StubServer::operator=(StubServer&&) noexcept = default;

StubServer::~StubServer() {
    if (impl_) stop();
}

StubServer StubServer::echo() {
    return StubServer();
}

StubServer StubServer::resized(int width, int height) {
    StubServer s;
    s.impl_->mode = Impl::Mode::Resize;
    s.impl_->resize_w = width;
    s.impl_->resize_h = height;
    return s;
}

StubServer StubServer::refusing() {
    StubServer s;
    s.impl_->mode = Impl::Mode::Refuse;
    return s;
}

StubServer StubServer::garbled() {
    StubServer s;
    s.impl_->mode = Impl::Mode::Garble;
    return s;
}

StubServer StubServer::transforming(Transform fn) {
    StubServer s;
    s.impl_->mode = Impl::Mode::Transform;
    s.impl_->fn = std::move(fn);
    return s;
}

int StubServer::start(int port) {
    Impl& impl = *impl_;
    impl.server.Post(R"(/.*)", [&impl](const httplib::Request& req, httplib::Response& res) {
        impl.handle(req, res);
    });
    if (port == 0) {
        impl.port = impl.server.bind_to_any_port("127.0.0.1");
        if (impl.port <= 0) throw std::runtime_error("stub server failed to bind");
    } else {
        if (!impl.server.bind_to_port("127.0.0.1", port)) {
            throw std::runtime_error("stub server failed to bind port " + std::to_string(port));
        }
        impl.port = port;
    }
    impl.worker = std::thread([&impl] { impl.server.listen_after_bind(); });
    impl.server.wait_until_ready();
    return impl.port;
}

void StubServer::stop() {
    if (!impl_->worker.joinable()) return;
    impl_->server.stop();
    impl_->worker.join();
}

void StubServer::wait() {
    if (impl_->worker.joinable()) impl_->worker.join();
}

int StubServer::port() const {
    return impl_->port;
}

int StubServer::request_count() const {
    return impl_->requests.load();
}

std::string StubServer::last_authorization() const {
    const std::lock_guard<std::mutex> lock(impl_->state);
    return impl_->last_auth;
}

}  // namespace slotkit
