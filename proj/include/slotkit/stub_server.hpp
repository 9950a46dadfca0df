#pragma once

#include <functional>
#include <memory>
#include <string>

#include "slotkit/image.hpp"

namespace slotkit {

// In-process HTTP server speaking the grounding wire contract, for tests and
// offline runs: POST {image: base64 PNG, prompt} -> {image: base64 PNG}.
// Answers on every path.
class StubServer {
public:
    // fn(decoded request image, prompt) -> response image
    using Transform = std::function<RgbImage(const RgbImage&, const std::string&)>;

    // Echoes the request's image bytes back verbatim.
    static StubServer echo();
    // Nearest-neighbor resample to width x height regardless of input size.
    static StubServer resized(int width, int height);
    // Responds 503 to every request.
    static StubServer refusing();
    // Responds 200 with a body that is not a JSON document.
    static StubServer garbled();
    // Decodes the image, applies fn, re-encodes.
    static StubServer transforming(Transform fn);

    StubServer(StubServer&&) noexcept;
    StubServer& operator=(StubServer&&) noexcept;
    ~StubServer();

    // Binds 127.0.0.1 (port 0 picks a free one) and serves on a background
    // thread until stop() or destruction. Returns the bound port.
    int start(int port = 0);
    void stop();
    // Blocks until the server is stopped from another thread or a signal.
    void wait();

    int port() const;
    int request_count() const;
    // Authorization header of the most recent request ("" if absent).
    std::string last_authorization() const;

private:
    StubServer();
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

}  // namespace slotkit
