#include "slotkit/remote.hpp"

#include <cstdlib>
#include <mutex>
#include <utility>

#include <httplib.h>
#include <json.hpp>

#include "slotkit/errors.hpp"
#include "slotkit/image_io.hpp"

namespace slotkit {

namespace {

using nlohmann::json;

class RemoteBackend : public GroundingBackend {
public:
    explicit RemoteBackend(RemoteConfig cfg) : cfg_(std::move(cfg)) {}

    GroundResult ground(const RgbImage& head_rgb, const std::string& instruction) override {
        const std::lock_guard<std::mutex> flight(flight_);

        httplib::Client client(cfg_.host, cfg_.port);
        client.set_connection_timeout(cfg_.timeout_sec, 0);
        client.set_read_timeout(cfg_.timeout_sec, 0);
        client.set_write_timeout(cfg_.timeout_sec, 0);

        httplib::Headers headers;
        if (const char* token = std::getenv(kApiTokenEnvVar); token && *token) {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }

        json request;
        request["image"] = base64_encode(encode_png(head_rgb));
        request["prompt"] = grounding_prompt(instruction);

        auto res = client.Post(cfg_.path, headers, request.dump(), "application/json");
        if (!res) {
            throw TransportError("no response from " + cfg_.host + ":" +
                                 std::to_string(cfg_.port) + cfg_.path + " (" +
                                 httplib::to_string(res.error()) + ")");
        }
        if (res->status != 200) {
            throw BackendRefusal("endpoint " + cfg_.path + " returned status " +
                                 std::to_string(res->status));
        }

        const json body = json::parse(res->body, nullptr, false);
        if (body.is_discarded() || !body.contains("image") || !body["image"].is_string()) {
            throw BackendRefusal("response body is not a JSON document with an image field");
        }

        RgbImage edited;
        try {
            edited = decode_png(base64_decode(body["image"].get<std::string>()));
        } catch (const Error& e) {
            throw BackendRefusal(std::string("response image does not decode: ") + e.what());
        }
        if (edited.width != head_rgb.width || edited.height != head_rgb.height) {
            throw DimensionMismatch("edited image is " + std::to_string(edited.width) + "x" +
                                    std::to_string(edited.height) + ", input was " +
                                    std::to_string(head_rgb.width) + "x" +
                                    std::to_string(head_rgb.height));
        }
        return {std::move(edited), std::nullopt};
    }

private:
    RemoteConfig cfg_;
    std::mutex flight_;
};

}  // namespace

RemoteConfig parse_endpoint(const std::string& endpoint) {
    const auto colon = endpoint.find(':');
    if (colon == std::string::npos || colon == 0) {
        throw ConfigError("endpoint '" + endpoint + "' is not host:port[/path]");
    }
    RemoteConfig cfg;
    cfg.host = endpoint.substr(0, colon);
    const auto slash = endpoint.find('/', colon);
    const std::string port_text = endpoint.substr(
        colon + 1, slash == std::string::npos ? std::string::npos : slash - colon - 1);
    if (port_text.empty() ||
        port_text.find_first_not_of("0123456789") != std::string::npos) {
        throw ConfigError("endpoint '" + endpoint + "' has a non-numeric port");
    }
    const long port = std::strtol(port_text.c_str(), nullptr, 10);
    if (port < 1 || port > 65535) {
        throw ConfigError("endpoint port " + port_text + " is out of range");
    }
    cfg.port = static_cast<int>(port);
    if (slash != std::string::npos) cfg.path = endpoint.substr(slash);
    return cfg;
}

std::string grounding_prompt(const std::string& instruction_text) {
    return instruction_text +
           "\nrender a single small solid blue sphere marker at the described slot; "
           "change nothing else";
}

std::unique_ptr<GroundingBackend> remote_backend(const RemoteConfig& config) {
    return std::make_unique<RemoteBackend>(config);
}

}  // namespace slotkit
